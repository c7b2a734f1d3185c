#include "lpoint/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "lpoint/electrostatics.hpp"
#include "lpoint/error.hpp"
#include "lpoint/grouptheory.hpp"
#include "lpoint/injection.hpp"
#include "lpoint/lattice.hpp"
#include "lpoint/report.hpp"
#include "lpoint/spinorbit.hpp"
#include "lpoint/valleys.hpp"

namespace lpoint {

namespace {

struct Info {
    const char* name;
    double budget;
};

const Info kInfo[kCriteria + 1] = {
    {"", 0.0},
    {"Dresselhaus cancellation on the Lambda axis", 1.0},
    {"spin-summed p-orbital equality on Lambda", 1.0},
    {"BSVSP spin-polarization cancellation", 5.0},
    {"double-group character table", 1.0},
    {"band topology", 30.0},
    {"dot electron count table", 1.0},
    {"valley splitting patterns", 1.0},
    {"injection protocol", 30.0},
    {"Poisson solver", 60.0},
    {"protruding vs planarized fin gradient", 120.0},
    {"determinism", 300.0},
};

using Files = std::map<std::string, std::string>;

struct Outcome {
    bool pass = false;
    std::string measured;
};

std::string yes(bool b) { return b ? "ok" : "FAIL"; }

// 1..3 share the spin-orbit check runner
Outcome spinorbit_criterion(const char* check, const VerifyOptions& o, double max_allowed) {
    SpinorbitCheckOptions so;
    so.seed = o.seed;
    so.samples = 1000;
    so.params = o.params;
    const auto r = run_spinorbit_checks(check, so).at(0);
    Outcome out;
    out.pass = r.pass && r.max_residual <= max_allowed;
    out.measured = std::string(check) + " max residual " + fmt_num(r.max_residual, 6) + " (threshold " +
                   fmt_num(max_allowed, 3) + ")" + (r.detail.empty() ? "" : "; " + r.detail);
    return out;
}

Outcome c4() {
    const auto& t = builtin_table();
    const double row = t.row_orthogonality_defect();
    const double col = t.column_orthogonality_defect();
    int dims = 0;
    for (const auto& ir : t.irreps()) dims += ir.dimension() * ir.dimension();
    const std::string l1 = format_decomposition(decompose(parse_rep_expression("L1*D12")));
    const std::string l3 = format_decomposition(decompose(parse_rep_expression("L3*D12")));
    Outcome out;
    out.pass = row < 1e-12 && col < 1e-12 && dims == 12 && t.order() == 12 && l1 == "Λ6" && l3 == "Λ4 ⊕ Λ5 ⊕ Λ6";
    out.measured = "row defect " + fmt_num(row, 3) + ", column defect " + fmt_num(col, 3) + ", sum dim^2 " +
                   std::to_string(dims) + ", L1xD1/2 = " + l1 + ", L3xD1/2 = " + l3;
    return out;
}

Outcome c5(const VerifyOptions& o) {
    const BandTopology t = band_topology(o.params, 200);
    BandOptions bo;
    bo.threads = o.threads;
    const BandSet bands = solve_bands(o.params, composite_path("G-D-X,G-L-L", 200), bo);
    const double ov = bands.min_match_overlap();
    const bool k0 = std::abs(t.k0 - 0.85) <= 0.05;
    const bool gap = std::abs(t.gap - 1.1) <= 0.2;
    const bool lx = std::abs(t.l_minus_x0 - 1.0) <= 0.3;
    const bool frac = t.s_frac_lambda > t.s_frac_delta;
    Outcome out;
    out.pass = k0 && gap && lx && frac && ov > 0.5;
    out.measured = "k0 " + fmt_num(t.k0, 4) + " " + yes(k0) + ", gap " + fmt_num(t.gap, 4) + " eV " + yes(gap) +
                   ", E(L)-E(X0) " + fmt_num(t.l_minus_x0, 4) + " eV " + yes(lx) + ", s_frac Lambda1 " +
                   fmt_num(t.s_frac_lambda, 4) + " vs Delta1 " + fmt_num(t.s_frac_delta, 4) + " " + yes(frac) +
                   ", min band overlap " + fmt_num(ov, 4);
    return out;
}

Outcome c6() {
    const LatticeSpec spec;
    struct Row {
        double side;
        std::int64_t cells, electrons;
    };
    const Row rows[] = {{5.0, 781, 1562}, {2.0, 50, 100}, {1.0, 6, 12}};
    Outcome out;
    out.pass = true;
    for (const auto& r : rows) {
        const auto d = count_dot_levels({r.side}, spec);
        const bool ok = d.unit_cells == r.cells && d.electrons == r.electrons;
        out.pass = out.pass && ok;
        out.measured += fmt_num(r.side, 3) + " nm: " + std::to_string(d.unit_cells) + "/" + std::to_string(d.electrons) +
                        " " + yes(ok) + ", ";
    }
    const auto ten = count_dot_levels({10.0}, spec);
    out.measured += "10 nm: " + std::to_string(ten.unit_cells) + "/" + std::to_string(ten.electrons) + " (exact " +
                    fmt_num(ten.exact_cells, 6) + " cells; table lists 6250)";
    return out;
}

Outcome c7(const VerifyOptions& o) {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> mt_dist(0.05, 0.5), ratio(1.2, 20.0);
    const Vec3 z = parse_direction("001"), d111 = parse_direction("111");
    int bad_pattern = 0;
    double worst_scaling = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double mt = mt_dist(rng);
        const double ml = mt * ratio(rng);
        const auto xs = make_valley_set(ValleyFamily::X0, ml, mt, z);
        const auto ls = make_valley_set(ValleyFamily::L, ml, mt, d111);
        double ref_x = 0.0, ref_l = 0.0;
        for (int wi = 0; wi < 20; ++wi) {
            const double w = 1.0 + 1.5 * wi;
            const auto rx = split_valleys(xs, w);
            const auto rl = split_valleys(ls, w);
            if (rx.groups.size() != 2 || rx.ground_degeneracy != 2 || rx.groups[1].degeneracy != 4) ++bad_pattern;
            if (rl.groups.size() != 2 || rl.ground_degeneracy != 1 || rl.groups[1].degeneracy != 3) ++bad_pattern;
            const double sx = rx.splitting_ev() * w * w, sl = rl.splitting_ev() * w * w;
            if (wi == 0) {
                ref_x = sx;
                ref_l = sl;
            }
            worst_scaling = std::max({worst_scaling, std::abs(sx - ref_x) / ref_x, std::abs(sl - ref_l) / ref_l});
        }
    }
    Outcome out;
    out.pass = bad_pattern == 0 && worst_scaling < 1e-9;
    out.measured = "2000 cases, pattern mismatches " + std::to_string(bad_pattern) +
                   " (X0/001: 2 then 4, L/111: 1 then 3), worst 1/W^2 deviation " + fmt_num(worst_scaling, 3);
    return out;
}

Outcome c8(const VerifyOptions& o, Files* files) {
    Outcome out;
    std::ostringstream m;
    const ProtocolConfig base;
    const DotSpec& spec = base.spec;
    const Window win = stop_window(spec, base.delta_e_l_gamma);
    const double mu_s = 0.5 * (win.lo + win.hi);

    // (a) fill stops on the seventh electron, which sits on L
    DeviceState st = DeviceState::make(spec, mu_s, base.mu_d, base.delta_e_l_gamma);
    EventLog log;
    fill_from_source(st, spec, log);
    const bool a = st.electrons(kQubit1) == 7 && st.l_electrons(kQubit1, spec) == 1 && st.x0_electrons(kQubit1, spec) == 6;
    m << "(a) Qubit1 " << st.electrons(kQubit1) << " electrons, " << st.l_electrons(kQubit1, spec) << " on L " << yes(a);

    // (b) one L transfer, then blockade
    const bool moved = shuttle(st, spec, Channel::L, log);
    fill_from_source(st, spec, log);
    const bool again = shuttle(st, spec, Channel::L, log);
    const bool b = moved && !again && log.events().back().kind == EventKind::blockade && st.l_electrons(kQubit2, spec) == 1;
    m << "; (b) second L transfer " << (again ? "happened" : "blocked") << " " << yes(b);

    // (c) p_L = 0: X0 cascade, detection and flush
    ProtocolConfig cx = base;
    cx.params.p_l = 0.0;
    cx.params.seed = o.seed;
    cx.max_retries = 1;
    int after_flush = -1;
    const auto rx = run_protocol(cx, [&](const DeviceState& s, const ProtocolEvent& e) {
        if (e.kind == EventKind::drain_flush && after_flush < 0) after_flush = s.x0_electrons(kQubit2, spec);
    });
    bool saw_x0 = false;
    for (const auto& e : rx.events) saw_x0 = saw_x0 || e.kind == EventKind::detect_X0;
    const bool c = !rx.success && !rx.transfers_per_attempt.empty() && rx.transfers_per_attempt[0] == 6 && saw_x0 &&
                   after_flush == 0;
    m << "; (c) X0 signature " << (rx.transfers_per_attempt.empty() ? 0 : rx.transfers_per_attempt[0])
      << " transfers, detect_X0 " << (saw_x0 ? "yes" : "no") << ", X0 left after flush " << after_flush << " " << yes(c);

    // (d) retry statistics
    ProtocolConfig cm = base;
    cm.params.p_l = 0.5;
    cm.params.seed = o.seed;
    const auto mc = run_monte_carlo(cm, 10000, o.threads);
    const bool d_succ = std::abs(mc.success_rate - mc.expected_success) <= 3.0 * mc.success_sigma;
    const bool d_ret = std::abs(mc.mean_retries - mc.expected_mean_retries) <= 3.0 * mc.retries_sigma;
    const bool d = d_succ && d_ret;
    m << "; (d) success " << fmt_num(mc.success_rate, 5) << " vs " << fmt_num(mc.expected_success, 5) << " +- "
      << fmt_num(3.0 * mc.success_sigma, 3) << ", mean retries " << fmt_num(mc.mean_retries, 5) << " vs "
      << fmt_num(mc.expected_mean_retries, 5) << " +- " << fmt_num(3.0 * mc.retries_sigma, 3) << " " << yes(d);

    // (e) identical logs for a fixed seed
    auto log_text = [&] {
        std::ostringstream os;
        write_events_csv(os, run_protocol(cm).events);
        return os.str();
    };
    const std::string first = log_text();
    const bool e = first == log_text();
    m << "; (e) event logs identical " << yes(e);

    if (files) {
        (*files)["c8_events.csv"] = first;
        std::ostringstream hist;
        hist << "retries,count\n";
        for (std::size_t i = 0; i < mc.retry_histogram.size(); ++i) hist << i << ',' << mc.retry_histogram[i] << '\n';
        (*files)["c8_retry_histogram.csv"] = hist.str();
    }
    out.pass = a && b && c && d && e;
    out.measured = m.str();
    return out;
}

double parallel_plate_error() {
    PoissonProblem p;
    p.nz = 40;
    p.ny = 6;
    p.h_nm = 1.0;
    const auto n = static_cast<std::size_t>(p.nz * p.ny);
    p.eps.assign(n, 0.0);
    p.fixed.assign(n, 0);
    p.value.assign(n, 0.0);
    std::vector<double> eps_row(static_cast<std::size_t>(p.nz));
    for (int z = 0; z < p.nz; ++z) {
        eps_row[static_cast<std::size_t>(z)] = z < 17 ? 11.7 : 3.9;
        for (int y = 0; y < p.ny; ++y) {
            const auto i = static_cast<std::size_t>(z * p.ny + y);
            p.eps[i] = eps_row[static_cast<std::size_t>(z)];
            if (z == 0 || z == p.nz - 1) {
                p.fixed[i] = 1;
                p.value[i] = z == 0 ? 0.0 : 1.0;
            }
        }
    }
    // series resistances between neighbouring row centres
    std::vector<double> at(static_cast<std::size_t>(p.nz), 0.0);
    for (int z = 1; z < p.nz; ++z) {
        const double a = eps_row[static_cast<std::size_t>(z - 1)], b = eps_row[static_cast<std::size_t>(z)];
        at[static_cast<std::size_t>(z)] = at[static_cast<std::size_t>(z - 1)] + 0.5 / a + 0.5 / b;
    }
    SolveOptions so;
    so.tol = 1e-14;
    const FieldGrid f = solve_problem(p, so);
    double err = 0.0;
    for (int z = 0; z < p.nz; ++z)
        for (int y = 0; y < p.ny; ++y)
            err = std::max(err, std::abs(f.at(z, y) - at[static_cast<std::size_t>(z)] / at.back()));
    return err;
}

Outcome c9() {
    Outcome out;
    std::ostringstream m;
    SolveOptions tight;
    tight.tol = 1e-13;

    BoundarySpec same;
    same.gate_voltage = 0.7;
    same.substrate_voltage = 0.7;
    const auto g0 = build_geometry(FinVariant::protruding, 5.0, 1.0);
    const auto fc = solve_poisson(g0, same, {}, tight);
    const double const_err = std::max(std::abs(fc.max() - 0.7), std::abs(fc.min() - 0.7));
    const double plate_err = parallel_plate_error();
    const bool exact = const_err < 1e-10 && plate_err < 1e-10;
    m << "constant error " << fmt_num(const_err, 3) << ", parallel-plate error " << fmt_num(plate_err, 3) << " " << yes(exact);

    const double e64 = sinusoidal_benchmark_error(64), e128 = sinusoidal_benchmark_error(128),
                 e256 = sinusoidal_benchmark_error(256);
    const double r1 = e64 / e128, r2 = e128 / e256;
    const bool conv = std::abs(r1 - 4.0) <= 0.3 && std::abs(r2 - 4.0) <= 0.3;
    m << "; sinusoidal errors " << fmt_num(e64, 4) << ", " << fmt_num(e128, 4) << ", " << fmt_num(e256, 4) << " (257 nodes), ratios "
      << fmt_num(r1, 4) << ", " << fmt_num(r2, 4) << " " << yes(conv);

    bool props = true;
    SolveOptions sym;
    sym.tol = 1e-12;
    for (auto v : {FinVariant::planarized, FinVariant::protruding}) {
        const auto g = build_geometry(v, 5.0, 1.0);
        BoundarySpec bc;
        const auto f = solve_poisson(g, bc, {}, sym);
        const double lo = std::min(bc.gate_voltage, bc.substrate_voltage), hi = std::max(bc.gate_voltage, bc.substrate_voltage);
        const bool maxp = f.min() >= lo - 1e-12 && f.max() <= hi + 1e-12;
        double asym = 0.0;
        for (int z = 0; z < f.nz; ++z)
            for (int y = 0; y < f.ny; ++y) asym = std::max(asym, std::abs(f.at(z, y) - f.at(z, f.ny - 1 - y)));
        const bool mirror = asym < 1e-8;
        props = props && maxp && mirror;
        m << "; " << to_string(v) << " range [" << fmt_num(f.min(), 6) << ", " << fmt_num(f.max(), 6) << "], mirror defect "
          << fmt_num(asym, 2) << " " << yes(maxp && mirror);
    }
    out.pass = exact && conv && props;
    out.measured = m.str();
    return out;
}

Outcome c10() {
    Outcome out;
    std::ostringstream m;
    out.pass = true;
    for (int w : {3, 5, 8})
        for (double v : {0.5, 1.0}) {
            BoundarySpec bc;
            bc.gate_voltage = v;
            const auto gp = build_geometry(FinVariant::planarized, w, 1.0);
            const auto gr = build_geometry(FinVariant::protruding, w, 1.0);
            const auto mp = fin_gradient_metric(solve_poisson(gp, bc), gp);
            const auto mr = fin_gradient_metric(solve_poisson(gr, bc), gr);
            const bool ok = mr.max_abs < mp.max_abs && mr.mean_abs < mp.mean_abs;
            out.pass = out.pass && ok;
            m << "W=" << w << " V=" << fmt_num(v, 2) << ": max " << fmt_num(mr.max_abs, 4) << " < " << fmt_num(mp.max_abs, 4)
              << ", mean " << fmt_num(mr.mean_abs, 4) << " < " << fmt_num(mp.mean_abs, 4) << " " << yes(ok) << "; ";
        }
    out.measured = m.str();
    out.measured.resize(out.measured.size() - 2);
    return out;
}

Outcome dispatch(int id, const VerifyOptions& o, Files* files) {
    switch (id) {
        case 1: return spinorbit_criterion("dso-lambda", o, 0.0);
        case 2: return spinorbit_criterion("p-equality", o, 1e-12);
        case 3: return spinorbit_criterion("bsvsp", o, 1e-10);
        case 4: return c4();
        case 5: return c5(o);
        case 6: return c6();
        case 7: return c7(o);
        case 8: return c8(o, files);
        case 9: return c9();
        case 10: return c10();
        default: throw PreconditionError("no criterion " + std::to_string(id));
    }
}

std::string report_csv(const std::vector<CriterionResult>& rs) {
    std::ostringstream os;
    os << "criterion,name,pass,measured\n";
    for (const auto& r : rs) {
        std::string meas = r.measured;
        for (auto& ch : meas)
            if (ch == '"') ch = '\'';
        os << r.id << ',' << r.name << ',' << (r.pass ? "pass" : "fail") << ",\"" << meas << "\"\n";
    }
    return os.str();
}

std::string report_json(const std::vector<CriterionResult>& rs) {
    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (const auto& r : rs) {
        arr.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"measured", r.measured}});
        all = all && r.pass;
    }
    return nlohmann::json{{"all_pass", all}, {"criteria", arr}}.dump(2) + "\n";
}

}  // namespace

std::string criterion_name(int id) {
    if (id < 1 || id > kCriteria) throw PreconditionError("no criterion " + std::to_string(id));
    return kInfo[id].name;
}

CriterionResult run_criterion(int id, const VerifyOptions& opts, Files* files) {
    if (id < 1 || id > 10) throw PreconditionError("criterion " + std::to_string(id) + " is not a single-run check");
    CriterionResult r;
    r.id = id;
    r.name = kInfo[id].name;
    r.budget_seconds = kInfo[id].budget;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Outcome o = dispatch(id, opts, files);
        r.pass = o.pass;
        r.measured = o.measured;
    } catch (const std::exception& e) {
        r.pass = false;
        r.measured = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.budget_seconds) {
        r.pass = false;
        r.measured += "; over runtime budget of " + fmt_num(r.budget_seconds, 3) + " s";
    }
    return r;
}

bool VerifyReport::all_pass() const {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

VerifyReport run_verify_all(const VerifyOptions& opts) {
    VerifyReport rep;
    for (int id = 1; id <= 10; ++id) rep.results.push_back(run_criterion(id, opts, &rep.files));

    // 11: regenerate everything on one worker thread and compare bytes
    CriterionResult r11;
    r11.id = 11;
    r11.name = kInfo[11].name;
    r11.budget_seconds = kInfo[11].budget;
    const auto t0 = std::chrono::steady_clock::now();
    VerifyOptions single = opts;
    single.threads = 1;
    Files again;
    std::vector<CriterionResult> second;
    for (int id = 1; id <= 10; ++id) second.push_back(run_criterion(id, single, &again));
    // budget notes depend on wall time, compare the measurements only
    auto strip = [](std::vector<CriterionResult> v) {
        for (auto& r : v) {
            const auto pos = r.measured.find("; over runtime budget");
            if (pos != std::string::npos) r.measured.resize(pos);
            r.pass = true;
        }
        return report_csv(v);
    };
    std::size_t differing = 0;
    for (const auto& [name, text] : rep.files) {
        const auto it = again.find(name);
        if (it == again.end() || it->second != text) ++differing;
    }
    const bool same_report = strip(rep.results) == strip(second);
    r11.pass = same_report && differing == 0 && again.size() == rep.files.size();
    r11.measured = std::string("second run on 1 thread: report ") + (same_report ? "identical" : "differs") + ", " +
                   std::to_string(rep.files.size() - differing) + "/" + std::to_string(rep.files.size()) +
                   " artifact files identical";
    r11.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r11.seconds > r11.budget_seconds) {
        r11.pass = false;
        r11.measured += "; over runtime budget";
    }
    rep.results.push_back(r11);

    rep.files["report.csv"] = report_csv(rep.results);
    rep.files["report.json"] = report_json(rep.results);
    return rep;
}

std::string format_result_line(const CriterionResult& r) {
    char t[32];
    std::snprintf(t, sizeof t, "%.2f", r.seconds);
    return std::string(r.pass ? "PASS" : "FAIL") + " C" + std::to_string(r.id) + " " + r.name + ": " + r.measured + " (" + t +
           " s)";
}

}  // namespace lpoint
