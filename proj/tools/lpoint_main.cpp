// lpoint: command-line front end. One subcommand per module plus verify_all.
// Exit codes: 0 pass, 1 check failure or runtime error, 2 usage/config error.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpoint/config.hpp"
#include "lpoint/electrostatics.hpp"
#include "lpoint/error.hpp"
#include "lpoint/grouptheory.hpp"
#include "lpoint/injection.hpp"
#include "lpoint/lattice.hpp"
#include "lpoint/report.hpp"
#include "lpoint/spinorbit.hpp"
#include "lpoint/tightbinding.hpp"
#include "lpoint/valleys.hpp"
#include "lpoint/verify.hpp"

using namespace lpoint;
using nlohmann::json;

namespace {

struct Run {
    Config cfg;
    std::string out_dir;
    std::vector<std::string> outputs;
    json extra = json::object();

    void write(const std::string& name, const std::string& text) {
        write_file((std::filesystem::path(out_dir) / name).string(), text);
        outputs.push_back(name);
    }
};

const std::map<std::string, std::string>& subcommand_docs() {
    static const std::map<std::string, std::string> docs{
        {"bands", "Band structure along a k-path.\nOutputs: bands.csv (s,k_label,band_index,energy_ev), "
                  "fractions.csv (band_index,k_index,s,p,pz,sstar), kpath.csv (s,kx,ky,kz), topology.json"},
        {"spinorbit", "Spin-orbit verification checks.\nOutputs: spinorbit_checks.csv, spinorbit_checks.json"},
        {"group", "Double-group character table and a product decomposition.\nOutputs: group.json"},
        {"valleys", "Valley ordering under confinement along a growth axis.\nOutputs: valleys.json"},
        {"dots", "Unit cells, levels and electrons in a cubic dot; prints cells/levels/electrons.\nOutputs: dots.json"},
        {"inject", "Injection protocol run plus optional Monte Carlo retry statistics.\n"
                   "Outputs: events.csv (step,kind,dot_from,dot_to,n_moved), summary.json, mc_stats.csv"},
        {"poisson", "Fin cross-section electrostatics.\nOutputs: potential.csv (z,y,phi), contour.csv, contour.pgm, "
                    "metrics.json"},
        {"verify_all", "Full acceptance suite, one line per criterion.\n"
                       "Outputs: report.csv, report.json, c8_events.csv, c8_retry_histogram.csv"},
    };
    return docs;
}

std::string default_text(const ConfigKey& k) {
    if (k.default_value.is_string()) return k.default_value.get<std::string>();
    return k.default_value.dump();
}

int cmd_bands(Run& r) {
    const TBParams p = r.cfg.tb_params();
    const KPath path = composite_path(r.cfg.string("bands.path"), static_cast<std::size_t>(r.cfg.integer("bands.samples")));
    BandOptions bo;
    bo.threads = static_cast<unsigned>(r.cfg.integer("bands.threads"));
    const BandSet bands = solve_bands(p, path, bo);
    std::ostringstream b, f, k;
    write_bands_csv(b, bands);
    write_fractions_csv(f, bands);
    write_kpath_csv(k, path);
    r.write("bands.csv", b.str());
    r.write("fractions.csv", f.str());
    r.write("kpath.csv", k.str());
    const BandTopology t = band_topology(p, static_cast<std::size_t>(r.cfg.integer("bands.samples")));
    const json tj = topology_json(t);
    r.write("topology.json", tj.dump(2) + "\n");
    std::cout << "k-points " << bands.size() << ", bands " << bands.bands() << ", min match overlap "
              << fmt_num(bands.min_match_overlap(), 4) << "\n"
              << "conduction minimum at " << fmt_num(t.k0, 4) << " (2pi/a), gap " << fmt_num(t.gap, 4)
              << " eV, E(L)-E(VBM) " << fmt_num(t.e_l_rel, 4) << " eV, E(L)-E(X0) " << fmt_num(t.l_minus_x0, 4) << " eV\n";
    r.extra["topology"] = tj;
    return 0;
}

int cmd_spinorbit(Run& r) {
    SpinorbitCheckOptions o;
    o.seed = r.cfg.uint64("so.seed");
    o.samples = static_cast<int>(r.cfg.integer("so.samples"));
    o.params = r.cfg.tb_params();
    o.bsvsp_field = r.cfg.multipole_field();
    o.stark_coupling = r.cfg.real("so.stark_coupling");
    const auto checks = run_spinorbit_checks(r.cfg.string("so.check"), o);
    std::ostringstream csv;
    write_checks_csv(csv, checks);
    r.write("spinorbit_checks.csv", csv.str());
    r.write("spinorbit_checks.json", checks_json(checks).dump(2) + "\n");
    bool ok = true;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "pass " : "FAIL ") << c.name << " max residual " << fmt_num(c.max_residual, 6)
                  << " threshold " << fmt_num(c.threshold, 3) << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
        ok = ok && c.pass;
    }
    return ok ? 0 : 1;
}

int cmd_group(Run& r) {
    const auto& t = builtin_table();
    std::cout << format_character_table(t);
    const std::string expr = r.cfg.string("group.decompose");
    json j = {{"table", character_table_json(t)}, {"expression", expr}};
    const RepVector rep = parse_rep_expression(expr);
    try {
        const auto parts = decompose(rep);
        const std::string text = format_decomposition(parts);
        std::cout << expr << " = " << text << "\n";
        j["decomposition"] = text;
    } catch (const NotARepresentation& e) {
        std::cout << expr << ": " << e.what() << "\n";
        j["decomposition"] = nullptr;
        j["error"] = e.what();
        r.write("group.json", j.dump(2) + "\n");
        return 1;
    }
    r.write("group.json", j.dump(2) + "\n");
    return 0;
}

int cmd_valleys(Run& r) {
    const ValleyFamily fam = parse_valley_family(r.cfg.string("valleys.family"));
    const bool l = fam == ValleyFamily::L;
    const double ml = r.cfg.real(l ? "valleys.l_ml" : "valleys.x0_ml");
    const double mt = r.cfg.real(l ? "valleys.l_mt" : "valleys.x0_mt");
    const Vec3 axis = parse_direction(r.cfg.string("valleys.growth"));
    const SplittingReport rep = split_valleys(make_valley_set(fam, ml, mt, axis), r.cfg.real("valleys.width_nm"));
    std::cout << format_splitting(rep);
    json j = splitting_json(rep);
    j["family"] = to_string(fam);
    j["growth"] = r.cfg.string("valleys.growth");
    j["width_nm"] = r.cfg.real("valleys.width_nm");
    r.write("valleys.json", j.dump(2) + "\n");
    return 0;
}

int cmd_dots(Run& r) {
    const DotLevels d = count_dot_levels({r.cfg.real("dots.side_nm")}, r.cfg.lattice(),
                                         parse_rounding(r.cfg.string("dots.rounding")));
    std::cout << d.unit_cells << "/" << d.levels << "/" << d.electrons << "\n";
    const json j = {{"side_nm", r.cfg.real("dots.side_nm")},
                    {"unit_cells", d.unit_cells},
                    {"levels", d.levels},
                    {"electrons", d.electrons},
                    {"exact_cells", d.exact_cells}};
    r.write("dots.json", j.dump(2) + "\n");
    return 0;
}

int cmd_inject(Run& r) {
    const ProtocolConfig pc = r.cfg.protocol();
    const ProtocolReport rep = run_protocol(pc);
    std::ostringstream ev;
    write_events_csv(ev, rep.events);
    r.write("events.csv", ev.str());
    std::map<std::string, int> counts;
    for (const auto& e : rep.events) ++counts[to_string(e.kind)];
    json summary = {{"success", rep.success},
                    {"retries", rep.retries},
                    {"attempts", rep.attempts},
                    {"flushes", rep.flushes},
                    {"transfers_per_attempt", rep.transfers_per_attempt},
                    {"event_counts", counts},
                    {"qubit1_electrons", rep.final_state.electrons(kQubit1)},
                    {"qubit2_electrons", rep.final_state.electrons(kQubit2)},
                    {"qubit2_l_electrons", rep.final_state.l_electrons(kQubit2, pc.spec)}};
    std::cout << (rep.success ? "success" : "no L electron") << " after " << rep.attempts << " attempt(s), "
              << rep.flushes << " flush(es), " << rep.events.size() << " events\n";
    const int trials = static_cast<int>(r.cfg.integer("inject.trials"));
    if (trials > 0) {
        const auto mc = run_monte_carlo(pc, trials, static_cast<unsigned>(r.cfg.integer("inject.threads")));
        std::ostringstream os;
        os << "quantity,measured,expected,sigma\n"
           << "success_rate," << fmt_num(mc.success_rate) << ',' << fmt_num(mc.expected_success) << ','
           << fmt_num(mc.success_sigma) << '\n'
           << "mean_retries," << fmt_num(mc.mean_retries) << ',' << fmt_num(mc.expected_mean_retries) << ','
           << fmt_num(mc.retries_sigma) << '\n';
        for (std::size_t i = 0; i < mc.retry_histogram.size(); ++i)
            os << "retries_" << i << ',' << mc.retry_histogram[i] << ",,\n";
        r.write("mc_stats.csv", os.str());
        summary["monte_carlo"] = {{"trials", mc.trials},
                                  {"success_rate", mc.success_rate},
                                  {"expected_success", mc.expected_success},
                                  {"mean_retries", mc.mean_retries},
                                  {"expected_mean_retries", mc.expected_mean_retries}};
        std::cout << trials << " trials: success " << fmt_num(mc.success_rate, 5) << " (expected "
                  << fmt_num(mc.expected_success, 5) << "), mean retries " << fmt_num(mc.mean_retries, 5) << " (expected "
                  << fmt_num(mc.expected_mean_retries, 5) << ")\n";
    }
    r.write("summary.json", summary.dump(2) + "\n");
    return 0;
}

int cmd_poisson(Run& r) {
    const FinVariant v = parse_fin_variant(r.cfg.string("poisson.variant"));
    const Geometry g = build_geometry(v, r.cfg.real("poisson.w_nm"), r.cfg.real("poisson.h_nm"), r.cfg.fin_dimensions());
    const FieldGrid f = solve_poisson(g, r.cfg.boundary(), {}, r.cfg.solve_options());
    const ContourGrid c = contour_quantize(f, static_cast<int>(r.cfg.integer("poisson.levels")));
    const GradientMetric m = fin_gradient_metric(f, g);
    std::ostringstream pot, ccsv, pgm;
    write_potential_csv(pot, f);
    write_contour_csv(ccsv, c, f.h_nm);
    write_contour_pgm(pgm, c);
    r.write("potential.csv", pot.str());
    r.write("contour.csv", ccsv.str());
    r.write("contour.pgm", pgm.str());
    const json j = {{"variant", to_string(v)},
                    {"nz", g.nz},
                    {"ny", g.ny},
                    {"iterations", f.iterations},
                    {"residual", f.residual},
                    {"phi_min", f.min()},
                    {"phi_max", f.max()},
                    {"gradient_max_v_per_nm", m.max_abs},
                    {"gradient_mean_v_per_nm", m.mean_abs},
                    {"gradient_cells", m.cells}};
    r.write("metrics.json", j.dump(2) + "\n");
    std::cout << to_string(v) << " " << g.nz << "x" << g.ny << " cells, " << f.iterations << " sweeps, fin |dphi/dz| max "
              << fmt_num(m.max_abs, 5) << " mean " << fmt_num(m.mean_abs, 5) << " V/nm\n";
    return 0;
}

int cmd_verify_all(Run& r) {
    VerifyOptions o;
    o.seed = r.cfg.uint64("inject.seed");
    o.params = r.cfg.tb_params();
    const VerifyReport rep = run_verify_all(o);
    for (const auto& res : rep.results) std::cout << format_result_line(res) << "\n";
    for (const auto& [name, text] : rep.files) r.write(name, text);
    std::cout << (rep.all_pass() ? "all criteria pass" : "some criteria FAIL") << "\n";
    return rep.all_pass() ? 0 : 1;
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const Run& r, const std::string& command, int code, const json& error) {
    const json m = {{"command", command},
                    {"timestamp", utc_timestamp()},
                    {"status", code == 0 ? "pass" : code == 1 ? "fail" : "usage_error"},
                    {"exit_code", code},
                    {"error", error},
                    {"outputs", r.outputs},
                    {"results", r.extra},
                    {"config", r.cfg.to_json()}};
    try {
        write_file((std::filesystem::path(r.out_dir) / "manifest.json").string(), m.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"L-point (111) Si spin-qubit toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "JSON config file (nested or dotted keys)");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "seed for every random stream (so.seed, inject.seed)");
    app.add_option("--set", overrides, "override any config key, key=value (repeatable)");

    using Handler = int (*)(Run&);
    const std::vector<std::pair<std::string, Handler>> commands{
        {"bands", cmd_bands},     {"spinorbit", cmd_spinorbit}, {"group", cmd_group},     {"valleys", cmd_valleys},
        {"dots", cmd_dots},       {"inject", cmd_inject},       {"poisson", cmd_poisson}, {"verify_all", cmd_verify_all},
    };
    std::map<std::string, std::string> flag_values;  // config key -> text
    std::map<std::string, CLI::Option*> flag_options;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name, subcommand_docs().at(name));
        sub->footer("Config keys of other subcommands can be set with --set key=value.");
        subs[name] = sub;
        for (const auto& k : config_schema()) {
            if (std::find(k.subcommands.begin(), k.subcommands.end(), name) == k.subcommands.end()) continue;
            if (k.flag() == "--seed") continue;  // the global --seed covers it
            flag_options[name + "|" + k.name] = sub->add_option(k.flag(), flag_values[name + "|" + k.name],
                                                                k.help + " [" + k.name + ", default " + default_text(k) + "]");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string command;
    Handler handler = nullptr;
    for (const auto& [name, fn] : commands)
        if (subs[name]->parsed()) {
            command = name;
            handler = fn;
        }

    Run run;
    run.out_dir = out_dir;
    try {
        if (!config_path.empty()) run.cfg.merge_file(config_path);
        for (const auto& o : overrides) {
            const auto eq = o.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + o);
            run.cfg.set_text(o.substr(0, eq), o.substr(eq + 1));
        }
        for (const auto& [id, opt] : flag_options)
            if (opt->count() > 0 && id.rfind(command + "|", 0) == 0)
                run.cfg.set_text(id.substr(command.size() + 1), flag_values[id]);
        if (seed) {
            run.cfg.set("so.seed", *seed);
            run.cfg.set("inject.seed", *seed);
        }
        // validate the derived objects up front so bad values count as config errors
        run.cfg.tb_params();
        run.cfg.multipole_field();
        run.cfg.protocol();
        run.cfg.boundary();
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        write_manifest(run, command, 2, {{"type", "config"}, {"message", e.what()}});
        return 2;
    }

    int code = 0;
    json error = nullptr;
    try {
        code = handler(run);
    } catch (const PreconditionError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        code = 2;
        error = {{"type", "precondition"}, {"message", e.what()}};
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << " (last residual " << e.last_residual() << ")\n";
        code = 1;
        error = {{"type", "convergence"}, {"message", e.what()}, {"last_residual", e.last_residual()}};
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        code = 1;
        error = {{"type", "io"}, {"message", e.what()}};
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 1;
        error = {{"type", "runtime"}, {"message", e.what()}};
    }
    write_manifest(run, command, code, error);
    return code;
}
