#include "lpoint/electrostatics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <ostream>
#include <utility>

#include "lpoint/error.hpp"

namespace lpoint {

std::string to_string(Region r) {
    switch (r) {
        case Region::si_fin: return "si_fin";
        case Region::oxide: return "oxide";
        case Region::gate: return "gate";
        case Region::substrate: return "substrate";
        case Region::vacuum: return "vacuum";
    }
    return "unknown";
}

FinVariant parse_fin_variant(std::string_view s) {
    if (s == "planarized" || s == "planarised") return FinVariant::planarized;
    if (s == "protruding") return FinVariant::protruding;
    throw PreconditionError("unknown fin variant: " + std::string(s));
}

std::string to_string(FinVariant v) { return v == FinVariant::planarized ? "planarized" : "protruding"; }

InterfaceMode parse_interface_mode(std::string_view s) {
    if (s == "dielectric_continuity") return InterfaceMode::dielectric_continuity;
    if (s == "fixed_potential") return InterfaceMode::fixed_potential;
    throw PreconditionError("unknown interface mode: " + std::string(s));
}

std::string to_string(InterfaceMode m) {
    return m == InterfaceMode::dielectric_continuity ? "dielectric_continuity" : "fixed_potential";
}

std::size_t Geometry::count(Region r) const { return static_cast<std::size_t>(std::count(regions.begin(), regions.end(), r)); }

namespace {

int cells(double length_nm, double h_nm, const char* what) {
    if (!(length_nm >= 0.0)) throw PreconditionError(std::string(what) + " must be >= 0");
    const double n = length_nm / h_nm;
    const double r = std::round(n);
    if (std::abs(n - r) > 1e-9 * std::max(1.0, n)) {
        throw PreconditionError(std::string(what) + " is not a multiple of the cell size");
    }
    return static_cast<int>(r);
}

}  // namespace

Geometry build_geometry(FinVariant variant, double w_nm, double h_nm, const FinDimensions& d) {
    if (!(h_nm > 0.0)) throw PreconditionError("cell size must be > 0");
    if (!(w_nm > 0.0)) throw PreconditionError("fin width must be > 0");
    const int w = cells(w_nm, h_nm, "fin width");
    const int fh = cells(d.fin_height_nm, h_nm, "fin height");
    const int sti = cells(d.sti_nm, h_nm, "isolation oxide");
    const int tox = cells(d.gate_oxide_nm, h_nm, "gate oxide");
    const int tg = cells(d.gate_nm, h_nm, "gate thickness");
    const int sub = cells(d.substrate_nm, h_nm, "substrate depth");
    const int margin = cells(d.margin_nm, h_nm, "margin");
    const int top = cells(d.top_nm, h_nm, "top vacuum");
    if (w < 1 || fh < 1 || tox < 1 || tg < 1 || sub < 2) throw PreconditionError("fin geometry has an empty layer");
    if (sti >= fh) throw PreconditionError("isolation oxide must be thinner than the fin");

    Geometry g;
    g.variant = variant;
    g.h_nm = h_nm;
    g.ny = 2 * (margin + tox + tg) + w;
    g.nz = sub + fh + tox + tg + top;
    g.regions.assign(static_cast<std::size_t>(g.nz * g.ny), Region::vacuum);
    g.fin_w = w;
    g.fin_y0 = (g.ny - w) / 2;
    g.fin_z0 = sub;
    g.fin_z1 = sub + fh;
    g.channel_z0 = sub + sti;

    auto fill = [&](int z0, int z1, int y0, int y1, Region r) {
        for (int z = std::max(0, z0); z < std::min(g.nz, z1); ++z)
            for (int y = std::max(0, y0); y < std::min(g.ny, y1); ++y) g.regions[static_cast<std::size_t>(z * g.ny + y)] = r;
    };
    const int f0 = g.fin_y0;
    const int f1 = f0 + w;
    const int ftop = g.fin_z1;
    fill(0, sub, 0, g.ny, Region::substrate);
    if (variant == FinVariant::planarized) {
        fill(sub, ftop + tox, 0, g.ny, Region::oxide);
        fill(sub, ftop, f0, f1, Region::si_fin);
        fill(ftop + tox, ftop + tox + tg, f0, f1, Region::gate);
    } else {
        fill(sub, sub + sti, 0, g.ny, Region::oxide);
        fill(sub, ftop, f0, f1, Region::si_fin);
        fill(sub + sti, ftop + tox, f0 - tox, f0, Region::oxide);
        fill(sub + sti, ftop + tox, f1, f1 + tox, Region::oxide);
        fill(ftop, ftop + tox, f0, f1, Region::oxide);
        fill(sub + sti, ftop + tox + tg, f0 - tox - tg, f0 - tox, Region::gate);
        fill(sub + sti, ftop + tox + tg, f1 + tox, f1 + tox + tg, Region::gate);
        fill(ftop + tox, ftop + tox + tg, f0 - tox, f1 + tox, Region::gate);
    }
    return g;
}

void BoundarySpec::validate() const {
    if (!(eps_si > 0.0) || !(eps_ox > 0.0)) throw PreconditionError("permittivities must be > 0");
    for (double v : {gate_voltage, substrate_voltage, interface_potential}) {
        if (!std::isfinite(v)) throw PreconditionError("boundary voltage not finite");
    }
}

void PoissonProblem::validate() const {
    const auto n = static_cast<std::size_t>(nz) * static_cast<std::size_t>(ny);
    if (nz < 1 || ny < 1 || !(h_nm > 0.0)) throw PreconditionError("bad grid dimensions");
    if (eps.size() != n || fixed.size() != n || value.size() != n || (!rho.empty() && rho.size() != n)) {
        throw PreconditionError("problem arrays do not match the grid");
    }
    for (double e : eps)
        if (!(e > 0.0)) throw PreconditionError("permittivity must be > 0");
}

double FieldGrid::min() const { return *std::min_element(potential.begin(), potential.end()); }
double FieldGrid::max() const { return *std::max_element(potential.begin(), potential.end()); }

double elementary_charge_over_eps0() {
    constexpr double e = 1.602176634e-19;
    constexpr double eps0 = 8.8541878128e-12;
    return e / eps0 * 1e9;  // V m -> V nm
}

PoissonProblem make_problem(const Geometry& geom, const BoundarySpec& bc, const std::vector<double>& charge) {
    bc.validate();
    PoissonProblem p;
    p.nz = geom.nz;
    p.ny = geom.ny;
    p.h_nm = geom.h_nm;
    const auto n = geom.regions.size();
    p.eps.resize(n);
    p.fixed.assign(n, 0);
    p.value.assign(n, 0.0);
    p.rho = charge;
    for (std::size_t i = 0; i < n; ++i) {
        switch (geom.regions[i]) {
            case Region::si_fin:
            case Region::substrate: p.eps[i] = bc.eps_si; break;
            case Region::oxide: p.eps[i] = bc.eps_ox; break;
            case Region::gate:
                p.eps[i] = 1.0;
                p.fixed[i] = 1;
                p.value[i] = bc.gate_voltage;
                break;
            case Region::vacuum: p.eps[i] = 1.0; break;
        }
    }
    for (int y = 0; y < geom.ny; ++y) {
        p.fixed[static_cast<std::size_t>(y)] = 1;
        p.value[static_cast<std::size_t>(y)] = bc.substrate_voltage;
    }
    if (bc.interface_mode == InterfaceMode::fixed_potential) {
        for (int z = 0; z < geom.nz; ++z)
            for (int y = 0; y < geom.ny; ++y) {
                if (geom.at(z, y) != Region::si_fin) continue;
                bool touches = false;
                for (auto [dz, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
                    const int a = z + dz, b = y + dy;
                    if (a >= 0 && a < geom.nz && b >= 0 && b < geom.ny && geom.at(a, b) == Region::oxide) touches = true;
                }
                if (touches) {
                    const auto i = static_cast<std::size_t>(z * geom.ny + y);
                    p.fixed[i] = 1;
                    p.value[i] = bc.interface_potential;
                }
            }
    }
    p.validate();
    return p;
}

namespace {

struct Stencil {
    // Harmonic-mean couplings to +z, -z, +y, -y (0 outside the domain).
    std::vector<std::array<double, 4>> w;
    std::vector<double> diag;
    std::vector<double> src;  // rho term, V
};

Stencil build_stencil(const PoissonProblem& p) {
    Stencil s;
    const auto n = p.eps.size();
    s.w.assign(n, {0, 0, 0, 0});
    s.diag.assign(n, 0.0);
    s.src.assign(n, 0.0);
    const double qe = elementary_charge_over_eps0();
    for (int z = 0; z < p.nz; ++z)
        for (int y = 0; y < p.ny; ++y) {
            const auto i = static_cast<std::size_t>(z * p.ny + y);
            const int nb[4][2] = {{z + 1, y}, {z - 1, y}, {z, y + 1}, {z, y - 1}};
            for (int k = 0; k < 4; ++k) {
                const int a = nb[k][0], b = nb[k][1];
                if (a < 0 || a >= p.nz || b < 0 || b >= p.ny) continue;
                const double e1 = p.eps[i], e2 = p.eps[static_cast<std::size_t>(a * p.ny + b)];
                s.w[i][static_cast<std::size_t>(k)] = 2.0 * e1 * e2 / (e1 + e2);
                s.diag[i] += s.w[i][static_cast<std::size_t>(k)];
            }
            if (!p.rho.empty()) s.src[i] = p.rho[i] * p.h_nm * p.h_nm * qe;
        }
    return s;
}

}  // namespace

FieldGrid solve_problem(const PoissonProblem& p, const SolveOptions& opts) {
    p.validate();
    if (!(opts.tol > 0.0)) throw PreconditionError("tol must be > 0");
    if (opts.max_iter < 1) throw PreconditionError("max_iter must be >= 1");
    const Stencil st = build_stencil(p);
    const int nz = p.nz, ny = p.ny;
    const auto n = p.eps.size();

    FieldGrid f;
    f.nz = nz;
    f.ny = ny;
    f.h_nm = p.h_nm;
    double dsum = 0.0;
    int dcount = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (p.fixed[i]) {
            dsum += p.value[i];
            ++dcount;
        }
    const double init = dcount > 0 ? dsum / dcount : 0.0;
    f.potential.assign(n, init);
    for (std::size_t i = 0; i < n; ++i)
        if (p.fixed[i]) f.potential[i] = p.value[i];

    const double omega =
        opts.omega > 0.0 ? opts.omega : 2.0 / (1.0 + std::sin(M_PI / static_cast<double>(std::max(nz, ny))));
    auto& phi = f.potential;

    auto neighbour_sum = [&](std::size_t i) {
        const auto& w = st.w[i];
        double s = 0.0;
        if (w[0] != 0.0) s += w[0] * phi[i + static_cast<std::size_t>(ny)];
        if (w[1] != 0.0) s += w[1] * phi[i - static_cast<std::size_t>(ny)];
        if (w[2] != 0.0) s += w[2] * phi[i + 1];
        if (w[3] != 0.0) s += w[3] * phi[i - 1];
        return s;
    };

    // Norm of the fixed right-hand side for the relative residual.
    double bnorm2 = 0.0;
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y) {
            const auto i = static_cast<std::size_t>(z * ny + y);
            if (p.fixed[i]) continue;
            double b = st.src[i];
            const int nb[4][2] = {{z + 1, y}, {z - 1, y}, {z, y + 1}, {z, y - 1}};
            for (int k = 0; k < 4; ++k) {
                const int a = nb[k][0], c = nb[k][1];
                if (a < 0 || a >= nz || c < 0 || c >= ny) continue;
                const auto j = static_cast<std::size_t>(a * ny + c);
                if (p.fixed[j]) b += st.w[i][static_cast<std::size_t>(k)] * p.value[j];
            }
            bnorm2 += b * b;
        }
    const double bnorm = bnorm2 > 0.0 ? std::sqrt(bnorm2) : 1.0;

    auto residual = [&] {
        double r2 = 0.0;
        for (int z = 0; z < nz; ++z)
            for (int y = 0; y < ny; ++y) {
                const auto i = static_cast<std::size_t>(z * ny + y);
                if (p.fixed[i]) continue;
                const double r = neighbour_sum(i) - st.diag[i] * phi[i] + st.src[i];
                r2 += r * r;
            }
        return std::sqrt(r2) / bnorm;
    };

    const int first = opts.order == SweepOrder::red_black ? 0 : 1;
    double res = residual();
    int it = 0;
    while (res >= opts.tol) {
        if (it >= opts.max_iter) {
            throw ConvergenceError("Poisson solve did not reach tol", res, static_cast<std::size_t>(it));
        }
        for (int colour : {first, 1 - first}) {
            for (int z = 0; z < nz; ++z)
                for (int y = (z + colour) & 1; y < ny; y += 2) {
                    const auto i = static_cast<std::size_t>(z * ny + y);
                    if (p.fixed[i]) continue;
                    const double gs = (neighbour_sum(i) + st.src[i]) / st.diag[i];
                    phi[i] += omega * (gs - phi[i]);
                }
        }
        ++it;
        if (it % 10 == 0 || it >= opts.max_iter) res = residual();
    }
    f.residual = res;
    f.iterations = it;
    return f;
}

FieldGrid solve_poisson(const Geometry& geom, const BoundarySpec& bc, const std::vector<double>& charge,
                        const SolveOptions& opts) {
    return solve_problem(make_problem(geom, bc, charge), opts);
}

double sinusoidal_benchmark_error(int n, double tol) {
    if (n < 2) throw PreconditionError("benchmark needs n >= 2");
    PoissonProblem p;
    p.nz = p.ny = n + 1;
    p.h_nm = 1.0 / n;
    const auto cells = static_cast<std::size_t>((n + 1) * (n + 1));
    p.eps.assign(cells, 1.0);
    p.fixed.assign(cells, 0);
    p.value.assign(cells, 0.0);
    for (int z = 0; z <= n; ++z)
        for (int y = 0; y <= n; ++y) {
            if (z != 0 && z != n && y != 0 && y != n) continue;
            const auto i = static_cast<std::size_t>(z * (n + 1) + y);
            p.fixed[i] = 1;
            p.value[i] = z == n ? std::sin(M_PI * y / n) : 0.0;
        }
    SolveOptions o;
    o.tol = tol;
    const FieldGrid f = solve_problem(p, o);
    double err = 0.0;
    for (int z = 1; z < n; ++z)
        for (int y = 1; y < n; ++y) {
            const double exact = std::sinh(M_PI * z / n) / std::sinh(M_PI) * std::sin(M_PI * y / n);
            err = std::max(err, std::abs(f.at(z, y) - exact));
        }
    return err;
}

ContourGrid contour_quantize(const FieldGrid& field, int n_levels) {
    if (n_levels < 1) throw PreconditionError("n_levels must be >= 1");
    ContourGrid c;
    c.nz = field.nz;
    c.ny = field.ny;
    c.n_levels = n_levels;
    c.lo = field.min();
    c.hi = field.max();
    c.band.assign(field.potential.size(), 0);
    const double span = c.hi - c.lo;
    if (!(span > 0.0)) return c;
    for (std::size_t i = 0; i < field.potential.size(); ++i) {
        const double t = (field.potential[i] - c.lo) / span;
        c.band[i] = std::clamp(static_cast<int>(std::floor(t * n_levels)), 0, n_levels - 1);
    }
    return c;
}

GradientMetric fin_gradient_metric(const FieldGrid& field, const Geometry& geom) {
    if (field.nz != geom.nz || field.ny != geom.ny) throw PreconditionError("field does not match the geometry");
    GradientMetric m;
    double sum = 0.0;
    for (int z = std::max(1, geom.channel_z0); z < std::min(geom.fin_z1, geom.nz - 1); ++z)
        for (int y = geom.fin_y0; y < geom.fin_y0 + geom.fin_w; ++y) {
            if (geom.at(z, y) != Region::si_fin) continue;
            const double g = std::abs(field.at(z + 1, y) - field.at(z - 1, y)) / (2.0 * geom.h_nm);
            m.max_abs = std::max(m.max_abs, g);
            sum += g;
            ++m.cells;
        }
    if (m.cells == 0) throw PreconditionError("fin region under the gate is empty");
    m.mean_abs = sum / static_cast<double>(m.cells);
    return m;
}

void write_potential_csv(std::ostream& os, const FieldGrid& field) {
    os << "z,y,phi\n";
    for (int z = 0; z < field.nz; ++z)
        for (int y = 0; y < field.ny; ++y)
            os << (z + 0.5) * field.h_nm << ',' << (y + 0.5) * field.h_nm << ',' << field.at(z, y) << '\n';
}

void write_contour_csv(std::ostream& os, const ContourGrid& c, double h_nm) {
    os << "z,y,band\n";
    for (int z = 0; z < c.nz; ++z)
        for (int y = 0; y < c.ny; ++y)
            os << (z + 0.5) * h_nm << ',' << (y + 0.5) * h_nm << ',' << c.band[static_cast<std::size_t>(z * c.ny + y)]
               << '\n';
}

void write_contour_pgm(std::ostream& os, const ContourGrid& c) {
    const int maxval = std::max(1, c.n_levels - 1);
    os << "P2\n" << c.ny << ' ' << c.nz << '\n' << maxval << '\n';
    for (int z = c.nz - 1; z >= 0; --z) {
        for (int y = 0; y < c.ny; ++y) {
            if (y) os << ' ';
            os << c.band[static_cast<std::size_t>(z * c.ny + y)];
        }
        os << '\n';
    }
}

}  // namespace lpoint
