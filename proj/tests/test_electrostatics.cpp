#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lpoint/electrostatics.hpp"
#include "lpoint/error.hpp"

using namespace lpoint;

namespace {

double max_diff(const FieldGrid& a, const FieldGrid& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.potential.size(); ++i) d = std::max(d, std::abs(a.potential[i] - b.potential[i]));
    return d;
}

PoissonProblem plates(int nz, int ny, double top) {
    PoissonProblem p;
    p.nz = nz;
    p.ny = ny;
    const auto n = static_cast<std::size_t>(nz * ny);
    p.eps.assign(n, 3.9);
    p.fixed.assign(n, 0);
    p.value.assign(n, 0.0);
    for (int y = 0; y < ny; ++y) {
        p.fixed[static_cast<std::size_t>(y)] = 1;
        p.fixed[static_cast<std::size_t>((nz - 1) * ny + y)] = 1;
        p.value[static_cast<std::size_t>((nz - 1) * ny + y)] = top;
    }
    return p;
}

}  // namespace

TEST_CASE("planarized geometry: flat top, oxide on the fin sides, gate width W") {
    const auto g = build_geometry(FinVariant::planarized, 5.0, 1.0);
    CHECK(g.fin_w == 5);
    // every row in the fin band has oxide right next to the fin
    for (int z = g.channel_z0; z < g.fin_z1; ++z) {
        CHECK(g.at(z, g.fin_y0 - 1) == Region::oxide);
        CHECK(g.at(z, g.fin_y0 + g.fin_w) == Region::oxide);
        CHECK(g.at(z, g.fin_y0) == Region::si_fin);
    }
    int gate_cols = 0, gate_row = -1;
    for (int z = 0; z < g.nz; ++z)
        for (int y = 0; y < g.ny; ++y)
            if (g.at(z, y) == Region::gate) gate_row = z;
    for (int y = 0; y < g.ny; ++y) gate_cols += g.at(gate_row, y) == Region::gate;
    CHECK(gate_cols == 5);
    // gate sits above the fin only
    for (int z = 0; z < g.fin_z1; ++z)
        for (int y = 0; y < g.ny; ++y) CHECK(g.at(z, y) != Region::gate);
}

TEST_CASE("protruding geometry: gate wraps the three exposed faces") {
    const auto g = build_geometry(FinVariant::protruding, 5.0, 1.0);
    bool left = false, right = false, top = false;
    for (int z = g.channel_z0; z < g.fin_z1; ++z)
        for (int y = 0; y < g.fin_y0; ++y) left = left || g.at(z, y) == Region::gate;
    for (int z = g.channel_z0; z < g.fin_z1; ++z)
        for (int y = g.fin_y0 + g.fin_w; y < g.ny; ++y) right = right || g.at(z, y) == Region::gate;
    for (int z = g.fin_z1; z < g.nz; ++z)
        for (int y = g.fin_y0; y < g.fin_y0 + g.fin_w; ++y) top = top || g.at(z, y) == Region::gate;
    CHECK(left);
    CHECK(right);
    CHECK(top);
    // no gate below the isolation oxide top
    for (int z = 0; z < g.channel_z0; ++z)
        for (int y = 0; y < g.ny; ++y) CHECK(g.at(z, y) != Region::gate);
}

TEST_CASE("cell counts and partition") {
    for (auto v : {FinVariant::planarized, FinVariant::protruding})
        for (double h : {1.0, 0.5}) {
            const FinDimensions d;
            const auto g = build_geometry(v, 6.0, h, d);
            // lateral: margin, gate oxide and gate on each side of the fin
            const double ext_y = 6.0 + 2.0 * (d.margin_nm + d.gate_oxide_nm + d.gate_nm);
            const double ext_z = d.substrate_nm + d.fin_height_nm + d.gate_oxide_nm + d.gate_nm + d.top_nm;
            CHECK(g.ny == static_cast<int>(std::lround(ext_y / h)));
            CHECK(g.nz == static_cast<int>(std::lround(ext_z / h)));
            CHECK(g.regions.size() == static_cast<std::size_t>(g.nz * g.ny));
            std::size_t total = 0;
            for (auto r : {Region::si_fin, Region::oxide, Region::gate, Region::substrate, Region::vacuum}) total += g.count(r);
            CHECK(total == g.regions.size());
            CHECK(g.fin_w == static_cast<int>(std::lround(6.0 / h)));
        }
    CHECK_THROWS_AS(build_geometry(FinVariant::planarized, 5.3, 1.0), PreconditionError);
    CHECK_THROWS_AS(build_geometry(FinVariant::planarized, 5.0, 1.0, FinDimensions{4, 4, 1, 2, 20, 10, 4}), PreconditionError);
    CHECK_THROWS_AS(build_geometry(FinVariant::planarized, -1.0, 1.0), PreconditionError);
}

TEST_CASE("uniform Dirichlet data gives a constant field") {
    BoundarySpec bc;
    bc.gate_voltage = bc.substrate_voltage = 0.42;
    const auto g = build_geometry(FinVariant::planarized, 5.0, 1.0);
    const auto f = solve_poisson(g, bc);
    CHECK(std::abs(f.max() - 0.42) < 1e-12);
    CHECK(std::abs(f.min() - 0.42) < 1e-12);
}

TEST_CASE("parallel plates with uniform eps give the exact linear profile") {
    const auto p = plates(21, 5, 1.0);
    SolveOptions o;
    o.tol = 1e-14;
    const auto f = solve_problem(p, o);
    for (int z = 0; z < 21; ++z)
        for (int y = 0; y < 5; ++y) CHECK(std::abs(f.at(z, y) - z / 20.0) < 1e-10);
    CHECK(f.residual < 1e-14);
}

TEST_CASE("sinusoidal benchmark converges at second order") {
    const double e1 = sinusoidal_benchmark_error(32), e2 = sinusoidal_benchmark_error(64),
                 e3 = sinusoidal_benchmark_error(128);
    CHECK(std::abs(e1 / e2 - 4.0) <= 0.3);
    CHECK(std::abs(e2 / e3 - 4.0) <= 0.3);
}

TEST_CASE("non-convergence reports the last residual") {
    const auto g = build_geometry(FinVariant::protruding, 5.0, 1.0);
    SolveOptions o;
    o.max_iter = 3;
    o.tol = 1e-12;
    try {
        solve_poisson(g, BoundarySpec{}, {}, o);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.last_residual() > 1e-12);
    }
    o.tol = 0.0;
    CHECK_THROWS_AS(solve_poisson(g, BoundarySpec{}, {}, o), PreconditionError);
}

TEST_CASE("maximum principle, mirror symmetry, sweep order and linearity") {
    SolveOptions o;
    o.tol = 1e-10;
    for (auto v : {FinVariant::planarized, FinVariant::protruding})
        for (auto mode : {InterfaceMode::dielectric_continuity, InterfaceMode::fixed_potential}) {
            const auto g = build_geometry(v, 4.0, 1.0);
            BoundarySpec bc;
            bc.interface_mode = mode;
            bc.interface_potential = 0.3;
            const auto f = solve_poisson(g, bc, {}, o);
            CHECK(f.min() >= -1e-12);
            CHECK(f.max() <= 1.0 + 1e-12);
            for (int z = 0; z < f.nz; ++z)
                for (int y = 0; y < f.ny; ++y) CHECK(std::abs(f.at(z, y) - f.at(z, f.ny - 1 - y)) < 10.0 * o.tol);
            SolveOptions br = o;
            br.order = SweepOrder::black_red;
            CHECK(max_diff(f, solve_poisson(g, bc, {}, br)) < 1e-8);
        }
    const auto g = build_geometry(FinVariant::protruding, 4.0, 1.0);
    BoundarySpec one, two;
    two.gate_voltage = 2.0;
    const auto f1 = solve_poisson(g, one, {}, o), f2 = solve_poisson(g, two, {}, o);
    double d = 0.0;
    for (std::size_t i = 0; i < f1.potential.size(); ++i) d = std::max(d, std::abs(2.0 * f1.potential[i] - f2.potential[i]));
    CHECK(d < 10.0 * o.tol * 2.0);
}

TEST_CASE("fixed_potential mode pins the Si cells at the oxide interface") {
    const auto g = build_geometry(FinVariant::planarized, 5.0, 1.0);
    BoundarySpec bc;
    bc.interface_mode = InterfaceMode::fixed_potential;
    bc.interface_potential = 0.25;
    const auto f = solve_poisson(g, bc);
    CHECK(f.at(g.fin_z1 - 1, g.fin_y0 + 2) == doctest::Approx(0.25));
    CHECK(f.at(g.channel_z0 + 2, g.fin_y0) == doctest::Approx(0.25));
}

TEST_CASE("contours") {
    SolveOptions o;
    o.tol = 1e-14;
    const auto lin = solve_problem(plates(40, 3, 1.0), o);
    const auto c = contour_quantize(lin, 10);
    std::vector<int> per(10, 0);
    for (int z = 0; z < 40; ++z) per[static_cast<std::size_t>(c.band[static_cast<std::size_t>(z * 3)])]++;
    for (int n : per) CHECK(n == 4);
    for (int z = 1; z < 40; ++z) CHECK(c.band[static_cast<std::size_t>(z * 3)] >= c.band[static_cast<std::size_t>((z - 1) * 3)]);
    const auto one = contour_quantize(lin, 1);
    for (int b : one.band) CHECK(b == 0);
    const auto flat = contour_quantize(solve_problem(plates(5, 5, 0.0)), 10);
    for (int b : flat.band) CHECK(b == 0);
    std::ostringstream pgm;
    write_contour_pgm(pgm, c);
    CHECK(pgm.str().rfind("P2\n3 40\n", 0) == 0);
}

TEST_CASE("gradient metric: ordering, zero voltage, linear in voltage") {
    for (int w : {3, 5, 8}) {
        const auto gp = build_geometry(FinVariant::planarized, w, 1.0);
        const auto gr = build_geometry(FinVariant::protruding, w, 1.0);
        const auto mp = fin_gradient_metric(solve_poisson(gp, BoundarySpec{}), gp);
        const auto mr = fin_gradient_metric(solve_poisson(gr, BoundarySpec{}), gr);
        CHECK(mr.max_abs < mp.max_abs);
        CHECK(mr.mean_abs < mp.mean_abs);
        CHECK(mp.cells > 0);
    }
    const auto g = build_geometry(FinVariant::planarized, 5.0, 1.0);
    BoundarySpec zero;
    zero.gate_voltage = 0.0;
    CHECK(fin_gradient_metric(solve_poisson(g, zero), g).max_abs == 0.0);
    SolveOptions o;
    o.tol = 1e-12;
    BoundarySpec v1, v2;
    v1.gate_voltage = 0.7;
    v2.gate_voltage = 1.4;
    const auto a = fin_gradient_metric(solve_poisson(g, v1, {}, o), g), b = fin_gradient_metric(solve_poisson(g, v2, {}, o), g);
    CHECK(std::abs(b.max_abs / a.max_abs - 2.0) < 1e-8);
    CHECK(std::abs(b.mean_abs / a.mean_abs - 2.0) < 1e-8);
}

TEST_CASE("potential csv header") {
    const auto f = solve_problem(plates(4, 3, 1.0));
    std::ostringstream os;
    write_potential_csv(os, f);
    CHECK(os.str().rfind("z,y,phi\n", 0) == 0);
}
