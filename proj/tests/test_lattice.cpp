#include <doctest.h>

#include <cmath>
#include <random>

#include "lpoint/error.hpp"
#include "lpoint/lattice.hpp"

using namespace lpoint;

TEST_CASE("reciprocal basis satisfies a_i . b_j = 2 pi delta_ij") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.1, 10.0);
    for (int t = 0; t < 200; ++t) {
        LatticeSpec spec;
        spec.a_nm = t == 0 ? 0.543 : dist(rng);
        const auto a = direct_basis(spec);
        const auto b = reciprocal_basis(spec);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(a[i].dot(b[j]) - (i == j ? 2.0 * M_PI : 0.0)) < 1e-12);
    }
}

TEST_CASE("doubling a halves every reciprocal component") {
    LatticeSpec s1, s2;
    s2.a_nm = 2.0 * s1.a_nm;
    const auto b1 = reciprocal_basis(s1), b2 = reciprocal_basis(s2);
    for (int i = 0; i < 3; ++i) CHECK((b1[i] - 2.0 * b2[i]).norm() < 1e-12);
}

TEST_CASE("fcc reciprocal is bcc: b1 = (2pi/a)(-1,1,1) and b1+b2+b3 along (111)") {
    LatticeSpec spec;
    const double g = 2.0 * M_PI / spec.a_nm;
    const auto b = reciprocal_basis(spec);
    // textbook vectors, independent of the cross-product construction
    CHECK((b[0] - g * Vec3(-1, 1, 1)).norm() < 1e-12);
    CHECK((b[1] - g * Vec3(1, -1, 1)).norm() < 1e-12);
    CHECK((b[2] - g * Vec3(1, 1, -1)).norm() < 1e-12);
    const Vec3 s = b[0] + b[1] + b[2];
    CHECK((s - g * Vec3(1, 1, 1)).norm() < 1e-12);
}

TEST_CASE("Gamma-Lambda-L with 3 samples hits the midpoint") {
    const auto pts = standard_path("G-L-L", 3).points();
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].k.approx_equal({0, 0, 0}));
    CHECK(pts[1].k.approx_equal({0.25, 0.25, 0.25}));
    CHECK(pts[2].k.approx_equal({0.5, 0.5, 0.5}));
    CHECK(pts[2].s == doctest::Approx(std::sqrt(0.75)));
}

TEST_CASE("Gamma-Delta-X with 2 samples is the endpoints only") {
    const auto pts = standard_path("Γ-Δ-X", 2).points();
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].k.kx == 0.0);
    CHECK(pts[0].k.kz == 0.0);
    CHECK(pts[1].k.kz == 1.0);
    CHECK(pts[1].k.kx == 0.0);
}

TEST_CASE("path endpoints are exact and unknown names or short paths throw") {
    const auto kl = standard_path("K-L", 5).points();
    CHECK(kl.front().k.kx == 0.75);
    CHECK(kl.front().k.ky == 0.75);
    CHECK(kl.back().k.kz == 0.5);
    CHECK_THROWS_AS(standard_path("G-W", 10), PreconditionError);
    CHECK_THROWS_AS(standard_path("G-L-L", 1), PreconditionError);
}

TEST_CASE("composite path arclength is continuous") {
    const auto pts = composite_path("G-D-X,G-L-L", 10).points();
    REQUIRE(pts.size() == 20);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].s >= pts[i - 1].s);
    CHECK(pts[10].s == doctest::Approx(1.0));
}

TEST_CASE("2L is a reciprocal lattice vector, L is not") {
    CHECK(is_reciprocal_lattice_vector(2.0 * points::L));
    CHECK_FALSE(is_reciprocal_lattice_vector(points::L));
    CHECK(is_reciprocal_lattice_vector(2.0 * points::X));
    CHECK_FALSE(is_reciprocal_lattice_vector(points::X));
    for (const auto& b : reciprocal_basis_reduced()) CHECK(is_reciprocal_lattice_vector(b));
}

TEST_CASE("Lambda axis membership uses the 1e-12 tolerance") {
    CHECK(KVector(0.3, 0.3, 0.3).on_lambda_axis());
    CHECK(KVector(0.3, 0.3, 0.3 + 5e-13).on_lambda_axis());
    CHECK_FALSE(KVector(0.3, 0.3, 0.3 + 1e-9).on_lambda_axis());
}

TEST_CASE("dot table rows 5, 2, 1 nm") {
    const LatticeSpec spec;
    struct Row {
        double side;
        std::int64_t n;
    };
    for (const Row r : {Row{5.0, 781}, Row{2.0, 50}, Row{1.0, 6}}) {
        const auto d = count_dot_levels({r.side}, spec);
        CHECK(d.unit_cells == r.n);
        CHECK(d.levels == r.n);
        CHECK(d.electrons == 2 * r.n);
    }
}

TEST_CASE("10 nm dot is reported as computed, not as 6250") {
    const auto d = count_dot_levels({10.0}, LatticeSpec{});
    CHECK(d.exact_cells == doctest::Approx(std::pow(10.0 / 0.543, 3)));
    CHECK(d.unit_cells == std::llround(std::pow(10.0 / 0.543, 3)));
    CHECK(d.unit_cells != 6250);
    CHECK(count_dot_levels({10.0}, LatticeSpec{}, Rounding::floor).unit_cells == 6245);
}

TEST_CASE("dot counts are monotone and electrons = 2 levels") {
    std::int64_t prev = 0;
    for (double side = 0.2; side < 12.0; side += 0.05) {
        for (auto mode : {Rounding::nearest, Rounding::floor}) {
            const auto d = count_dot_levels({side}, LatticeSpec{}, mode);
            CHECK(d.electrons == 2 * d.levels);
        }
        const auto d = count_dot_levels({side}, LatticeSpec{});
        CHECK(d.unit_cells >= prev);
        prev = d.unit_cells;
    }
    CHECK_THROWS_AS(count_dot_levels({0.0}, LatticeSpec{}), PreconditionError);
    CHECK_THROWS_AS(parse_rounding("ceil"), PreconditionError);
}
