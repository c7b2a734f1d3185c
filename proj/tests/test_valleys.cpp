#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Geometry>

#include "lpoint/error.hpp"
#include "lpoint/valleys.hpp"

using namespace lpoint;

TEST_CASE("confinement mass limits and the (111) oblique valley") {
    Valley v;
    v.ml = 0.916;
    v.mt = 0.19;
    v.axis = Vec3::UnitZ();
    CHECK(confinement_mass(v, Vec3::UnitZ()) == doctest::Approx(0.916));
    CHECK(confinement_mass(v, Vec3::UnitX()) == doctest::Approx(0.19));
    v.axis = Vec3(-1, 1, 1).normalized();
    const double want = 1.0 / ((1.0 / 9.0) / v.ml + (8.0 / 9.0) / v.mt);
    CHECK(confinement_mass(v, Vec3(1, 1, 1).normalized()) == doctest::Approx(want).epsilon(1e-12));
    CHECK_THROWS_AS(confinement_mass(v, Vec3::Zero()), PreconditionError);
}

TEST_CASE("valley sets have 6 and 4 members") {
    CHECK(make_valley_set(ValleyFamily::X0, 0.9, 0.2, Vec3::UnitZ()).valleys.size() == 6);
    CHECK(make_valley_set(ValleyFamily::L, 1.6, 0.08, Vec3(1, 1, 1).normalized()).valleys.size() == 4);
}

TEST_CASE("X0 on (001): 2 then 4") {
    const auto r = split_valleys(make_valley_set(ValleyFamily::X0, 0.916, 0.19, parse_direction("001")), 5.0);
    REQUIRE(r.groups.size() == 2);
    CHECK(r.ground_degeneracy == 2);
    CHECK(r.groups[0].mass == doctest::Approx(0.916));
    CHECK(r.groups[1].degeneracy == 4);
    CHECK(r.groups[1].mass == doctest::Approx(0.19));
    CHECK(r.groups[0].energy_ev == doctest::Approx(box_energy_constant() / (0.916 * 25.0)));
}

TEST_CASE("L on (111): 1 then 3") {
    const auto r = split_valleys(make_valley_set(ValleyFamily::L, 1.588, 0.0815, parse_direction("111")), 5.0);
    REQUIRE(r.groups.size() == 2);
    CHECK(r.ground_degeneracy == 1);
    CHECK(r.groups[1].degeneracy == 3);
    CHECK(r.splitting_ev() > 0.0);
}

TEST_CASE("isotropic valleys do not split") {
    const auto r = split_valleys(make_valley_set(ValleyFamily::L, 0.3, 0.3, parse_direction("111")), 4.0);
    REQUIRE(r.groups.size() == 1);
    CHECK(r.ground_degeneracy == 4);
    CHECK(r.splitting_ev() == 0.0);
}

TEST_CASE("box constant h^2/8m0 in eV nm^2") {
    CHECK(box_energy_constant() == doctest::Approx(0.376).epsilon(1e-3));
}

TEST_CASE("degeneracy pattern and 1/W^2 scaling for random masses") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> mt(0.05, 0.6), ratio(1.01, 30.0), w(0.5, 30.0);
    for (int i = 0; i < 300; ++i) {
        const double t = mt(rng), l = t * ratio(rng), width = w(rng);
        const auto x = split_valleys(make_valley_set(ValleyFamily::X0, l, t, parse_direction("001")), width);
        const auto lv = split_valleys(make_valley_set(ValleyFamily::L, l, t, parse_direction("111")), width);
        CHECK(x.ground_degeneracy == 2);
        CHECK(x.groups.at(1).degeneracy == 4);
        CHECK(lv.ground_degeneracy == 1);
        CHECK(lv.groups.at(1).degeneracy == 3);
        const auto lh = split_valleys(make_valley_set(ValleyFamily::L, l, t, parse_direction("111")), width / 2.0);
        CHECK(std::abs(lh.splitting_ev() / lv.splitting_ev() - 4.0) < 1e-9);
        for (const auto& g : lv.groups) {
            CHECK(g.mass >= t - 1e-12);
            CHECK(g.mass <= l + 1e-12);
        }
    }
}

TEST_CASE("common rotation of valleys and growth axis leaves the report unchanged") {
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(0.7, Vec3(0.3, -1.0, 0.4).normalized()).toRotationMatrix();
    auto set = make_valley_set(ValleyFamily::L, 1.588, 0.0815, parse_direction("111"));
    const auto ref = split_valleys(set, 6.0);
    set.growth_axis = rot * set.growth_axis;
    for (auto& v : set.valleys) v.axis = rot * v.axis;
    const auto rotated = split_valleys(set, 6.0);
    REQUIRE(rotated.groups.size() == ref.groups.size());
    for (std::size_t i = 0; i < ref.groups.size(); ++i) {
        CHECK(rotated.groups[i].degeneracy == ref.groups[i].degeneracy);
        CHECK(std::abs(rotated.groups[i].energy_ev - ref.groups[i].energy_ev) < 1e-10);
    }
}

TEST_CASE("default X0 masses are more than four times anisotropic") {
    const Valley v;
    CHECK(v.ml / v.mt > 4.0);
}

TEST_CASE("direction parsing") {
    CHECK((parse_direction("110") - Vec3(1, 1, 0).normalized()).norm() < 1e-15);
    CHECK((parse_direction("1,-1,1") - Vec3(1, -1, 1).normalized()).norm() < 1e-15);
    CHECK_THROWS_AS(parse_direction("000"), PreconditionError);
    CHECK_THROWS_AS(parse_valley_family("K"), PreconditionError);
}
