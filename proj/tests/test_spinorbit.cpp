#include <doctest.h>

#include <cmath>
#include <random>

#include "lpoint/error.hpp"
#include "lpoint/spinorbit.hpp"

using namespace lpoint;

namespace {

double max_abs(const Eigen::Matrix2cd& m) { return m.cwiseAbs().maxCoeff(); }

MultipoleField random_field(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MultipoleField f;
    f.q0 = u(rng);
    f.q_dip = Vec3(u(rng), u(rng), u(rng));
    f.m_dip = Vec3(u(rng), u(rng), u(rng));
    f.t_dip = Vec3(u(rng), u(rng), u(rng));
    f.g0 = u(rng);
    f.q_xyz = u(rng);
    return f;
}

}  // namespace

TEST_CASE("Rashba: zero field gives zero matrix") {
    CHECK(max_abs(h_rashba(MultipoleField{}, KVector(0.3, -0.2, 0.7)).matrix) == 0.0);
}

TEST_CASE("Rashba: Q along z with planar k is kx sy - ky sx") {
    MultipoleField f;
    f.q_dip = Vec3(0, 0, 1);
    const double kx = 0.37, ky = -0.61;
    const Eigen::Matrix2cd want = kx * pauli(2) - ky * pauli(1);
    CHECK(max_abs(h_rashba(f, KVector(kx, ky, 0.0)).matrix - want) < 1e-15);
}

TEST_CASE("Rashba: Q along x and k along y is sigma_z") {
    MultipoleField f;
    f.q_dip = Vec3(1, 0, 0);
    CHECK(max_abs(h_rashba(f, KVector(0, 1, 0)).matrix - pauli(3)) == 0.0);
}

TEST_CASE("Dresselhaus vanishes exactly on (t,t,t)") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> t(-2.0, 2.0), q(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        MultipoleField f;
        f.q_xyz = q(rng);
        const double s = t(rng);
        CHECK(max_abs(h_dresselhaus(f, KVector(s, s, s)).matrix) == 0.0);
    }
}

TEST_CASE("Dresselhaus at k=(1,2,0) is sqrt15 (4 sx - 2 sy)") {
    MultipoleField f;
    f.q_xyz = 1.0;
    const Eigen::Matrix2cd want = std::sqrt(15.0) * (4.0 * pauli(1) - 2.0 * pauli(2));
    CHECK(max_abs(h_dresselhaus(f, KVector(1, 2, 0)).matrix - want) < 1e-14);
    CHECK(max_abs(h_dresselhaus(MultipoleField{}, KVector(1, 2, 0)).matrix) == 0.0);
}

TEST_CASE("total: free-electron term only") {
    MultipoleField f;
    f.q0 = 2.5;
    const KVector k(0.1, 0.2, 0.3);
    const auto h = h_total(f, k);
    CHECK(max_abs(h.matrix - 2.5 * k.norm2() * pauli(0)) < 1e-15);
    const auto e = h.eigenvalues();
    CHECK(e(0) == doctest::Approx(e(1)));
}

TEST_CASE("total: Zeeman term splits by +-B independent of k") {
    MultipoleField f;
    f.m_dip = Vec3(0, 0, 0.3);
    for (const KVector k : {KVector(0, 0, 0), KVector(0.4, -0.1, 0.9)}) {
        const auto e = h_total(f, k).eigenvalues();
        CHECK(e(0) == doctest::Approx(-0.3));
        CHECK(e(1) == doctest::Approx(0.3));
    }
}

TEST_CASE("total: T term shifts both levels equally") {
    MultipoleField f;
    f.q_dip = Vec3(0.2, -0.1, 0.4);
    const KVector k(0.3, 0.1, -0.2);
    const auto e0 = h_total(f, k).eigenvalues();
    f.t_dip = Vec3(1.0, 2.0, 3.0);
    const auto e1 = h_total(f, k).eigenvalues();
    const double shift = f.t_dip.dot(k.vec());
    CHECK(e1(0) - e0(0) == doctest::Approx(shift));
    CHECK(e1(1) - e0(1) == doctest::Approx(shift));
}

TEST_CASE("Hermitian, traces and time reversal for random fields") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        MultipoleField f = random_field(rng);
        const KVector k(u(rng), u(rng), u(rng));
        for (const auto& h : {h_total(f, k), h_rashba(f, k), h_dresselhaus(f, k)})
            CHECK(max_abs(h.matrix - h.matrix.adjoint()) < 1e-14);
        CHECK(std::abs(h_rashba(f, k).matrix.trace()) == 0.0);
        MultipoleField t;
        t.t_dip = f.t_dip;
        const auto ht = h_total(t, k).matrix;
        CHECK(ht(0, 1) == cplx(0.0));
        CHECK(ht(0, 0) == ht(1, 1));
        f.m_dip.setZero();
        f.t_dip.setZero();
        const auto a = h_total(f, k).eigenvalues(), b = h_total(f, KVector(-k.kx, -k.ky, -k.kz)).eigenvalues();
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("p-orbital sums agree between spin signs on the Lambda axis") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const MultipoleField f = random_field(rng);
        const double t = u(rng);
        const KVector k(t, t, t);
        double up = 0.0, dn = 0.0;
        for (auto o : {POrbital::px, POrbital::py, POrbital::pz}) {
            up += orbital_soc_expectation(o, +1, f, k);
            dn += orbital_soc_expectation(o, -1, f, k);
        }
        CHECK(std::abs(up - dn) < 1e-12);
    }
}

TEST_CASE("orbital expectation: zero field, q0 only, off-axis k") {
    const KVector k(0.2, 0.2, 0.2);
    CHECK(orbital_soc_expectation(POrbital::py, 1, MultipoleField{}, k) == 0.0);
    MultipoleField f;
    f.q0 = 3.0;
    for (int s : {1, -1}) CHECK(orbital_soc_expectation(POrbital::pz, s, f, k) == doctest::Approx(3.0 * k.norm2()));
    CHECK_THROWS_AS(orbital_soc_expectation(POrbital::px, 1, f, KVector(0.2, 0.2, 0.3)), PreconditionError);
}

TEST_CASE("multipole names: higher ranks are not implemented") {
    MultipoleField f;
    f.set("Q", {0.1, 0.2, 0.3});
    CHECK(f.q_dip.y() == 0.2);
    f.set("Qxyz", {0.5});
    CHECK(f.q_xyz == 0.5);
    CHECK_THROWS_AS(f.set("Q4", {1.0}), NotImplementedError);
    CHECK_THROWS_AS(f.set("G1", {1.0, 0.0, 0.0}), NotImplementedError);
    CHECK_THROWS_AS(f.set("Z", {1.0}), PreconditionError);
}

TEST_CASE("BSVSP: Lambda4/Lambda5 partners carry opposite spin, groups sum to zero") {
    const TBParams p;
    MultipoleField f;
    f.q_dip = Vec3(0.05, 0.05, 0.05);
    int pairs = 0;
    for (double t : {0.1, 0.25, 0.4}) {
        const KVector k(t, t, t);
        const auto bands = bsvsp_check(p, f, k);
        int states = 0;
        for (const auto& b : bands) {
            states += static_cast<int>(b.partners.size());
            CHECK(b.spin_expectation.norm() < 1e-10);
            if (b.components.size() == 2) {
                ++pairs;
                const Vec3 s4 = b.components[0].spin_expectation, s5 = b.components[1].spin_expectation;
                CHECK(std::abs(s4.norm() - s5.norm()) < 1e-10);
                CHECK((s4 + s5).norm() < 1e-10);
            }
        }
        CHECK(states == kBasisSize);
    }
    CHECK(pairs > 0);
}

TEST_CASE("BSVSP: time-reversed states solve H(-k) with the same energy and flipped spin") {
    const TBParams p;
    MultipoleField f;
    f.q_dip = Vec3(0.05, 0.05, 0.05);
    const KVector k(0.2, 0.2, 0.2), mk(-0.2, -0.2, -0.2);
    const auto e = jacobi_eigh(bsvsp_hamiltonian(p, f, k));
    const CMatrix hm = bsvsp_hamiltonian(p, f, mk);
    for (int i = 0; i < kBasisSize; ++i) {
        const CVector psi = e.vectors.col(i);
        const CVector tpsi = time_reverse(psi);
        CHECK((hm * tpsi - e.values(i) * tpsi).norm() < 1e-10);
        CMatrix one(kBasisSize, 1), two(kBasisSize, 1);
        one.col(0) = psi;
        two.col(0) = tpsi;
        CHECK((spin_expectation(one, 0, 1) + spin_expectation(two, 0, 1)).norm() < 1e-10);
    }
}

TEST_CASE("BSVSP: zero field keeps Kramers pairs unpolarized") {
    for (const auto& b : bsvsp_check(TBParams{}, MultipoleField{}, KVector(0.3, 0.3, 0.3))) {
        CHECK(b.partners.size() % 2 == 0);
        CHECK(b.spin_expectation.norm() < 1e-10);
    }
    CHECK_THROWS_AS(bsvsp_check(TBParams{}, MultipoleField{}, KVector(0.3, 0.3, 0.1)), PreconditionError);
}

TEST_CASE("check runner: all checks pass on defaults, dso residual is exactly zero") {
    SpinorbitCheckOptions o;
    o.samples = 200;
    const auto all = run_spinorbit_checks("all", o);
    CHECK(all.size() == spinorbit_check_names().size());
    for (const auto& c : all) {
        INFO(c.name << " " << c.max_residual << " " << c.detail);
        CHECK(c.pass);
    }
    const auto dso = run_spinorbit_checks("dso-lambda", o);
    REQUIRE(dso.size() == 1);
    CHECK(dso[0].max_residual == 0.0);
    CHECK_THROWS_AS(run_spinorbit_checks("nope", o), PreconditionError);
}
