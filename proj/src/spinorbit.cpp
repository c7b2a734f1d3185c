#include "lpoint/spinorbit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "lpoint/error.hpp"
#include "lpoint/grouptheory.hpp"

namespace lpoint {

namespace {

const cplx I(0.0, 1.0);

bool finite3(const Vec3& v) { return v.allFinite(); }

}  // namespace

void MultipoleField::validate() const {
    if (!std::isfinite(q0) || !std::isfinite(g0) || !std::isfinite(q_xyz) || !finite3(q_dip) || !finite3(m_dip) ||
        !finite3(t_dip)) {
        throw PreconditionError("multipole field has non-finite component");
    }
}

void MultipoleField::set(std::string_view name, const std::vector<double>& value) {
    auto scalar = [&](double& dst) {
        if (value.size() != 1) throw PreconditionError(std::string(name) + " expects 1 value");
        dst = value[0];
    };
    auto vector = [&](Vec3& dst) {
        if (value.size() != 3) throw PreconditionError(std::string(name) + " expects 3 values");
        dst = Vec3(value[0], value[1], value[2]);
    };
    if (name == "Q0") return scalar(q0);
    if (name == "Q") return vector(q_dip);
    if (name == "M") return vector(m_dip);
    if (name == "T") return vector(t_dip);
    if (name == "G0") return scalar(g0);
    if (name == "Qxyz") return scalar(q_xyz);
    if (name.size() >= 2 && std::string_view("QMTG").find(name[0]) != std::string_view::npos) {
        const std::string rank(name.substr(1));
        if (!rank.empty() && std::all_of(rank.begin(), rank.end(), ::isdigit)) {
            throw NotImplementedError("multipole " + std::string(name) +
                                      " is beyond the dipole/octupole truncation");
        }
    }
    throw PreconditionError("unknown multipole component: " + std::string(name));
}

Eigen::Vector2d SpinorHamiltonian::eigenvalues() const {
    // Closed form for a 2x2 Hermitian matrix a sigma_0 + b.sigma.
    const double a = 0.5 * (matrix(0, 0).real() + matrix(1, 1).real());
    const double bz = 0.5 * (matrix(0, 0).real() - matrix(1, 1).real());
    const double b = std::sqrt(bz * bz + std::norm(matrix(1, 0)));
    return {a - b, a + b};
}

const Eigen::Matrix2cd& pauli(int i) {
    static const std::array<Eigen::Matrix2cd, 4> s = [] {
        std::array<Eigen::Matrix2cd, 4> m;
        m[0] << 1, 0, 0, 1;
        m[1] << 0, 1, 1, 0;
        m[2] << 0, -I, I, 0;
        m[3] << 1, 0, 0, -1;
        return m;
    }();
    return s.at(static_cast<std::size_t>(i));
}

SpinorHamiltonian h_rashba(const MultipoleField& f, const KVector& k) {
    const Vec3& q = f.q_dip;
    SpinorHamiltonian h{Eigen::Matrix2cd::Zero(), k, f};
    h.matrix = q.x() * (k.ky * pauli(3) - k.kz * pauli(2)) + q.y() * (k.kz * pauli(1) - k.kx * pauli(3)) +
               q.z() * (k.kx * pauli(2) - k.ky * pauli(1));
    return h;
}

SpinorHamiltonian h_dresselhaus(const MultipoleField& f, const KVector& k) {
    SpinorHamiltonian h{Eigen::Matrix2cd::Zero(), k, f};
    const double c = std::sqrt(15.0) * f.q_xyz;
    const double ax = k.kx * (k.ky * k.ky - k.kz * k.kz);
    const double ay = k.ky * (k.kz * k.kz - k.kx * k.kx);
    const double az = k.kz * (k.kx * k.kx - k.ky * k.ky);
    h.matrix = c * (ax * pauli(1) + ay * pauli(2) + az * pauli(3));
    return h;
}

SpinorHamiltonian h_total(const MultipoleField& f, const KVector& k) {
    const Vec3 kv = k.vec();
    SpinorHamiltonian h{Eigen::Matrix2cd::Zero(), k, f};
    h.matrix = (f.q0 * k.norm2() + f.t_dip.dot(kv)) * pauli(0) + h_rashba(f, k).matrix +
               f.m_dip.x() * pauli(1) + f.m_dip.y() * pauli(2) + f.m_dip.z() * pauli(3) +
               f.g0 * (k.kx * pauli(1) + k.ky * pauli(2) + k.kz * pauli(3)) + h_dresselhaus(f, k).matrix;
    return h;
}

double orbital_soc_expectation(POrbital /*orbital*/, int spin_sign, const MultipoleField& f, const KVector& k) {
    if (!k.on_lambda_axis()) throw PreconditionError("orbital_soc_expectation: k is off the Lambda axis");
    if (spin_sign != 1 && spin_sign != -1) throw PreconditionError("spin_sign must be +1 or -1");

    // Spinors quantized along n = (1,1,1)/sqrt(3): theta = acos(1/sqrt 3), phi = pi/4.
    const double theta = std::acos(1.0 / std::sqrt(3.0));
    const double phi = M_PI / 4.0;
    Eigen::Vector2cd chi;
    if (spin_sign > 0) {
        chi << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi);
    } else {
        chi << -std::polar(std::sin(theta / 2.0), -phi), std::cos(theta / 2.0);
    }
    // H_Lambda is orbital-independent here, so every p_alpha sees the same spin sector.
    const Eigen::Matrix2cd h = (f.q0 * k.norm2() + f.t_dip.dot(k.vec())) * pauli(0) + h_rashba(f, k).matrix +
                               h_dresselhaus(f, k).matrix;
    return (chi.adjoint() * h * chi)(0, 0).real();
}

CMatrix bsvsp_hamiltonian(const TBParams& params, const MultipoleField& field, const KVector& k,
                          const BsvspOptions& opts) {
    CMatrix h = build_hamiltonian(params, k);
    const Eigen::Matrix2cd hs = h_total(field, k).matrix;
    const LatticeSpec lattice;
    for (int atom = 0; atom < kAtoms; ++atom) {
        const double v = -opts.stark_coupling * field.q_dip.dot(lattice.basis[static_cast<std::size_t>(atom)]);
        for (int o = 0; o < kOrbitalsPerAtom; ++o) {
            const int i = 10 * atom + 2 * o;
            h.block<2, 2>(i, i) += hs + v * Eigen::Matrix2cd::Identity();
        }
    }
    return h;
}

Vec3 spin_expectation(const CMatrix& states, int first, int count) {
    Vec3 s = Vec3::Zero();
    for (int c = first; c < first + count; ++c) {
        const CVector psi = states.col(c);
        for (int b = 0; b < psi.size(); b += 2) {
            const Eigen::Vector2cd chi = psi.segment<2>(b);
            for (int a = 0; a < 3; ++a) s(a) += (chi.adjoint() * pauli(a + 1) * chi)(0, 0).real();
        }
    }
    return s;
}

CVector time_reverse(const CVector& psi) {
    // (-i sigma_y) = [[0,-1],[1,0]] acting on the conjugate.
    CVector out(psi.size());
    for (int b = 0; b < psi.size(); b += 2) {
        out(b) = -std::conj(psi(b + 1));
        out(b + 1) = std::conj(psi(b));
    }
    return out;
}

namespace {

// Action of a double-group element on the 20-dim basis. Both atoms sit on
// the three-fold axis, so no sublattice exchange and no Bloch phase.
CMatrix element_operator(const DoubleGroupElement& g) {
    CMatrix op = CMatrix::Zero(kBasisSize, kBasisSize);
    for (int atom = 0; atom < kAtoms; ++atom) {
        const int base = 10 * atom;
        for (int o : {0, 4}) op.block<2, 2>(base + 2 * o, base + 2 * o) = g.spin;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) op.block<2, 2>(base + 2 + 2 * i, base + 2 + 2 * j) = g.orbital(i, j) * g.spin;
    }
    return op;
}

const std::vector<CMatrix>& element_operators() {
    static const std::vector<CMatrix> ops = [] {
        std::vector<CMatrix> v;
        for (const auto& g : c3v_double_group_elements()) v.push_back(element_operator(g));
        return v;
    }();
    return ops;
}

}  // namespace

std::vector<std::complex<double>> group_characters(const CMatrix& states, int first, int count) {
    const auto& els = c3v_double_group_elements();
    const auto& ops = element_operators();
    const auto& classes = builtin_table().classes();
    std::vector<std::complex<double>> chi(classes.size(), 0.0);
    const CMatrix sub = states.middleCols(first, count);
    for (std::size_t e = 0; e < els.size(); ++e) {
        chi[static_cast<std::size_t>(els[e].class_index)] += (sub.adjoint() * ops[e] * sub).trace();
    }
    for (std::size_t c = 0; c < classes.size(); ++c) chi[c] /= static_cast<double>(classes[c].size);
    return chi;
}

namespace {

// Projects the group subspace onto irrep `ir` and returns the normalized
// dominant state in the full basis.
CVector project_component(const CMatrix& sub, const Irrep& ir) {
    const auto& els = c3v_double_group_elements();
    const auto& ops = element_operators();
    CMatrix proj = CMatrix::Zero(sub.cols(), sub.cols());
    for (std::size_t e = 0; e < els.size(); ++e) {
        const cplx chi = ir.characters[static_cast<std::size_t>(els[e].class_index)].value();
        proj += std::conj(chi) * (sub.adjoint() * ops[e] * sub);
    }
    proj *= static_cast<double>(ir.dimension()) / static_cast<double>(els.size());
    Eigen::Index best = 0;
    proj.colwise().norm().maxCoeff(&best);
    CVector v = sub * proj.col(best);
    return v / v.norm();
}

}  // namespace

std::vector<PolarizedBand> bsvsp_check(const TBParams& params, const MultipoleField& field, const KVector& k,
                                       const BsvspOptions& opts) {
    params.validate();
    field.validate();
    if (!k.on_lambda_axis()) throw PreconditionError("bsvsp_check: k is off the Lambda axis");
    const auto eig = jacobi_eigh(bsvsp_hamiltonian(params, field, k, opts));
    const auto& table = builtin_table();
    std::vector<PolarizedBand> out;
    for (const auto& [b, e] : degenerate_groups(eig.values, opts.degeneracy_tol)) {
        PolarizedBand band;
        band.energy = eig.values.segment(b, e - b).mean();
        band.spin_expectation = spin_expectation(eig.vectors, b, e - b);
        for (int i = b; i < e; ++i) band.partners.push_back(i);
        std::vector<Multiplicity> parts;
        try {
            parts = decompose({group_characters(eig.vectors, b, e - b)}, table, 1e-6);
            band.irrep = format_decomposition(parts);
        } catch (const NotARepresentation&) {
            band.irrep = "?";
        }
        const bool simple = std::all_of(parts.begin(), parts.end(), [&](const Multiplicity& m) {
            return m.count == 1 && table.irrep(m.irrep).dimension() == 1;
        });
        if (parts.size() > 1 && simple) {
            const CMatrix sub = eig.vectors.middleCols(b, e - b);
            for (const auto& m : parts) {
                CMatrix one(sub.rows(), 1);
                one.col(0) = project_component(sub, table.irrep(m.irrep));
                band.components.push_back({m.irrep, spin_expectation(one, 0, 1)});
            }
        }
        out.push_back(std::move(band));
    }
    return out;
}

std::vector<std::string> spinorbit_check_names() {
    return {"dso-lambda", "p-equality", "hermitian", "time-reversal", "trace-decomposition", "bsvsp"};
}

namespace {

struct Draw {
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> u{-1.0, 1.0};

    explicit Draw(std::uint64_t seed) : rng(seed) {}
    double operator()() { return u(rng); }
    Vec3 vec() {
        const double x = (*this)(), y = (*this)(), z = (*this)();
        return {x, y, z};
    }
    MultipoleField field() {
        MultipoleField f;
        f.q0 = (*this)();
        f.q_dip = vec();
        f.m_dip = vec();
        f.t_dip = vec();
        f.g0 = (*this)();
        f.q_xyz = (*this)();
        return f;
    }
};

CheckResult check_dso_lambda(const SpinorbitCheckOptions& o) {
    Draw d(o.seed);
    CheckResult r{"dso-lambda", 0.0, 0.0, true, ""};
    for (int n = 0; n < o.samples; ++n) {
        const double t = 2.0 * d();
        MultipoleField f;
        f.q_xyz = d();
        const double norm = h_dresselhaus(f, KVector(t, t, t)).matrix.cwiseAbs().maxCoeff();
        r.max_residual = std::max(r.max_residual, norm);
    }
    r.pass = r.max_residual == 0.0;
    r.detail = "max |H_DSO(t,t,t)| over " + std::to_string(o.samples) + " draws";
    return r;
}

CheckResult check_p_equality(const SpinorbitCheckOptions& o) {
    Draw d(o.seed + 1);
    CheckResult r{"p-equality", 0.0, 1e-12, true, ""};
    for (int n = 0; n < o.samples; ++n) {
        const MultipoleField f = d.field();
        const double t = 2.0 * d();
        const KVector k(t, t, t);
        double up = 0.0, down = 0.0;
        for (POrbital p : {POrbital::px, POrbital::py, POrbital::pz}) {
            up += orbital_soc_expectation(p, +1, f, k);
            down += orbital_soc_expectation(p, -1, f, k);
        }
        r.max_residual = std::max(r.max_residual, std::abs(up - down));
    }
    r.pass = r.max_residual < r.threshold;
    r.detail = "max |sum <p,+> - sum <p,->| on Lambda";
    return r;
}

CheckResult check_hermitian(const SpinorbitCheckOptions& o) {
    Draw d(o.seed + 2);
    CheckResult r{"hermitian", 0.0, 1e-14, true, ""};
    for (int n = 0; n < o.samples; ++n) {
        const MultipoleField f = d.field();
        const KVector k(d.vec());
        for (const auto& h : {h_rashba(f, k), h_dresselhaus(f, k), h_total(f, k)}) {
            r.max_residual = std::max(r.max_residual, (h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff());
        }
    }
    r.pass = r.max_residual < r.threshold;
    r.detail = "max |H - H^dagger|";
    return r;
}

CheckResult check_time_reversal(const SpinorbitCheckOptions& o) {
    Draw d(o.seed + 3);
    CheckResult r{"time-reversal", 0.0, 1e-12, true, ""};
    for (int n = 0; n < o.samples; ++n) {
        MultipoleField f = d.field();
        f.m_dip.setZero();
        f.t_dip.setZero();
        const KVector k(d.vec());
        const auto a = h_total(f, k).eigenvalues();
        const auto b = h_total(f, -1.0 * k).eigenvalues();
        r.max_residual = std::max(r.max_residual, (a - b).cwiseAbs().maxCoeff());
    }
    r.pass = r.max_residual < r.threshold;
    r.detail = "max spectral difference between k and -k with M = T = 0";
    return r;
}

CheckResult check_trace_decomposition(const SpinorbitCheckOptions& o) {
    Draw d(o.seed + 4);
    CheckResult r{"trace-decomposition", 0.0, 0.0, true, ""};
    for (int n = 0; n < o.samples; ++n) {
        MultipoleField f = d.field();
        const KVector k(d.vec());
        const Eigen::Matrix2cd hr = h_rashba(f, k).matrix;
        r.max_residual = std::max(r.max_residual, std::abs(hr.trace()));
        MultipoleField t;
        t.t_dip = f.t_dip;
        const Eigen::Matrix2cd ht = h_total(t, k).matrix;
        r.max_residual = std::max({r.max_residual, std::abs(ht(0, 1)), std::abs(ht(1, 0)), std::abs(ht(0, 0) - ht(1, 1))});
    }
    r.pass = r.max_residual == 0.0;
    r.detail = "Rashba trace and T-term off-identity part";
    return r;
}

CheckResult check_bsvsp(const SpinorbitCheckOptions& o) {
    CheckResult r{"bsvsp", 0.0, 1e-10, true, ""};
    MultipoleField f = o.bsvsp_field;
    if (f.q_dip.isZero(0.0)) f.q_dip = Vec3(0.05, 0.05, 0.05);
    int pairs = 0;
    double tr_residual = 0.0;
    for (double frac : o.lambda_fractions) {
        const KVector k(frac, frac, frac);
        BsvspOptions bo;
        bo.stark_coupling = o.stark_coupling;
        const auto bands = bsvsp_check(o.params, f, k, bo);
        for (const auto& b : bands) r.max_residual = std::max(r.max_residual, b.spin_expectation.norm());

        // Lambda4/Lambda5 partners inside each split group.
        for (const auto& b : bands) {
            if (b.components.size() != 2) continue;
            const auto& c4 = b.components[0];
            const auto& c5 = b.components[1];
            if (c4.irrep != "Λ4" || c5.irrep != "Λ5") continue;
            ++pairs;
            const Vec3& s4 = c4.spin_expectation;
            const Vec3& s5 = c5.spin_expectation;
            r.max_residual = std::max({r.max_residual, std::abs(s4.norm() - s5.norm()), (s4 + s5).norm()});
        }

        // Time-reversal oracle: Theta psi(k) is an eigenstate at -k with flipped <sigma>.
        MultipoleField ftr = f;
        ftr.m_dip.setZero();
        ftr.t_dip.setZero();
        const auto eig = jacobi_eigh(bsvsp_hamiltonian(o.params, ftr, k));
        const CMatrix hm = bsvsp_hamiltonian(o.params, ftr, -1.0 * k);
        for (int c = 0; c < eig.vectors.cols(); ++c) {
            const CVector psi = eig.vectors.col(c);
            const CVector tpsi = time_reverse(psi);
            tr_residual = std::max(tr_residual, (hm * tpsi - eig.values(c) * tpsi).norm());
            CMatrix one(psi.size(), 1), tone(psi.size(), 1);
            one.col(0) = psi;
            tone.col(0) = tpsi;
            tr_residual = std::max(tr_residual, (spin_expectation(one, 0, 1) + spin_expectation(tone, 0, 1)).norm());
        }
    }
    r.max_residual = std::max(r.max_residual, tr_residual);
    r.pass = r.max_residual < r.threshold && pairs > 0;
    std::ostringstream os;
    os << pairs << " Λ4/Λ5 pairs; time-reversal residual " << tr_residual;
    r.detail = os.str();
    return r;
}

}  // namespace

std::vector<CheckResult> run_spinorbit_checks(std::string_view which, const SpinorbitCheckOptions& opts) {
    std::vector<CheckResult> out;
    const bool all = which == "all";
    bool matched = all;
    auto want = [&](std::string_view n) {
        if (all || which == n) {
            matched = true;
            return true;
        }
        return false;
    };
    if (want("dso-lambda")) out.push_back(check_dso_lambda(opts));
    if (want("p-equality")) out.push_back(check_p_equality(opts));
    if (want("hermitian")) out.push_back(check_hermitian(opts));
    if (want("time-reversal")) out.push_back(check_time_reversal(opts));
    if (want("trace-decomposition")) out.push_back(check_trace_decomposition(opts));
    if (want("bsvsp")) out.push_back(check_bsvsp(opts));
    if (!matched) throw PreconditionError("unknown spinorbit check: " + std::string(which));
    return out;
}

}  // namespace lpoint
