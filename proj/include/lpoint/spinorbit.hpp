#pragma once

// Multipole spin-orbit Hamiltonians on the spin-1/2 basis {up, down}, and
// their embedding in the tight-binding basis for polarization checks.
//
// k is in units of 2 pi / a throughout.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lpoint/lattice.hpp"
#include "lpoint/linalg.hpp"
#include "lpoint/tightbinding.hpp"

namespace lpoint {

struct MultipoleField {
    double q0 = 0.0;             // free-electron coefficient, eV (2pi/a)^-2
    Vec3 q_dip = Vec3::Zero();   // electric dipole Q
    Vec3 m_dip = Vec3::Zero();   // magnetic dipole M (Zeeman-like)
    Vec3 t_dip = Vec3::Zero();   // magnetic toroidal dipole T
    double g0 = 0.0;             // electric toroidal monopole G0
    double q_xyz = 0.0;          // electric octupole Q_xyz

    void validate() const;

    // Sets one component by multipole name: "Q0", "Q", "M", "T", "G0",
    // "Qxyz". Other ranks throw NotImplementedError; unknown names throw
    // PreconditionError.
    void set(std::string_view name, const std::vector<double>& value);
};

struct SpinorHamiltonian {
    Eigen::Matrix2cd matrix = Eigen::Matrix2cd::Zero();
    KVector k;
    MultipoleField field;

    Eigen::Vector2d eigenvalues() const;  // ascending
};

// Pauli matrices, index 0..3 = sigma_0, sigma_x, sigma_y, sigma_z.
const Eigen::Matrix2cd& pauli(int i);

SpinorHamiltonian h_rashba(const MultipoleField& field, const KVector& k);
SpinorHamiltonian h_dresselhaus(const MultipoleField& field, const KVector& k);
SpinorHamiltonian h_total(const MultipoleField& field, const KVector& k);

enum class POrbital { px, py, pz };

// <p_alpha, +-| H_Lambda |p_alpha, +-> with H_Lambda = q0 k^2 + T.k + H_RSO +
// H_DSO acting on the spin factor. The spin states are quantized along the
// growth axis (1,1,1)/sqrt(3). k must lie on the Lambda axis.
double orbital_soc_expectation(POrbital orbital, int spin_sign, const MultipoleField& field, const KVector& k);

// One irreducible component of a degenerate group, isolated with the
// character projector.
struct IrrepComponent {
    std::string irrep;
    Vec3 spin_expectation = Vec3::Zero();
};

struct PolarizedBand {
    double energy = 0.0;
    Vec3 spin_expectation = Vec3::Zero();  // summed over the degenerate group
    std::vector<int> partners;             // energy-rank indices in the group
    std::string irrep;                     // e.g. "Λ6" or "Λ4 ⊕ Λ5"; "?" if unresolved
    std::vector<IrrepComponent> components;  // filled when the group holds several irreps
};

struct BsvspOptions {
    double degeneracy_tol = 1e-8;
    // Sublattice potential V(tau) = -stark_coupling * Q . tau (tau in units of a)
    // that breaks inversion the way the dipole field does.
    double stark_coupling = 1.0;
};

// Full tight-binding Hamiltonian plus 1_orbital (x) h_total plus the Stark
// sublattice term, on both sublattices.
CMatrix bsvsp_hamiltonian(const TBParams& params, const MultipoleField& field, const KVector& k,
                          const BsvspOptions& opts = {});

// Eigenstates at k on the Lambda axis, grouped by energy; each group carries
// its summed <sigma> and its C3v double-group label.
std::vector<PolarizedBand> bsvsp_check(const TBParams& params, const MultipoleField& field, const KVector& k,
                                       const BsvspOptions& opts = {});

// sum_i <psi_i| 1 (x) sigma |psi_i> over the given columns.
Vec3 spin_expectation(const CMatrix& states, int first, int count);

// Characters of the representation carried by columns [first, first+count)
// under the 12 double-group elements, reduced to class characters.
std::vector<std::complex<double>> group_characters(const CMatrix& states, int first, int count);

// Time-reversal operator (1 (x) -i sigma_y) K applied to a state.
CVector time_reverse(const CVector& psi);

struct CheckResult {
    std::string name;
    double max_residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string detail;
};

struct SpinorbitCheckOptions {
    std::uint64_t seed = 1;
    int samples = 1000;
    TBParams params{};
    MultipoleField bsvsp_field{};  // defaults to a dipole along (111) when zero
    double stark_coupling = 1.0;
    std::vector<double> lambda_fractions{0.1, 0.25, 0.4};  // Lambda-axis k = f (1,1,1)
};

// Named checks: "dso-lambda", "p-equality", "hermitian", "time-reversal",
// "trace-decomposition", "bsvsp". "all" runs every one.
std::vector<std::string> spinorbit_check_names();
std::vector<CheckResult> run_spinorbit_checks(std::string_view which, const SpinorbitCheckOptions& opts);

}  // namespace lpoint
