#pragma once

// Nearest-neighbour sp3s* tight-binding model of diamond-lattice Si with
// optional on-site spin-orbit coupling.
//
// Basis per atom: s, px, py, pz, s*, each with spin up/down. The full
// Bloch Hamiltonian is 20x20, ordered (atom, orbital, spin) with spin
// fastest: index = 10 * atom + 2 * orbital + spin.

#include <array>
#include <string>
#include <vector>

#include "lpoint/lattice.hpp"
#include "lpoint/linalg.hpp"

namespace lpoint {

// Two-centre parameters in the Vogl-Hjalmarson-Dow convention (the factor 4
// from the four nearest neighbours is included in the V's). Defaults are a
// refit that places the conduction minimum near 0.85 X; the original Vogl
// set is in data/tb_vogl.json.
struct TBParams {
    double es = -2.8594;
    double ep = 1.5932;
    double esstar = 12.0;
    double vss = -8.0016;
    double vxx = 1.5932;
    double vxy = 5.3506;
    double vsp = 2.9745;
    double vsstarp = 5.1061;
    double soc_lambda = 0.0293;  // H_so = lambda L.S on p shells, Delta_so = 3 lambda / 2

    void validate() const;
};

enum class Orbital : int { s = 0, px = 1, py = 2, pz = 3, sstar = 4 };

inline constexpr int kOrbitalsPerAtom = 5;
inline constexpr int kAtoms = 2;
inline constexpr int kBasisSize = kOrbitalsPerAtom * kAtoms * 2;
inline constexpr int kValenceStates = 8;  // 4 electrons per atom, 2 atoms

inline constexpr int basis_index(int atom, Orbital orb, int spin) {
    return 10 * atom + 2 * static_cast<int>(orb) + spin;
}

// "A:s↑", "B:pz↓", ...
std::vector<std::string> basis_labels();

CMatrix build_hamiltonian(const TBParams& params, const KVector& k);

// On-site lambda L.S block for one atom in the (px,py,pz) x (up,down) basis.
Eigen::Matrix<cplx, 6, 6> p_shell_soc(double lambda);

struct EigenPoint {
    KVector k;
    Eigen::VectorXd energies;  // ascending
    CMatrix states;            // columns
};

EigenPoint solve_point(const TBParams& params, const KVector& k);

struct BandSet {
    KPath path;
    std::vector<KPoint> kpoints;
    std::vector<Eigen::VectorXd> energies;  // per k, ascending
    std::vector<CMatrix> states;            // per k, columns match energies
    // connected[b][i]: energy-rank index at k-point i of continuous band b.
    std::vector<std::vector<int>> connected;
    // overlap[b][i]: match quality between k-points i and i+1 for band b.
    std::vector<std::vector<double>> overlap;

    std::size_t size() const { return kpoints.size(); }
    int bands() const { return kpoints.empty() ? 0 : static_cast<int>(energies.front().size()); }
    double connected_energy(int band, std::size_t k_index) const;
    double min_match_overlap() const;
};

struct BandOptions {
    double degeneracy_tol = 1e-8;
    unsigned threads = 0;  // 0 = hardware concurrency
};

// Diagonalizes along the path and resolves band connectivity by greedy
// eigenvector-subspace overlap matching between neighbouring k-points.
BandSet solve_bands(const TBParams& params, const KPath& path, const BandOptions& opts = {});

struct OrbitalFractions {
    double s = 0.0;
    double p = 0.0;   // p weight perpendicular to the chosen axis
    double pz = 0.0;  // p weight along the chosen axis
    double sstar = 0.0;

    double sum() const { return s + p + pz + sstar; }
};

// Squared-amplitude projections, spin- and atom-summed. Degenerate states
// (within degeneracy_tol) are averaged over their subspace. axis selects
// the "pz" direction; default is the crystal z axis.
OrbitalFractions orbital_fractions(const BandSet& bands, int band_index, std::size_t k_index,
                                   const Vec3& axis = Vec3::UnitZ(), double degeneracy_tol = 1e-8);
OrbitalFractions orbital_fractions(const EigenPoint& point, int band_index,
                                   const Vec3& axis = Vec3::UnitZ(), double degeneracy_tol = 1e-8);

// Conduction-band landmarks used to compare against the Si band topology.
struct BandTopology {
    double vbm = 0.0;          // valence maximum (at Gamma)
    double k0 = 0.0;           // conduction minimum position along Gamma-X, 2pi/a
    double e_x0 = 0.0;         // conduction minimum along Gamma-X
    double e_l = 0.0;          // lowest conduction level at L
    double gap = 0.0;          // e_x0 - vbm
    double e_l_rel = 0.0;      // e_l - vbm
    double l_minus_x0 = 0.0;   // e_l - e_x0
    double s_frac_lambda = 0.0;  // lowest conduction band at (1/4,1/4,1/4), axis (111)
    double s_frac_delta = 0.0;   // lowest conduction band at 0.85 X, axis z
    double pz_frac_delta = 0.0;
};

// Samples Gamma-X with `samples` points, then refines the minimum by
// golden-section search.
BandTopology band_topology(const TBParams& params, std::size_t samples = 200);

}  // namespace lpoint
