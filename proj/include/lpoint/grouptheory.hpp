#pragma once

// Character table engine for the C3v double group (the group of the
// wave vector along Gamma-Lambda-L).
//
// Class labels keep the 3I x C2 notation for the vertical mirrors
// (sigma_v = I x C2 about the mirror normal):
//   E      identity
//   Ē      2 pi rotation
//   2C3    +-120 deg rotations about [111]
//   2C̄3    the same times Ē
//   3I×C2  mirrors sigma_v, spin part -i m.sigma
//   3I×C̄2  mirrors times Ē,  spin part +i m.sigma

#include <complex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lpoint/error.hpp"

namespace lpoint {

// Exact Gaussian integer; every entry of the table is one of 0, +-1, +-2, +-i.
struct GaussInt {
    int re = 0;
    int im = 0;

    constexpr GaussInt() = default;
    constexpr GaussInt(int r, int i = 0) : re(r), im(i) {}

    std::complex<double> value() const { return {static_cast<double>(re), static_cast<double>(im)}; }
    friend constexpr bool operator==(const GaussInt&, const GaussInt&) = default;
};

constexpr GaussInt operator*(GaussInt a, GaussInt b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
constexpr GaussInt conj(GaussInt a) { return {a.re, -a.im}; }

struct ConjugacyClass {
    std::string label;
    int size = 0;
};

struct Irrep {
    std::string name;
    std::vector<GaussInt> characters;
    bool spinor = false;  // double-valued (odd under Ē)

    int dimension() const { return characters.front().re; }
};

// Characters per conjugacy class, class order matching the table.
struct RepVector {
    std::vector<std::complex<double>> characters;

    double dimension() const { return characters.empty() ? 0.0 : characters.front().real(); }
};

class CharacterTable {
public:
    CharacterTable(std::vector<ConjugacyClass> classes, std::vector<Irrep> irreps);

    const std::vector<ConjugacyClass>& classes() const { return classes_; }
    const std::vector<Irrep>& irreps() const { return irreps_; }
    int order() const;

    const Irrep& irrep(std::string_view name) const;
    RepVector rep(std::string_view name) const;
    // Exact class-weighted inner product numerator sum_c |c| chi_a(c) conj(chi_b(c)).
    GaussInt weighted_inner_numerator(const Irrep& a, const Irrep& b) const;

    // max |<chi_i, chi_j> - delta_ij| over irreps.
    double row_orthogonality_defect() const;
    // max |sum_i chi_i(c) conj(chi_i(c')) - delta_cc' |G|/|c|| over classes.
    double column_orthogonality_defect() const;

private:
    std::vector<ConjugacyClass> classes_;
    std::vector<Irrep> irreps_;
};

const CharacterTable& builtin_table();

// Spin-1/2 representation D_{1/2} restricted to C3v.
RepVector spinor_rep();

// Classwise product; throws PreconditionError on class-count mismatch.
RepVector product(const RepVector& a, const RepVector& b);
RepVector sum(const RepVector& a, const RepVector& b);

struct Multiplicity {
    std::string irrep;
    int count = 0;
};

// m_i = (1/|G|) sum_c |c| chi(c) conj(chi_i(c)). Throws NotARepresentation
// when any m_i is not a non-negative integer within tol.
std::vector<Multiplicity> decompose(const RepVector& rep, const CharacterTable& table = builtin_table(),
                                    double tol = 1e-9);
RepVector recompose(const std::vector<Multiplicity>& parts, const CharacterTable& table = builtin_table());

std::string format_decomposition(const std::vector<Multiplicity>& parts);

// Parses products like "L3*D12", "Λ3⊗D1/2", "L1" into a RepVector.
RepVector parse_rep_expression(std::string_view expr, const CharacterTable& table = builtin_table());

class NotARepresentation : public Error {
public:
    using Error::Error;
};

// Concrete double-group elements about a three-fold axis, for building
// representation matrices on orbital x spin bases.
struct DoubleGroupElement {
    Eigen::Matrix3d orbital;  // action on polar vectors (p orbitals); det -1 for mirrors
    Eigen::Matrix2cd spin;    // SU(2) part
    int class_index = 0;      // index into builtin_table().classes()
};

// The 12 elements for the three-fold axis (1,1,1)/sqrt(3) with mirror
// planes containing it. Class indices are assigned by conjugation and
// cross-checked against the table's class sizes.
const std::vector<DoubleGroupElement>& c3v_double_group_elements();

}  // namespace lpoint
