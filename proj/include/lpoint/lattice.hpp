#pragma once

// Diamond-lattice geometry, reciprocal lattice, high-symmetry paths and
// quantum-dot level counting.
//
// Units used throughout the library: lengths in nm, wave vectors in units
// of 2*pi/a, energies in eV.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lpoint {

using Vec3 = Eigen::Vector3d;

struct LatticeSpec {
    double a_nm = 0.543;
    // Two-atom diamond basis, in units of a.
    std::array<Vec3, 2> basis{Vec3(0.0, 0.0, 0.0), Vec3(0.25, 0.25, 0.25)};

    void validate() const;
};

// Wave vector in units of 2*pi/a.
struct KVector {
    double kx = 0.0;
    double ky = 0.0;
    double kz = 0.0;

    static constexpr double kTolerance = 1e-12;

    KVector() = default;
    KVector(double x, double y, double z) : kx(x), ky(y), kz(z) {}
    explicit KVector(const Vec3& v) : kx(v.x()), ky(v.y()), kz(v.z()) {}

    Vec3 vec() const { return {kx, ky, kz}; }
    double norm2() const { return kx * kx + ky * ky + kz * kz; }
    bool approx_equal(const KVector& other, double tol = kTolerance) const;
    bool on_lambda_axis(double tol = kTolerance) const;
};

KVector operator+(const KVector& a, const KVector& b);
KVector operator-(const KVector& a, const KVector& b);
KVector operator*(double s, const KVector& k);

// FCC primitive vectors a_i (nm) and their reciprocal b_i (1/nm),
// a_i . b_j = 2 pi delta_ij.
std::array<Vec3, 3> direct_basis(const LatticeSpec& spec);
std::array<Vec3, 3> reciprocal_basis(const LatticeSpec& spec);

// Reciprocal basis expressed in units of 2*pi/a; independent of a.
std::array<KVector, 3> reciprocal_basis_reduced();

// True when k (2*pi/a units) is an integer combination of b1, b2, b3.
bool is_reciprocal_lattice_vector(const KVector& k, double tol = 1e-9);

namespace points {
inline const KVector Gamma{0.0, 0.0, 0.0};
inline const KVector X{0.0, 0.0, 1.0};
inline const KVector L{0.5, 0.5, 0.5};
inline const KVector K{0.75, 0.75, 0.0};
}  // namespace points

struct PathSegment {
    std::string label;  // e.g. "G-L-L" rendered as "Γ-Λ-L"
    KVector start;
    KVector end;
    std::size_t samples = 2;
};

struct KPoint {
    KVector k;
    double s = 0.0;            // cumulative arclength, 2*pi/a units
    std::size_t segment = 0;
    std::string label;         // high-symmetry label at segment ends, empty inside
};

class KPath {
public:
    KPath() = default;
    explicit KPath(std::vector<PathSegment> segments);

    const std::vector<PathSegment>& segments() const { return segments_; }
    // Uniformly sampled points; segment endpoints appear once per segment.
    std::vector<KPoint> points() const;

    void append(const KPath& other);

private:
    std::vector<PathSegment> segments_;
};

// name: "G-D-X" (or "Γ-Δ-X"), "G-L-L" (or "Γ-Λ-L"), "K-L".
KPath standard_path(std::string_view name, std::size_t samples);

// Comma separated list of standard path names.
KPath composite_path(std::string_view names, std::size_t samples);

enum class Rounding { floor, nearest };
Rounding parse_rounding(std::string_view s);

struct DotGeometry {
    double side_nm = 1.0;  // cube edge
};

struct DotLevels {
    std::int64_t unit_cells = 0;
    std::int64_t levels = 0;
    std::int64_t electrons = 0;
    double exact_cells = 0.0;  // (side/a)^3 before rounding
};

DotLevels count_dot_levels(const DotGeometry& geom, const LatticeSpec& spec,
                           Rounding rounding = Rounding::nearest);

}  // namespace lpoint
