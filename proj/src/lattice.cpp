#include "lpoint/lattice.hpp"

#include <cmath>
#include <sstream>

#include "lpoint/error.hpp"

namespace lpoint {

void LatticeSpec::validate() const {
    if (!(a_nm > 0.0) || !std::isfinite(a_nm)) {
        throw PreconditionError("lattice constant must be positive and finite");
    }
}

bool KVector::approx_equal(const KVector& other, double tol) const {
    return std::abs(kx - other.kx) <= tol && std::abs(ky - other.ky) <= tol &&
           std::abs(kz - other.kz) <= tol;
}

bool KVector::on_lambda_axis(double tol) const {
    return std::abs(kx - ky) <= tol && std::abs(ky - kz) <= tol;
}

KVector operator+(const KVector& a, const KVector& b) {
    return {a.kx + b.kx, a.ky + b.ky, a.kz + b.kz};
}

KVector operator-(const KVector& a, const KVector& b) {
    return {a.kx - b.kx, a.ky - b.ky, a.kz - b.kz};
}

KVector operator*(double s, const KVector& k) { return {s * k.kx, s * k.ky, s * k.kz}; }

std::array<Vec3, 3> direct_basis(const LatticeSpec& spec) {
    spec.validate();
    const double h = 0.5 * spec.a_nm;
    return {Vec3(0.0, h, h), Vec3(h, 0.0, h), Vec3(h, h, 0.0)};
}

std::array<Vec3, 3> reciprocal_basis(const LatticeSpec& spec) {
    const auto a = direct_basis(spec);
    const double volume = a[0].dot(a[1].cross(a[2]));
    const double f = 2.0 * M_PI / volume;
    return {f * a[1].cross(a[2]), f * a[2].cross(a[0]), f * a[0].cross(a[1])};
}

std::array<KVector, 3> reciprocal_basis_reduced() {
    return {KVector(-1.0, 1.0, 1.0), KVector(1.0, -1.0, 1.0), KVector(1.0, 1.0, -1.0)};
}

bool is_reciprocal_lattice_vector(const KVector& k, double tol) {
    // Coefficients n_i = k . a_i / (2 pi) with a_i in units of a and k in 2pi/a.
    const Vec3 kv = k.vec();
    const std::array<Vec3, 3> a{Vec3(0.0, 0.5, 0.5), Vec3(0.5, 0.0, 0.5), Vec3(0.5, 0.5, 0.0)};
    for (const auto& ai : a) {
        const double n = kv.dot(ai);
        if (std::abs(n - std::round(n)) > tol) return false;
    }
    return true;
}

KPath::KPath(std::vector<PathSegment> segments) : segments_(std::move(segments)) {
    for (const auto& seg : segments_) {
        if (seg.samples < 2) throw PreconditionError("k-path segment needs at least 2 samples");
    }
}

void KPath::append(const KPath& other) {
    segments_.insert(segments_.end(), other.segments_.begin(), other.segments_.end());
}

namespace {

// Splits "Γ-Δ-X" into its endpoint labels and interior label.
struct SegmentLabels {
    std::string start, interior, end;
};

SegmentLabels split_label(const std::string& label) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : label) {
        if (c == '-') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.size() == 3) return {parts[0], parts[1], parts[2]};
    if (parts.size() == 2) return {parts[0], label, parts[1]};
    return {label, label, label};
}

}  // namespace

std::vector<KPoint> KPath::points() const {
    std::vector<KPoint> out;
    double s = 0.0;
    for (std::size_t si = 0; si < segments_.size(); ++si) {
        const auto& seg = segments_[si];
        const auto labels = split_label(seg.label);
        const KVector delta = seg.end - seg.start;
        const double len = std::sqrt(delta.norm2());
        const std::size_t n = seg.samples;
        for (std::size_t i = 0; i < n; ++i) {
            KPoint p;
            if (i == 0) {
                p.k = seg.start;
                p.label = labels.start;
            } else if (i + 1 == n) {
                p.k = seg.end;
                p.label = labels.end;
            } else {
                const double t = static_cast<double>(i) / static_cast<double>(n - 1);
                p.k = seg.start + t * delta;
                p.label = labels.interior;
            }
            p.s = s + len * static_cast<double>(i) / static_cast<double>(n - 1);
            p.segment = si;
            out.push_back(std::move(p));
        }
        s += len;
    }
    return out;
}

KPath standard_path(std::string_view name, std::size_t samples) {
    if (samples < 2) throw PreconditionError("standard_path needs samples >= 2");
    if (name == "G-D-X" || name == "Γ-Δ-X") {
        return KPath({{"Γ-Δ-X", points::Gamma, points::X, samples}});
    }
    if (name == "G-L-L" || name == "Γ-Λ-L") {
        return KPath({{"Γ-Λ-L", points::Gamma, points::L, samples}});
    }
    if (name == "K-L") {
        return KPath({{"K-L", points::K, points::L, samples}});
    }
    throw PreconditionError("unknown k-path name: " + std::string(name));
}

KPath composite_path(std::string_view names, std::size_t samples) {
    KPath path;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) path.append(standard_path(cur, samples));
        cur.clear();
    };
    for (char c : names) {
        if (c == ',') {
            flush();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    flush();
    if (path.segments().empty()) throw PreconditionError("empty k-path list");
    return path;
}

Rounding parse_rounding(std::string_view s) {
    if (s == "nearest") return Rounding::nearest;
    if (s == "floor") return Rounding::floor;
    throw PreconditionError("unknown rounding mode: " + std::string(s));
}

DotLevels count_dot_levels(const DotGeometry& geom, const LatticeSpec& spec, Rounding rounding) {
    spec.validate();
    if (!(geom.side_nm > 0.0)) throw PreconditionError("dot side must be positive");
    const double ratio = geom.side_nm / spec.a_nm;
    DotLevels out;
    out.exact_cells = ratio * ratio * ratio;
    const double rounded =
        rounding == Rounding::nearest ? std::round(out.exact_cells) : std::floor(out.exact_cells);
    out.unit_cells = static_cast<std::int64_t>(rounded);
    out.levels = out.unit_cells;
    out.electrons = 2 * out.levels;
    return out;
}

}  // namespace lpoint
