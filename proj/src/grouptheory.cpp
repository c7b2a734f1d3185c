#include "lpoint/grouptheory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lpoint {

CharacterTable::CharacterTable(std::vector<ConjugacyClass> classes, std::vector<Irrep> irreps)
    : classes_(std::move(classes)), irreps_(std::move(irreps)) {
    for (const auto& ir : irreps_) {
        if (ir.characters.size() != classes_.size()) {
            throw PreconditionError("irrep " + ir.name + " has wrong number of characters");
        }
    }
}

int CharacterTable::order() const {
    int n = 0;
    for (const auto& c : classes_) n += c.size;
    return n;
}

const Irrep& CharacterTable::irrep(std::string_view name) const {
    for (const auto& ir : irreps_)
        if (ir.name == name) return ir;
    throw PreconditionError("unknown irrep: " + std::string(name));
}

RepVector CharacterTable::rep(std::string_view name) const {
    RepVector r;
    for (const auto& c : irrep(name).characters) r.characters.push_back(c.value());
    return r;
}

GaussInt CharacterTable::weighted_inner_numerator(const Irrep& a, const Irrep& b) const {
    GaussInt acc;
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        const GaussInt t = a.characters[c] * conj(b.characters[c]);
        acc.re += classes_[c].size * t.re;
        acc.im += classes_[c].size * t.im;
    }
    return acc;
}

double CharacterTable::row_orthogonality_defect() const {
    double worst = 0.0;
    const double g = order();
    for (std::size_t i = 0; i < irreps_.size(); ++i)
        for (std::size_t j = 0; j < irreps_.size(); ++j) {
            const GaussInt num = weighted_inner_numerator(irreps_[i], irreps_[j]);
            const std::complex<double> ip(num.re / g, num.im / g);
            worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

double CharacterTable::column_orthogonality_defect() const {
    double worst = 0.0;
    const double g = order();
    for (std::size_t c = 0; c < classes_.size(); ++c)
        for (std::size_t d = 0; d < classes_.size(); ++d) {
            std::complex<double> s = 0.0;
            for (const auto& ir : irreps_) s += ir.characters[c].value() * std::conj(ir.characters[d].value());
            const double expect = c == d ? g / classes_[c].size : 0.0;
            worst = std::max(worst, std::abs(s - expect));
        }
    return worst;
}

const CharacterTable& builtin_table() {
    static const CharacterTable table(
        {{"E", 1}, {"Ē", 1}, {"2C3", 2}, {"2C̄3", 2}, {"3I×C2", 3}, {"3I×C̄2", 3}},
        {
            {"Λ1", {1, 1, 1, 1, 1, 1}, false},
            {"Λ2", {1, 1, 1, 1, -1, -1}, false},
            {"Λ3", {2, 2, -1, -1, 0, 0}, false},
            {"Λ4", {1, -1, -1, 1, GaussInt(0, 1), GaussInt(0, -1)}, true},
            {"Λ5", {1, -1, -1, 1, GaussInt(0, -1), GaussInt(0, 1)}, true},
            {"Λ6", {2, -2, 1, -1, 0, 0}, true},
        });
    return table;
}

RepVector spinor_rep() { return {{2.0, -2.0, 1.0, -1.0, 0.0, 0.0}}; }

RepVector product(const RepVector& a, const RepVector& b) {
    if (a.characters.size() != b.characters.size()) {
        throw PreconditionError("product: representations have different class structures");
    }
    RepVector r;
    r.characters.reserve(a.characters.size());
    for (std::size_t i = 0; i < a.characters.size(); ++i) r.characters.push_back(a.characters[i] * b.characters[i]);
    return r;
}

RepVector sum(const RepVector& a, const RepVector& b) {
    if (a.characters.size() != b.characters.size()) {
        throw PreconditionError("sum: representations have different class structures");
    }
    RepVector r;
    for (std::size_t i = 0; i < a.characters.size(); ++i) r.characters.push_back(a.characters[i] + b.characters[i]);
    return r;
}

std::vector<Multiplicity> decompose(const RepVector& rep, const CharacterTable& table, double tol) {
    if (rep.characters.size() != table.classes().size()) {
        throw PreconditionError("decompose: class structure mismatch");
    }
    const double g = table.order();
    std::vector<Multiplicity> out;
    for (const auto& ir : table.irreps()) {
        std::complex<double> s = 0.0;
        for (std::size_t c = 0; c < table.classes().size(); ++c) {
            s += static_cast<double>(table.classes()[c].size) * rep.characters[c] *
                 std::conj(ir.characters[c].value());
        }
        s /= g;
        const double nearest = std::round(s.real());
        if (std::abs(s.imag()) > tol || std::abs(s.real() - nearest) > tol || nearest < -0.5) {
            std::ostringstream msg;
            msg << "not a representation: multiplicity of " << ir.name << " is (" << s.real() << ", "
                << s.imag() << ")";
            throw NotARepresentation(msg.str());
        }
        if (nearest > 0.5) out.push_back({ir.name, static_cast<int>(nearest)});
    }
    return out;
}

RepVector recompose(const std::vector<Multiplicity>& parts, const CharacterTable& table) {
    RepVector r{std::vector<std::complex<double>>(table.classes().size(), 0.0)};
    for (const auto& p : parts) {
        const auto& ir = table.irrep(p.irrep);
        for (std::size_t c = 0; c < r.characters.size(); ++c)
            r.characters[c] += static_cast<double>(p.count) * ir.characters[c].value();
    }
    return r;
}

std::string format_decomposition(const std::vector<Multiplicity>& parts) {
    std::ostringstream os;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) os << " ⊕ ";
        if (parts[i].count != 1) os << parts[i].count;
        os << parts[i].irrep;
    }
    if (parts.empty()) os << "0";
    return os.str();
}

namespace {

std::string normalize_factor(std::string f) {
    // Accept ASCII spellings: L1..L6 and D12 / D1/2.
    if (f == "D12" || f == "D1/2" || f == "D_1/2" || f == "D_{1/2}") return "D1/2";
    if (f.size() == 2 && (f[0] == 'L' || f[0] == 'l') && f[1] >= '1' && f[1] <= '6') {
        return std::string("Λ") + f[1];
    }
    return f;
}

}  // namespace

RepVector parse_rep_expression(std::string_view expr, const CharacterTable& table) {
    std::vector<std::string> factors;
    std::string cur;
    const std::string s(expr);
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] == '*' || s[i] == 'x' || s[i] == ' ') {
            if (!cur.empty()) factors.push_back(cur);
            cur.clear();
            ++i;
        } else if (s.compare(i, 3, "⊗") == 0 || s.compare(i, 2, "×") == 0) {
            if (!cur.empty()) factors.push_back(cur);
            cur.clear();
            i += s.compare(i, 3, "⊗") == 0 ? 3 : 2;
        } else {
            cur.push_back(s[i]);
            ++i;
        }
    }
    if (!cur.empty()) factors.push_back(cur);
    if (factors.empty()) throw PreconditionError("empty representation expression");

    RepVector acc;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const std::string name = normalize_factor(factors[i]);
        const RepVector r = name == "D1/2" ? spinor_rep() : table.rep(name);
        acc = i == 0 ? r : product(acc, r);
    }
    return acc;
}

namespace {

Eigen::Matrix2cd pauli_dot(const Eigen::Vector3d& n) {
    const std::complex<double> I(0.0, 1.0);
    Eigen::Matrix2cd m;
    m << n.z(), n.x() - I * n.y(), n.x() + I * n.y(), -n.z();
    return m;
}

bool same_element(const DoubleGroupElement& a, const DoubleGroupElement& b) {
    return (a.spin - b.spin).cwiseAbs().maxCoeff() < 1e-12 &&
           (a.orbital - b.orbital).cwiseAbs().maxCoeff() < 1e-12;
}

std::vector<DoubleGroupElement> build_elements() {
    const std::complex<double> I(0.0, 1.0);
    const Eigen::Vector3d axis = Eigen::Vector3d(1.0, 1.0, 1.0).normalized();
    std::vector<DoubleGroupElement> els;

    auto rotation = [&](double angle) {
        DoubleGroupElement e;
        e.orbital = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
        e.spin = std::cos(angle / 2.0) * Eigen::Matrix2cd::Identity() - I * std::sin(angle / 2.0) * pauli_dot(axis);
        return e;
    };
    auto negate = [](DoubleGroupElement e) {
        e.spin = -e.spin;
        return e;
    };

    const DoubleGroupElement identity = rotation(0.0);
    els.push_back(identity);
    els.push_back(negate(identity));
    const DoubleGroupElement c3 = rotation(2.0 * M_PI / 3.0);
    const DoubleGroupElement c3inv = rotation(-2.0 * M_PI / 3.0);
    els.push_back(c3);
    els.push_back(c3inv);
    els.push_back(negate(c3));
    els.push_back(negate(c3inv));

    const std::array<Eigen::Vector3d, 3> normals{Eigen::Vector3d(1, -1, 0).normalized(),
                                                 Eigen::Vector3d(0, 1, -1).normalized(),
                                                 Eigen::Vector3d(-1, 0, 1).normalized()};
    std::vector<DoubleGroupElement> mirrors;
    for (const auto& m : normals) {
        DoubleGroupElement e;
        e.orbital = Eigen::Matrix3d::Identity() - 2.0 * m * m.transpose();
        e.spin = -I * pauli_dot(m);
        els.push_back(e);
        mirrors.push_back(e);
    }
    for (const auto& m : mirrors) els.push_back(negate(m));

    // Conjugacy classes by closure.
    const std::size_t n = els.size();
    std::vector<int> cls(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (cls[i] >= 0) continue;
        cls[i] = next;
        for (const auto& g : els) {
            DoubleGroupElement conj;
            conj.orbital = g.orbital * els[i].orbital * g.orbital.transpose();
            conj.spin = g.spin * els[i].spin * g.spin.adjoint();
            for (std::size_t j = 0; j < n; ++j)
                if (same_element(conj, els[j])) cls[j] = next;
        }
        ++next;
    }

    // Label classes in table order.
    auto table_index = [&](const DoubleGroupElement& e) -> int {
        const double tr = e.spin.trace().real();
        const bool improper = e.orbital.determinant() < 0.0;
        if (!improper) {
            if (std::abs(tr - 2.0) < 1e-12) return 0;
            if (std::abs(tr + 2.0) < 1e-12) return 1;
            return tr > 0.0 ? 2 : 3;
        }
        return -1;
    };
    const int reference_mirror_class = cls[6];  // -i m1.sigma
    for (std::size_t i = 0; i < n; ++i) {
        int t = table_index(els[i]);
        if (t < 0) t = cls[i] == reference_mirror_class ? 4 : 5;
        els[i].class_index = t;
    }

    // Cross-check class sizes against the table.
    std::vector<int> counts(6, 0);
    for (const auto& e : els) ++counts[static_cast<std::size_t>(e.class_index)];
    const auto& classes = builtin_table().classes();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (counts[c] != classes[c].size) throw Error("double group construction: class size mismatch");
    }
    return els;
}

}  // namespace

const std::vector<DoubleGroupElement>& c3v_double_group_elements() {
    static const std::vector<DoubleGroupElement> els = build_elements();
    return els;
}

}  // namespace lpoint
