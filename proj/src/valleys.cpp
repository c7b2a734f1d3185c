#include "lpoint/valleys.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lpoint/error.hpp"

namespace lpoint {

ValleyFamily parse_valley_family(std::string_view s) {
    if (s == "X0" || s == "x0" || s == "X" || s == "Delta") return ValleyFamily::X0;
    if (s == "L" || s == "l") return ValleyFamily::L;
    throw PreconditionError("unknown valley family: " + std::string(s));
}

std::string to_string(ValleyFamily f) { return f == ValleyFamily::X0 ? "X0" : "L"; }

void Valley::validate() const {
    if (!(ml > 0.0) || !(mt > 0.0)) throw PreconditionError("valley masses must be positive");
    if (std::abs(axis.norm() - 1.0) > 1e-12) throw PreconditionError("valley axis must be a unit vector");
}

ValleySet make_valley_set(ValleyFamily family, double ml, double mt, const Vec3& growth_axis) {
    if (growth_axis.norm() == 0.0) throw PreconditionError("zero-length growth axis");
    ValleySet set;
    set.growth_axis = growth_axis.normalized();
    std::vector<Vec3> axes;
    if (family == ValleyFamily::X0) {
        for (int i = 0; i < 3; ++i) {
            axes.push_back(Vec3::Unit(i));
            axes.push_back(-Vec3::Unit(i));
        }
    } else {
        for (const Vec3& v : {Vec3(1, 1, 1), Vec3(-1, 1, 1), Vec3(1, -1, 1), Vec3(1, 1, -1)}) {
            axes.push_back(v.normalized());
        }
    }
    for (const auto& a : axes) {
        Valley v{a, ml, mt, family};
        v.validate();
        set.valleys.push_back(v);
    }
    return set;
}

Vec3 parse_direction(std::string_view s) {
    std::string str(s);
    Vec3 v;
    if (str.find(',') != std::string::npos) {
        std::replace(str.begin(), str.end(), ',', ' ');
        std::istringstream is(str);
        if (!(is >> v.x() >> v.y() >> v.z())) throw PreconditionError("bad direction: " + std::string(s));
    } else if (str.size() == 3 && std::all_of(str.begin(), str.end(), ::isdigit)) {
        v = Vec3(str[0] - '0', str[1] - '0', str[2] - '0');
    } else {
        throw PreconditionError("bad direction: " + std::string(s));
    }
    if (v.norm() == 0.0) throw PreconditionError("zero-length direction");
    return v.normalized();
}

double confinement_mass(const Valley& valley, const Vec3& growth_axis) {
    valley.validate();
    const double n = growth_axis.norm();
    if (n == 0.0) throw PreconditionError("zero-length growth axis");
    const double c = valley.axis.dot(growth_axis) / n;
    const double c2 = std::min(1.0, c * c);
    return 1.0 / (c2 / valley.ml + (1.0 - c2) / valley.mt);
}

double box_energy_constant() {
    constexpr double h = 6.62607015e-34;       // J s
    constexpr double m0 = 9.1093837015e-31;    // kg
    constexpr double e = 1.602176634e-19;      // J per eV
    return h * h / (8.0 * m0) / e * 1e18;      // eV nm^2
}

double SplittingReport::splitting_ev() const {
    return groups.size() < 2 ? 0.0 : groups[1].energy_ev - groups[0].energy_ev;
}

SplittingReport split_valleys(const ValleySet& set, double well_width_nm, double mass_tol) {
    if (!(well_width_nm > 0.0)) throw PreconditionError("well width must be positive");
    SplittingReport rep;
    const double c = box_energy_constant() / (well_width_nm * well_width_nm);
    for (std::size_t i = 0; i < set.valleys.size(); ++i) {
        const double m = confinement_mass(set.valleys[i], set.growth_axis);
        auto it = std::find_if(rep.groups.begin(), rep.groups.end(),
                               [&](const ValleyGroup& g) { return std::abs(g.mass - m) <= mass_tol; });
        if (it == rep.groups.end()) {
            rep.groups.push_back({m, 1, c / m, {static_cast<int>(i)}});
        } else {
            ++it->degeneracy;
            it->members.push_back(static_cast<int>(i));
        }
    }
    std::stable_sort(rep.groups.begin(), rep.groups.end(),
                     [](const ValleyGroup& a, const ValleyGroup& b) { return a.energy_ev < b.energy_ev; });
    rep.ground_degeneracy = rep.groups.empty() ? 0 : rep.groups.front().degeneracy;
    return rep;
}

}  // namespace lpoint
