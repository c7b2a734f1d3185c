#pragma once

// Ellipsoidal conduction valleys and their ordering under one-dimensional
// confinement along a growth axis.

#include <string>
#include <string_view>
#include <vector>

#include "lpoint/lattice.hpp"

namespace lpoint {

enum class ValleyFamily { X0, L };

ValleyFamily parse_valley_family(std::string_view s);
std::string to_string(ValleyFamily f);

struct Valley {
    Vec3 axis = Vec3::UnitZ();  // unit, longitudinal direction
    double ml = 0.916;          // m0
    double mt = 0.190;          // m0
    ValleyFamily family = ValleyFamily::X0;

    void validate() const;
};

struct ValleySet {
    std::vector<Valley> valleys;
    Vec3 growth_axis = Vec3::UnitZ();
};

// Six +-x, +-y, +-z valleys, or four L valleys along (+-1,+-1,+-1)/sqrt(3)
// (eight zone-edge halves identified in pairs).
ValleySet make_valley_set(ValleyFamily family, double ml, double mt, const Vec3& growth_axis);

// Parses "001", "111", "110" or "x,y,z" into a unit vector.
Vec3 parse_direction(std::string_view s);

// 1/m_z = cos^2(theta)/ml + sin^2(theta)/mt.
double confinement_mass(const Valley& valley, const Vec3& growth_axis);

// h^2 / (8 m0) in eV nm^2.
double box_energy_constant();

struct ValleyGroup {
    double mass = 0.0;        // confinement mass m_z (m0)
    int degeneracy = 0;
    double energy_ev = 0.0;   // h^2 / (8 m_z W^2)
    std::vector<int> members; // indices into ValleySet::valleys
};

struct SplittingReport {
    std::vector<ValleyGroup> groups;  // ascending energy
    int ground_degeneracy = 0;

    double splitting_ev() const;  // first excited minus ground; 0 for one group
};

SplittingReport split_valleys(const ValleySet& set, double well_width_nm, double mass_tol = 1e-9);

}  // namespace lpoint
