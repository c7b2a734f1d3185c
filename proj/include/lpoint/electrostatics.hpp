#pragma once

// Finite-difference Poisson solver on z-y cross-sections of fin MOS
// structures. Grid values live at cell centres; z is row (0 = bottom),
// y is column.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lpoint {

enum class Region : std::uint8_t { si_fin, oxide, gate, substrate, vacuum };

std::string to_string(Region r);

enum class FinVariant { planarized, protruding };

FinVariant parse_fin_variant(std::string_view s);
std::string to_string(FinVariant v);

struct FinDimensions {
    double fin_height_nm = 12.0;
    double sti_nm = 4.0;          // isolation oxide at the fin foot
    double gate_oxide_nm = 1.0;
    double gate_nm = 2.0;         // gate electrode thickness
    double substrate_nm = 20.0;   // Si body below the fin, back contact on its bottom row
    double margin_nm = 10.0;      // lateral oxide/vacuum margin on each side
    double top_nm = 4.0;          // vacuum above the gate
};

struct Geometry {
    FinVariant variant = FinVariant::planarized;
    int nz = 0;
    int ny = 0;
    double h_nm = 1.0;
    std::vector<Region> regions;  // index z * ny + y

    int fin_w = 0;       // cells
    int fin_y0 = 0;      // first fin column
    int fin_z0 = 0;      // first fin row (top of substrate)
    int fin_z1 = 0;      // one past the last fin row
    int channel_z0 = 0;  // first row of the gated channel (above the isolation oxide)

    Region at(int z, int y) const { return regions[static_cast<std::size_t>(z * ny + y)]; }
    std::size_t count(Region r) const;
};

// Planarized: oxide fills to fin top + gate oxide, gate of width W on top.
// Protruding: isolation oxide at the foot, conformal gate oxide, gate over
// the top and both side faces down to the isolation oxide.
Geometry build_geometry(FinVariant variant, double w_nm, double h_nm, const FinDimensions& dims = {});

enum class InterfaceMode { dielectric_continuity, fixed_potential };

InterfaceMode parse_interface_mode(std::string_view s);
std::string to_string(InterfaceMode m);

struct BoundarySpec {
    double gate_voltage = 1.0;
    double substrate_voltage = 0.0;
    InterfaceMode interface_mode = InterfaceMode::dielectric_continuity;
    double interface_potential = 0.0;
    double eps_si = 11.7;
    double eps_ox = 3.9;

    void validate() const;
};

// Generic cell problem: div(eps grad phi) = -rho / eps0 with Dirichlet cells
// and zero-flux outer edges.
struct PoissonProblem {
    int nz = 0;
    int ny = 0;
    double h_nm = 1.0;
    std::vector<double> eps;     // relative permittivity per cell
    std::vector<char> fixed;     // Dirichlet mask
    std::vector<double> value;   // Dirichlet values (V)
    std::vector<double> rho;     // e / nm^3, may be empty

    void validate() const;
};

enum class SweepOrder { red_black, black_red };

struct SolveOptions {
    double tol = 1e-8;  // relative residual
    int max_iter = 200000;
    SweepOrder order = SweepOrder::red_black;
    double omega = 0.0;  // 0 -> 2 / (1 + sin(pi / N))
};

struct FieldGrid {
    int nz = 0;
    int ny = 0;
    double h_nm = 1.0;
    std::vector<double> potential;
    double residual = 0.0;
    int iterations = 0;

    double at(int z, int y) const { return potential[static_cast<std::size_t>(z * ny + y)]; }
    double min() const;
    double max() const;
};

// e / eps0 in V nm.
double elementary_charge_over_eps0();

PoissonProblem make_problem(const Geometry& geom, const BoundarySpec& bc, const std::vector<double>& charge = {});

// Throws ConvergenceError(last relative residual) when max_iter is reached.
FieldGrid solve_problem(const PoissonProblem& p, const SolveOptions& opts = {});
FieldGrid solve_poisson(const Geometry& geom, const BoundarySpec& bc, const std::vector<double>& charge = {},
                        const SolveOptions& opts = {});

// Laplace on the unit square with phi = sin(pi y) on the top edge and 0 on
// the others, n intervals per side; returns the max nodal error against the
// separable solution.
double sinusoidal_benchmark_error(int n, double tol = 1e-13);

struct ContourGrid {
    int nz = 0;
    int ny = 0;
    int n_levels = 0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<int> band;  // 0 .. n_levels-1
};

// Uniform quantization of [min, max]; a constant field gives a single band 0.
ContourGrid contour_quantize(const FieldGrid& field, int n_levels = 10);

struct GradientMetric {
    double max_abs = 0.0;   // V / nm
    double mean_abs = 0.0;  // V / nm
    std::size_t cells = 0;
};

// Central-difference |dphi/dz| over fin cells under the gate, rows
// [channel_z0, fin_z1).
GradientMetric fin_gradient_metric(const FieldGrid& field, const Geometry& geom);

void write_potential_csv(std::ostream& os, const FieldGrid& field);
void write_contour_csv(std::ostream& os, const ContourGrid& contour, double h_nm);
// Plain (ASCII) PGM, top row = largest z.
void write_contour_pgm(std::ostream& os, const ContourGrid& contour);

}  // namespace lpoint
