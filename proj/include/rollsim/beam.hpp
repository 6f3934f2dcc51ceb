#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace rollsim::beam {

enum class Boundary { clamped_clamped, simply_supported, cantilever };

Boundary boundary_from_string(const std::string& name);

// Work roll modelled as a prismatic Euler-Bernoulli beam of circular
// cross-section. Strict SI units.
struct BeamSpec {
    double length_m = 0.20;
    double diameter_m = 0.15;
    double elastic_modulus_pa = 211e9;
    int element_count = 100;
    Boundary boundary = Boundary::clamped_clamped;

    void validate() const;
};

// Uniform line load over [span_start, span_end]; zero elsewhere.
struct LoadCase {
    double line_load_n_per_m = 0.0;
    double span_start_m = 0.0;
    double span_end_m = 0.0;

    void validate(double beam_length_m) const;
};

struct DeflectionProfile {
    std::vector<double> node_positions_m;
    std::vector<double> deflections_m;
    std::vector<double> slopes_rad;
};

// I = pi d^4 / 64 for a solid circular section.
double moment_of_inertia(double diameter_m);

// Hermite-cubic beam element stiffness, DOF order (w1, th1, w2, th2).
std::array<std::array<double, 4>, 4> element_stiffness(double ei_nm2, double element_length_m);

// Consistent nodal load of a uniform line load. The mesh aligns element edges
// with the load span, so coverage is all-or-nothing; anything fractional is a
// mesh construction bug.
std::array<double, 4> equivalent_nodal_load(double line_load_n_per_m, double element_length_m,
                                            double covered_fraction);

// Node positions with nodes placed exactly at the load span edges;
// element_count elements distributed over the three regions by length.
std::vector<double> build_mesh(const BeamSpec& spec, const LoadCase& load);

DeflectionProfile solve(const BeamSpec& spec, const LoadCase& load);

// Nodal maximum of |W|; ties break toward smaller x. Returns (x, W).
std::pair<double, double> max_deflection(const DeflectionProfile& profile);

// Sum of reaction forces at constrained translational DOFs (Newton), computed
// from the assembled system. Equals -total applied load in equilibrium.
double reaction_force_sum(const BeamSpec& spec, const LoadCase& load,
                          const DeflectionProfile& profile);

// CSV export: summary comment line, then x_m,deflection_m,slope_rad rows.
std::string to_csv(const DeflectionProfile& profile);

}  // namespace rollsim::beam
