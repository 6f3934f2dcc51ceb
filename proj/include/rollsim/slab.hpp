#pragma once

#include <string>
#include <vector>

#include "rollsim/material.hpp"

namespace rollsim::slab {

// Geometry and conditions of a single rolling pass. Angles in radians
// internally; the step is configured in degrees because that is how the
// marching resolution is usually quoted.
struct RollPassGeometry {
    double entry_thickness_mm;      // h1
    double exit_thickness_mm;       // h2
    double roll_radius_mm = 75.0;   // R', flattened radius (defaults to rigid)
    double friction_mu = 0.1;
    double step_deg = 0.01;
    double reference_thickness_mm;  // annealed thickness the strain is measured from
    double strain_rate = 0.052;     // 1/s fed to the flow-stress model

    void validate() const;
};

enum class Side { entry, exit };

// One marched branch, stored with ascending angles regardless of the
// marching direction.
struct BranchProfile {
    std::vector<double> angles_rad;
    std::vector<double> pressures_mpa;
    Side side;
};

struct NeutralPoint {
    double angle_rad;
    double pressure_mpa;
    bool multiple_crossings;  // more than one sign change on the grid
};

struct PressureProfile {
    BranchProfile entry;
    BranchProfile exit;
    double neutral_angle_rad;
    double neutral_pressure_mpa;
    double contact_angle_rad;
    bool multiple_crossings;
};

// alpha = sqrt(draft / R')
double contact_angle(const RollPassGeometry& geom);

// h(phi) = h2 + R' phi^2 (small-angle gap)
double thickness_at(const RollPassGeometry& geom, double phi_rad);

// The common marching grid {0, d, 2d, ..., alpha}; both branches are sampled
// on it so the crossing search works node-by-node.
std::vector<double> angle_grid(const RollPassGeometry& geom);

BranchProfile march_exit(const RollPassGeometry& geom, const material::FlowStressModel& model);
BranchProfile march_entry(const RollPassGeometry& geom, const material::FlowStressModel& model);

NeutralPoint find_neutral(const BranchProfile& entry, const BranchProfile& exit);

// Runs both marches, locates the neutral point and assembles the profile.
PressureProfile solve_pass(const RollPassGeometry& geom, const material::FlowStressModel& model);

// Composite friction hill: exit branch up to the neutral point, the neutral
// point itself, then the entry branch.
struct CompositeCurve {
    std::vector<double> angles_rad;
    std::vector<double> pressures_mpa;
};
CompositeCurve composite(const PressureProfile& profile);

// Arc average of the composite pressure (trapezoid over [0, alpha] / alpha).
double mean_pressure(const PressureProfile& profile);

// CSV export: summary comment line, then phi_deg,q_mpa,branch rows.
std::string to_csv(const PressureProfile& profile);

}  // namespace rollsim::slab
