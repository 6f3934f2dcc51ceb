#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rollsim/analytical.hpp"
#include "rollsim/beam.hpp"
#include "rollsim/material.hpp"
#include "rollsim/slab.hpp"

namespace rollsim::cli {

// Everything a run needs, loadable from one key-value config file.
// Defaults reproduce the reference setup: 75 mm roll, 211 GPa, 4 mm strip,
// mu = 0.1, 0.01 deg marching step, 0.20 m roll body with 100 elements and a
// centered 22.5% load span.
struct Config {
    // material
    std::string dataset_path = "data/stress316l.csv";
    double gauge_length_mm = 32.0;
    double cross_section_mm2 = 24.0;
    int epochs = 900;
    int hidden_width = 10;
    double train_fraction = 0.70;
    double validation_fraction = 0.15;
    double test_fraction = 0.15;
    std::uint64_t seed = 42;
    double initial_damping = 1e-3;
    double damping_increase = 10.0;
    double damping_decrease = 0.1;

    // geometry (per pass; thicknesses come from the schedule)
    double roll_radius_mm = 75.0;
    double friction_mu = 0.1;
    double step_deg = 0.01;
    double strain_rate_per_s = 0.052;     // rate fed to the model while rolling
    std::string strain_accumulation = "cumulative";  // or "per-pass"
    double initial_thickness_mm = 4.0;
    std::vector<double> exit_thicknesses_mm{3.24, 2.8, 2.48, 2.23, 1.99, 1.74, 1.44};

    // beam
    double beam_length_m = 0.20;
    double roll_diameter_m = 0.15;
    double elastic_modulus_pa = 211e9;
    int element_count = 100;
    std::string boundary = "clamped-clamped";
    double load_span_fraction = 0.225;
    double line_load_n_per_m = 0.0;       // standalone `beam` command only

    // analytical baseline
    double plate_radius_m = 0.0;          // 0: use half the loaded span
    double plate_thickness_m = 1.0;
    double poisson = 0.3;
    std::string rigidity_form = "as-printed";

    // run metadata
    double angular_speed_rpm = 30.0;      // recorded, consumed by nothing
    std::vector<double> study_diameters_m{0.15, 0.19};

    void validate() const;

    material::TrainingConfig training_config() const;
    slab::RollPassGeometry pass_geometry(double entry_mm, double exit_mm) const;
    beam::BeamSpec beam_spec() const;
    beam::BeamSpec beam_spec_with_diameter(double diameter_m) const;
    beam::LoadCase load_case(double line_load) const;
    analytical::PlateSpec plate_spec() const;
    double effective_plate_radius_m() const;
};

struct PassReport {
    int pass_index = 0;
    double entry_thickness_mm = 0.0;
    double exit_thickness_mm = 0.0;
    double alpha_deg = 0.0;
    double neutral_deg = 0.0;
    double neutral_pressure_mpa = 0.0;
    double mean_pressure_mpa = 0.0;
    double line_load_n_per_m = 0.0;
    double max_deflection_m = 0.0;
    double max_deflection_x_m = 0.0;
    std::string profile_csv;
    std::string deflection_csv;
};

// Mean contact pressure to beam line load: w = P * sqrt(R' * draft), the
// pressure times the projected contact length. Single place to swap the
// conversion if a different contact model is wanted.
double line_load_n_per_m(double mean_pressure_mpa, double roll_radius_mm, double draft_mm);

struct TrainOutcome {
    material::FlowStressModel model;
    material::TrainingReport report;
    std::size_t train_size = 0, validation_size = 0, test_size = 0;
    double train_mse_mpa2 = 0.0;
    double validation_mse_mpa2 = 0.0;
    double test_mse_mpa2 = 0.0;
    double test_nrmse = 0.0;  // RMSE / test stress range
};

// train: load dataset, split, train, write the model file.
TrainOutcome train_command(const std::string& dataset_path, const Config& config,
                           const std::string& model_out_path);

// simulate: run the whole pass schedule, writing per-pass profile/deflection
// CSVs plus summary.csv under outdir.
std::vector<PassReport> run_schedule(const Config& config,
                                     const material::FlowStressModel& model,
                                     const std::string& outdir);

struct ComparisonRow {
    double true_strain = 0.0;
    double analytical_deflection_m = 0.0;
    double numerical_deflection_m = 0.0;
};

// compare: analytical plate baseline vs FEM maxima per pass, from a completed
// simulate run. Writes comparison.csv.
std::vector<ComparisonRow> compare_command(const Config& config, const std::string& outdir);

// radius-study: re-solve the pass-1 beam at each diameter. Writes one
// deflection CSV per diameter; empty list is a warned no-op.
std::vector<std::string> radius_study_command(const Config& config,
                                              const std::vector<double>& diameters_m,
                                              const std::string& outdir);

// Reads summary.csv back (dependency of compare/radius-study).
std::vector<PassReport> read_summary(const std::string& outdir);

}  // namespace rollsim::cli
