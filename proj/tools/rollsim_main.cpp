#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rollsim/beam.hpp"
#include "rollsim/cli.hpp"
#include "rollsim/errors.hpp"
#include "rollsim/io_util.hpp"
#include "rollsim/kernels.hpp"
#include "rollsim/material.hpp"

namespace {

// 0 success, 1 validation/config error, 2 solver or training error.
constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kSolver = 2;

void register_config(CLI::App& app, rollsim::cli::Config& cfg) {
    app.add_option("--material.dataset", cfg.dataset_path, "Dataset CSV (raw or converted)");
    app.add_option("--material.gauge_length_mm", cfg.gauge_length_mm);
    app.add_option("--material.cross_section_mm2", cfg.cross_section_mm2);
    app.add_option("--material.epochs", cfg.epochs);
    app.add_option("--material.hidden_width", cfg.hidden_width);
    app.add_option("--material.train_fraction", cfg.train_fraction);
    app.add_option("--material.validation_fraction", cfg.validation_fraction);
    app.add_option("--material.test_fraction", cfg.test_fraction);
    app.add_option("--material.seed", cfg.seed);
    app.add_option("--material.initial_damping", cfg.initial_damping);
    app.add_option("--material.damping_increase", cfg.damping_increase);
    app.add_option("--material.damping_decrease", cfg.damping_decrease);

    app.add_option("--geometry.roll_radius_mm", cfg.roll_radius_mm);
    app.add_option("--geometry.friction_mu", cfg.friction_mu);
    app.add_option("--geometry.step_deg", cfg.step_deg);
    app.add_option("--geometry.strain_rate_per_s", cfg.strain_rate_per_s);
    app.add_option("--geometry.strain_accumulation", cfg.strain_accumulation,
                   "cumulative | per-pass");
    app.add_option("--geometry.initial_thickness_mm", cfg.initial_thickness_mm);
    app.add_option("--geometry.exit_thicknesses_mm", cfg.exit_thicknesses_mm,
                   "Pass schedule, one exit thickness per pass");

    app.add_option("--beam.length_m", cfg.beam_length_m);
    app.add_option("--beam.diameter_m", cfg.roll_diameter_m);
    app.add_option("--beam.elastic_modulus_pa", cfg.elastic_modulus_pa);
    app.add_option("--beam.element_count", cfg.element_count);
    app.add_option("--beam.boundary", cfg.boundary,
                   "clamped-clamped | simply-supported | cantilever");
    app.add_option("--beam.load_span_fraction", cfg.load_span_fraction);
    app.add_option("--beam.line_load_n_per_m", cfg.line_load_n_per_m,
                   "Line load for the standalone beam command");

    app.add_option("--run.plate_radius_m", cfg.plate_radius_m,
                   "Analytical plate radius (0 = half the loaded span)");
    app.add_option("--run.plate_thickness_m", cfg.plate_thickness_m);
    app.add_option("--run.poisson", cfg.poisson);
    app.add_option("--run.rigidity_form", cfg.rigidity_form, "as-printed | standard");
    app.add_option("--run.angular_speed_rpm", cfg.angular_speed_rpm);
    app.add_option("--run.study_diameters_m", cfg.study_diameters_m);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rollsim: strip-rolling pressure and work-roll deflection simulator"};
    app.set_config("--config", "", "Config file with [material]/[geometry]/[beam]/[run] sections");
    app.require_subcommand(1);

    rollsim::cli::Config cfg;
    std::string model_path;
    std::string outdir = "out";
    register_config(app, cfg);
    app.add_option("--model", model_path, "Model file to write (train) or read (simulate)");
    app.add_option("--outdir", outdir, "Output directory for CSV reports");
    app.add_option("--seed", cfg.seed, "Override the training seed");

    auto* cmd_train = app.add_subcommand("train", "Train the flow-stress model from a dataset");
    std::string data_path;
    cmd_train->fallthrough();
    cmd_train->add_option("--data", data_path, "Dataset CSV (defaults to material.dataset)");

    auto* cmd_simulate =
        app.add_subcommand("simulate", "Run the pass schedule: pressure profiles + deflections");
    cmd_simulate->fallthrough();
    auto* cmd_beam = app.add_subcommand("beam", "Solve one beam load case from the config");
    cmd_beam->fallthrough();
    auto* cmd_compare =
        app.add_subcommand("compare", "Analytical vs numerical deflection per pass");
    cmd_compare->fallthrough();
    auto* cmd_radius =
        app.add_subcommand("radius-study", "Re-solve the pass-1 beam for several diameters");
    cmd_radius->fallthrough();
    std::vector<double> diameters;
    cmd_radius->add_option("--diameters", diameters,
                           "Roll diameters in metres (defaults to run.study_diameters_m)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (cmd_train->parsed()) {
            if (data_path.empty()) data_path = cfg.dataset_path;
            if (model_path.empty()) model_path = (std::filesystem::path(outdir) / "model.fsm").string();
            const auto out = rollsim::cli::train_command(data_path, cfg, model_path);
            std::printf("kernels: %s\n", rollsim::kernels::active().name);
            std::printf("split: %zu train / %zu validation / %zu test\n", out.train_size,
                        out.validation_size, out.test_size);
            std::printf("epochs run: %d (best validation at epoch %d)\n", out.report.epochs_run,
                        out.report.best_epoch);
            std::printf("train MSE: %.6g MPa^2\n", out.train_mse_mpa2);
            std::printf("validation MSE: %.6g MPa^2\n", out.validation_mse_mpa2);
            std::printf("test MSE: %.6g MPa^2 (NRMSE %.3f%% of test range)\n", out.test_mse_mpa2,
                        100.0 * out.test_nrmse);
            std::printf("model written to %s\n", model_path.c_str());
        } else if (cmd_simulate->parsed()) {
            if (model_path.empty())
                throw rollsim::ValidationError("simulate needs --model pointing at a trained model");
            const auto model = rollsim::material::load_model(model_path);
            const auto reports = rollsim::cli::run_schedule(cfg, model, outdir);
            std::printf("pass alpha_deg neutral_deg neutral_MPa mean_MPa line_N_per_m max_defl_m\n");
            for (const auto& r : reports)
                std::printf("%4d %9.4f %11.4f %11.2f %8.2f %12.4e %10.4e\n", r.pass_index,
                            r.alpha_deg, r.neutral_deg, r.neutral_pressure_mpa,
                            r.mean_pressure_mpa, r.line_load_n_per_m, r.max_deflection_m);
            std::printf("summary written to %s/summary.csv\n", outdir.c_str());
        } else if (cmd_beam->parsed()) {
            const auto spec = cfg.beam_spec();
            const auto load = cfg.load_case(cfg.line_load_n_per_m);
            const auto profile = rollsim::beam::solve(spec, load);
            const auto [x, w] = rollsim::beam::max_deflection(profile);
            rollsim::io::atomic_write(
                (std::filesystem::path(outdir) / "beam_deflection.csv").string(),
                rollsim::beam::to_csv(profile));
            std::printf("max |deflection| %.6e m at x = %.6g m\n", w, x);
            std::printf("deflection written to %s/beam_deflection.csv\n", outdir.c_str());
        } else if (cmd_compare->parsed()) {
            const auto rows = rollsim::cli::compare_command(cfg, outdir);
            std::printf("true_strain analytical_m numerical_m\n");
            for (const auto& r : rows)
                std::printf("%11.4f %12.5e %11.5e\n", r.true_strain, r.analytical_deflection_m,
                            r.numerical_deflection_m);
            std::printf("comparison written to %s/comparison.csv\n", outdir.c_str());
        } else if (cmd_radius->parsed()) {
            if (diameters.empty()) diameters = cfg.study_diameters_m;
            const auto files = rollsim::cli::radius_study_command(cfg, diameters, outdir);
            for (const auto& f : files) std::printf("wrote %s/%s\n", outdir.c_str(), f.c_str());
        }
    } catch (const rollsim::SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolver;
    } catch (const rollsim::TrainingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolver;
    } catch (const rollsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kSolver;
    }
    return kOk;
}
