#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace rollsim::material {

// One row of a raw tensile-test file: machine output before conversion.
struct RawTensileRecord {
    double strain_rate;   // 1/s
    double extension_mm;  // crosshead extension
    double force_n;       // measured force
};

// One converted observation: the unit of the training dataset.
struct StressStrainSample {
    double true_strain;      // dimensionless
    double strain_rate;      // 1/s
    double true_stress_mpa;  // MPa
};

struct Range {
    double min = 0.0;
    double max = 1.0;
    double width() const { return max - min; }
    double normalize(double v) const { return (v - min) / width(); }
    double denormalize(double u) const { return min + u * width(); }
};

struct Prediction {
    double stress_mpa;
    bool extrapolated;  // input outside twice the training range
};

// A trained 2-input / sigmoid-hidden / linear-output regression network plus
// the min-max normalization recorded at training time. Immutable in use;
// prediction is a pure function of the stored parameters.
struct FlowStressModel {
    int hidden_width = 0;
    std::vector<double> input_weights;  // hidden_width x 2, row-major
    std::vector<double> input_biases;   // hidden_width
    std::vector<double> output_weights; // hidden_width
    double output_bias = 0.0;
    std::array<Range, 2> input_norm;    // [true_strain, strain_rate]
    Range output_norm;                  // true_stress_mpa
    std::uint64_t training_seed = 0;

    void validate() const;  // throws ValidationError on broken invariants

    // A model that predicts the same stress everywhere. Test and baseline aid.
    static FlowStressModel constant(double stress_mpa);
};

struct TrainingConfig {
    int epochs = 900;
    std::array<double, 3> split_fractions{0.70, 0.15, 0.15};  // train, val, test
    std::uint64_t seed = 42;
    int hidden_width = 10;
    double initial_damping = 1e-3;
    double damping_increase_factor = 10.0;
    double damping_decrease_factor = 0.1;

    void validate() const;
};

// What the trainer saw; MSE values are in normalized output units.
struct TrainingReport {
    int epochs_run = 0;
    int best_epoch = 0;
    double initial_validation_mse = 0.0;
    double best_validation_mse = 0.0;
    double final_train_mse = 0.0;
};

// extension/force -> true strain/stress given specimen geometry.
StressStrainSample convert_raw(const RawTensileRecord& record,
                               double gauge_length_mm, double cross_section_mm2);

struct DatasetSplit {
    std::vector<StressStrainSample> train;
    std::vector<StressStrainSample> validation;
    std::vector<StressStrainSample> test;
};

// Deterministic seeded shuffle, then floor(n*fraction) samples for validation
// and test with the remainder assigned to the training set.
DatasetSplit split_dataset(const std::vector<StressStrainSample>& samples,
                           const TrainingConfig& config);

// Full-batch Levenberg-Marquardt on the MSE over normalized inputs/outputs.
// Returns the parameters with the lowest validation MSE seen. Bit-reproducible
// for a fixed seed and kernel backend.
FlowStressModel train(const std::vector<StressStrainSample>& train_set,
                      const std::vector<StressStrainSample>& validation_set,
                      const TrainingConfig& config,
                      TrainingReport* report = nullptr);

Prediction predict(const FlowStressModel& model, double true_strain, double strain_rate);

// k = sigma / sqrt(3): plane-strain shear yield stress.
double shear_yield(double true_stress_mpa);

// 2k at the cumulative strain ln(reference/local), strain measured from the
// annealed reference thickness.
double flow_stress_at_thickness(const FlowStressModel& model, double reference_thickness_mm,
                                double local_thickness_mm, double strain_rate);

// Dataset file: UTF-8 CSV with header, raw or converted variant, detected by
// header. Raw rows are converted with the supplied specimen geometry.
std::vector<StressStrainSample> load_dataset(const std::string& path,
                                             double gauge_length_mm = 32.0,
                                             double cross_section_mm2 = 24.0);

// Versioned plain-text model format (magic line "ROLLSIM-FSM v1").
void save_model(const FlowStressModel& model, const std::string& path);
FlowStressModel load_model(const std::string& path);
std::string serialize_model(const FlowStressModel& model);

}  // namespace rollsim::material
