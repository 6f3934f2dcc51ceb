#include "rollsim/material.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rollsim/errors.hpp"
#include "rollsim/kernels.hpp"
#include "rollsim/linalg.hpp"

namespace rollsim::material {
namespace {

constexpr double kSqrt3 = 1.7320508075688772;

void require_finite_nonneg(double v, const char* field) {
    if (!std::isfinite(v)) throw ValidationError(std::string("non-finite value for ") + field);
    if (v < 0.0) throw ValidationError(std::string("negative value for ") + field);
}

double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

// Uniform double in [0,1) from the raw 64-bit stream; avoids the
// implementation-defined std::uniform_real_distribution so that seeds
// reproduce bit-identically everywhere.
double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Range feature_range(const std::vector<double>& values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    Range r{*lo, *hi};
    if (!(r.max > r.min)) {
        // Degenerate feature (e.g. single strain rate): widen so the stored
        // normalization keeps its max > min invariant.
        r.min -= 0.5;
        r.max += 0.5;
    }
    return r;
}

// Parameter vector layout: [input_weights (w x 2, row-major), input_biases,
// output_weights, output_bias].
struct ParamView {
    int width;
    const double* w() const { return theta; }
    const double* b() const { return theta + 2 * width; }
    const double* v() const { return theta + 3 * width; }
    double c() const { return theta[4 * width]; }
    const double* theta;
};

// Normalized copy of a dataset, features by column.
struct NormalizedSet {
    std::vector<double> x0, x1, y;
    std::size_t size() const { return y.size(); }
};

NormalizedSet normalize(const std::vector<StressStrainSample>& samples,
                        const std::array<Range, 2>& in, const Range& out) {
    NormalizedSet s;
    s.x0.reserve(samples.size());
    s.x1.reserve(samples.size());
    s.y.reserve(samples.size());
    for (const auto& smp : samples) {
        s.x0.push_back(in[0].normalize(smp.true_strain));
        s.x1.push_back(in[1].normalize(smp.strain_rate));
        s.y.push_back(out.normalize(smp.true_stress_mpa));
    }
    return s;
}

double forward_one(const ParamView& p, double x0, double x1) {
    double acc = p.c();
    for (int j = 0; j < p.width; ++j) {
        const double a = p.w()[2 * j] * x0 + p.w()[2 * j + 1] * x1 + p.b()[j];
        acc += p.v()[j] * sigmoid(a);
    }
    return acc;
}

// Sum of squared residuals over a normalized set.
double sse(const ParamView& p, const NormalizedSet& s, std::vector<double>& scratch) {
    scratch.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        scratch[i] = forward_one(p, s.x0[i], s.x1[i]);
    return kernels::active().sum_sq_diff(scratch.data(), s.y.data(), s.size());
}

// Accumulates J^T J (upper triangle) and J^T r over the training set and
// returns the SSE at theta. The Jacobian is streamed row by row; only the
// P x P normal equations are stored.
double normal_equations(const ParamView& p, const NormalizedSet& s,
                        linalg::Matrix& jtj, std::vector<double>& jtr) {
    const auto& kr = kernels::active();
    const int width = p.width;
    const std::size_t np = static_cast<std::size_t>(4 * width + 1);
    jtj.set_zero();
    std::fill(jtr.begin(), jtr.end(), 0.0);
    std::vector<double> row(np);
    std::vector<double> z(width);
    double acc_sse = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double x0 = s.x0[i], x1 = s.x1[i];
        double pred = p.c();
        for (int j = 0; j < width; ++j) {
            z[j] = sigmoid(p.w()[2 * j] * x0 + p.w()[2 * j + 1] * x1 + p.b()[j]);
            pred += p.v()[j] * z[j];
        }
        const double r = pred - s.y[i];
        acc_sse += r * r;
        for (int j = 0; j < width; ++j) {
            const double dz = p.v()[j] * z[j] * (1.0 - z[j]);
            row[2 * j] = dz * x0;
            row[2 * j + 1] = dz * x1;
            row[2 * width + j] = dz;
            row[3 * width + j] = z[j];
        }
        row[4 * width] = 1.0;
        kr.rank1_upper(jtj.data(), row.data(), np, np);
        kr.axpy(r, row.data(), jtr.data(), np);
    }
    return acc_sse;
}

FlowStressModel make_model(const std::vector<double>& theta, int width,
                           const std::array<Range, 2>& in, const Range& out,
                           std::uint64_t seed) {
    FlowStressModel m;
    m.hidden_width = width;
    m.input_weights.assign(theta.begin(), theta.begin() + 2 * width);
    m.input_biases.assign(theta.begin() + 2 * width, theta.begin() + 3 * width);
    m.output_weights.assign(theta.begin() + 3 * width, theta.begin() + 4 * width);
    m.output_bias = theta[4 * width];
    m.input_norm = in;
    m.output_norm = out;
    m.training_seed = seed;
    return m;
}

}  // namespace

void FlowStressModel::validate() const {
    if (hidden_width < 1) throw ValidationError("hidden_width must be >= 1");
    const auto sz = static_cast<std::size_t>(hidden_width);
    if (input_weights.size() != 2 * sz || input_biases.size() != sz ||
        output_weights.size() != sz)
        throw ValidationError("model parameter arrays do not match hidden_width");
    for (const Range& r : {input_norm[0], input_norm[1], output_norm})
        if (!(r.max > r.min))
            throw ValidationError("normalization range must have max > min");
}

FlowStressModel FlowStressModel::constant(double stress_mpa) {
    FlowStressModel m;
    m.hidden_width = 1;
    m.input_weights = {0.0, 0.0};
    m.input_biases = {0.0};
    m.output_weights = {0.0};
    m.output_bias = 0.5;
    m.input_norm = {Range{0.0, 1.0}, Range{1e-4, 1.0}};
    m.output_norm = Range{stress_mpa - 1.0, stress_mpa + 1.0};
    return m;
}

void TrainingConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (hidden_width < 1) throw ConfigError("hidden_width must be >= 1");
    const double sum = split_fractions[0] + split_fractions[1] + split_fractions[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("split fractions must sum to 1");
    for (double f : split_fractions)
        if (f < 0.0) throw ConfigError("split fractions must be non-negative");
    if (!(damping_increase_factor > 1.0))
        throw ConfigError("damping_increase_factor must be > 1");
    if (!(damping_decrease_factor > 0.0 && damping_decrease_factor < 1.0))
        throw ConfigError("damping_decrease_factor must be in (0,1)");
    if (!(initial_damping > 0.0)) throw ConfigError("initial_damping must be > 0");
}

StressStrainSample convert_raw(const RawTensileRecord& record,
                               double gauge_length_mm, double cross_section_mm2) {
    require_finite_nonneg(record.extension_mm, "extension_mm");
    require_finite_nonneg(record.force_n, "force_n");
    if (!std::isfinite(record.strain_rate) || record.strain_rate <= 0.0)
        throw ValidationError("strain_rate must be positive and finite");
    if (!std::isfinite(gauge_length_mm) || gauge_length_mm <= 0.0)
        throw ValidationError("gauge_length_mm must be positive and finite");
    if (!std::isfinite(cross_section_mm2) || cross_section_mm2 <= 0.0)
        throw ValidationError("cross_section_mm2 must be positive and finite");

    const double eng_strain = record.extension_mm / gauge_length_mm;
    const double eng_stress = record.force_n / cross_section_mm2;
    return StressStrainSample{
        std::log1p(eng_strain),
        record.strain_rate,
        eng_stress * (1.0 + eng_strain),
    };
}

DatasetSplit split_dataset(const std::vector<StressStrainSample>& samples,
                           const TrainingConfig& config) {
    config.validate();
    const std::size_t n = samples.size();
    if (n < 10) throw ValidationError("split_dataset needs at least 10 samples");

    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::mt19937_64 rng(config.seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(idx[i], idx[j]);
    }

    const auto take = [&](double fraction) {
        return static_cast<std::size_t>(
            std::floor(static_cast<double>(n) * fraction + 1e-9));
    };
    const std::size_t n_val = take(config.split_fractions[1]);
    const std::size_t n_test = take(config.split_fractions[2]);
    if (n_val + n_test >= n)
        throw ConfigError("validation+test fractions leave no training data");
    const std::size_t n_train = n - n_val - n_test;

    DatasetSplit split;
    split.train.reserve(n_train);
    split.validation.reserve(n_val);
    split.test.reserve(n_test);
    std::size_t k = 0;
    for (; k < n_train; ++k) split.train.push_back(samples[idx[k]]);
    for (; k < n_train + n_val; ++k) split.validation.push_back(samples[idx[k]]);
    for (; k < n; ++k) split.test.push_back(samples[idx[k]]);
    return split;
}

FlowStressModel train(const std::vector<StressStrainSample>& train_set,
                      const std::vector<StressStrainSample>& validation_set,
                      const TrainingConfig& config, TrainingReport* report) {
    config.validate();
    if (train_set.empty() || validation_set.empty())
        throw ValidationError("train() needs non-empty training and validation sets");

    const int width = config.hidden_width;
    const std::size_t np = static_cast<std::size_t>(4 * width + 1);

    std::array<Range, 2> in_norm;
    Range out_norm;
    {
        std::vector<double> f(train_set.size());
        for (std::size_t i = 0; i < train_set.size(); ++i) f[i] = train_set[i].true_strain;
        in_norm[0] = feature_range(f);
        for (std::size_t i = 0; i < train_set.size(); ++i) f[i] = train_set[i].strain_rate;
        in_norm[1] = feature_range(f);
        for (std::size_t i = 0; i < train_set.size(); ++i) f[i] = train_set[i].true_stress_mpa;
        out_norm = feature_range(f);
    }
    const NormalizedSet tr = normalize(train_set, in_norm, out_norm);
    const NormalizedSet va = normalize(validation_set, in_norm, out_norm);

    std::vector<double> theta(np);
    std::mt19937_64 rng(config.seed);
    for (double& t : theta) t = next_unit(rng) - 0.5;

    linalg::Matrix jtj(np), damped(np);
    std::vector<double> jtr(np), step(np), trial(np), scratch;

    const double lambda_max = 1e12;
    double lambda = config.initial_damping;

    ParamView pv{width, theta.data()};
    double train_sse = sse(pv, tr, scratch);
    double val_mse = sse(pv, va, scratch) / static_cast<double>(va.size());
    std::vector<double> best_theta = theta;
    double best_val = val_mse;
    const double initial_val = val_mse;
    int best_epoch = 0;
    int epochs_run = 0;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        epochs_run = epoch;
        if (!std::isfinite(train_sse))
            throw TrainingError("training loss is not finite", epoch);

        normal_equations(pv, tr, jtj, jtr);

        bool accepted = false;
        bool any_solve_ok = false;
        while (lambda <= lambda_max) {
            damped = jtj;
            for (std::size_t d = 0; d < np; ++d) damped(d, d) += lambda;
            damped.mirror_upper();
            if (!linalg::cholesky_factor(damped)) {
                lambda *= config.damping_increase_factor;
                continue;
            }
            any_solve_ok = true;
            for (std::size_t d = 0; d < np; ++d) step[d] = -jtr[d];
            linalg::cholesky_solve(damped, step);
            for (std::size_t d = 0; d < np; ++d) trial[d] = theta[d] + step[d];
            const double trial_sse = sse(ParamView{width, trial.data()}, tr, scratch);
            if (std::isfinite(trial_sse) && trial_sse < train_sse) {
                std::copy(trial.begin(), trial.end(), theta.begin());
                train_sse = trial_sse;
                lambda = std::max(lambda * config.damping_decrease_factor, 1e-15);
                accepted = true;
                break;
            }
            lambda *= config.damping_increase_factor;
        }
        if (!accepted) {
            if (!any_solve_ok)
                throw TrainingError("singular normal equations at maximum damping", epoch);
            break;  // no damping yields an improving step: converged
        }

        val_mse = sse(pv, va, scratch) / static_cast<double>(va.size());
        if (val_mse < best_val) {
            best_val = val_mse;
            best_theta = theta;
            best_epoch = epoch;
        }
    }

    if (report) {
        report->epochs_run = epochs_run;
        report->best_epoch = best_epoch;
        report->initial_validation_mse = initial_val;
        report->best_validation_mse = best_val;
        report->final_train_mse = train_sse / static_cast<double>(tr.size());
    }
    FlowStressModel model = make_model(best_theta, width, in_norm, out_norm, config.seed);
    model.validate();
    return model;
}

Prediction predict(const FlowStressModel& model, double true_strain, double strain_rate) {
    if (!(strain_rate > 0.0) || !std::isfinite(strain_rate))
        throw ValidationError("strain_rate must be positive");
    if (!std::isfinite(true_strain))
        throw ValidationError("true_strain must be finite");

    const double u0 = model.input_norm[0].normalize(true_strain);
    const double u1 = model.input_norm[1].normalize(strain_rate);
    const bool extrapolated =
        u0 < -0.5 || u0 > 1.5 || u1 < -0.5 || u1 > 1.5;

    double acc = model.output_bias;
    for (int j = 0; j < model.hidden_width; ++j) {
        const double a = model.input_weights[2 * j] * u0 +
                         model.input_weights[2 * j + 1] * u1 + model.input_biases[j];
        acc += model.output_weights[j] * sigmoid(a);
    }
    return Prediction{model.output_norm.denormalize(acc), extrapolated};
}

double shear_yield(double true_stress_mpa) {
    if (!(true_stress_mpa >= 0.0))
        throw ValidationError("true_stress must be non-negative");
    return true_stress_mpa / kSqrt3;
}

double flow_stress_at_thickness(const FlowStressModel& model, double reference_thickness_mm,
                                double local_thickness_mm, double strain_rate) {
    if (!(local_thickness_mm > 0.0))
        throw ValidationError("local thickness must be positive");
    if (local_thickness_mm > reference_thickness_mm)
        throw ValidationError("local thickness exceeds reference thickness (negative strain)");
    const double eps = std::log(reference_thickness_mm / local_thickness_mm);
    return 2.0 * shear_yield(predict(model, eps, strain_rate).stress_mpa);
}

}  // namespace rollsim::material
