#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <vector>

#include <doctest.h>

#include "rollsim/errors.hpp"
#include "rollsim/io_util.hpp"
#include "rollsim/material.hpp"

using namespace rollsim;
using namespace rollsim::material;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream(path, std::ios::trunc) << content;
    return path;
}

// Synthetic dataset around a smooth curve; small and fast to train on.
std::vector<StressStrainSample> synthetic_samples(std::size_t n, double noise_amp = 0.0,
                                                  unsigned seed = 3) {
    std::mt19937_64 rng(seed);
    std::vector<StressStrainSample> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = static_cast<double>(i) / static_cast<double>(n - 1);
        const double rate = (i % 2 == 0) ? 0.001 : 0.052;
        const double noise =
            noise_amp * (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
        v.push_back({e, rate, 400.0 + 600.0 * e + 40.0 * e * e + noise});
    }
    return v;
}

TrainingConfig quick_config(int epochs = 250, std::uint64_t seed = 11) {
    TrainingConfig c;
    c.epochs = epochs;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("convert_raw matches the conversion formulas") {
    const auto zero = convert_raw({0.001, 0.0, 240.0}, 32.0, 24.0);
    CHECK(zero.true_strain == 0.0);
    CHECK(zero.true_stress_mpa == doctest::Approx(10.0).epsilon(1e-15));

    const auto s = convert_raw({0.001, 0.32, 2400.0}, 32.0, 24.0);
    CHECK(s.true_strain == doctest::Approx(std::log(1.01)).epsilon(1e-12));
    CHECK(s.true_stress_mpa == doctest::Approx(101.0).epsilon(1e-12));
}

TEST_CASE("convert_raw rejects bad fields by name") {
    CHECK_THROWS_WITH_AS(convert_raw({0.001, -1.0, 10.0}, 32, 24),
                         doctest::Contains("extension_mm"), ValidationError);
    CHECK_THROWS_WITH_AS(convert_raw({0.001, 1.0, -10.0}, 32, 24),
                         doctest::Contains("force_n"), ValidationError);
    CHECK_THROWS_AS(convert_raw({0.0, 1.0, 10.0}, 32, 24), ValidationError);
    CHECK_THROWS_AS(convert_raw({0.001, std::nan(""), 10.0}, 32, 24), ValidationError);
    CHECK_THROWS_AS(convert_raw({0.001, 1.0, 10.0}, 0.0, 24), ValidationError);
}

TEST_CASE("conversion round trip recovers extension and force") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
        const double ext = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 30.0;
        const double force = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 5000.0;
        const auto s = convert_raw({0.0052, ext, force}, 32.0, 24.0);
        const double eng = std::expm1(s.true_strain);
        const double ext_back = eng * 32.0;
        const double force_back = s.true_stress_mpa / (1.0 + eng) * 24.0;
        CHECK(ext_back == doctest::Approx(ext).epsilon(1e-12));
        CHECK(force_back == doctest::Approx(force).epsilon(1e-12));
    }
}

TEST_CASE("shipped dataset loads with the documented shape") {
    const auto samples = load_dataset(std::string(ROLLSIM_DATA_DIR) + "/stress316l.csv");
    CHECK(samples.size() == 15858);
    std::set<double> rates;
    for (const auto& s : samples) rates.insert(s.strain_rate);
    CHECK(rates == std::set<double>{0.00052, 0.001, 0.0052, 0.052});
}

TEST_CASE("split_dataset sizes follow the floor-remainder rule") {
    const auto samples = synthetic_samples(15858);
    const auto split = split_dataset(samples, quick_config());
    CHECK(split.train.size() == 11102);
    CHECK(split.validation.size() == 2378);
    CHECK(split.test.size() == 2378);
}

TEST_CASE("split_dataset is a deterministic disjoint partition") {
    auto samples = synthetic_samples(199);
    // unique strains so sample identity survives the shuffle
    for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i].true_strain = static_cast<double>(i);

    TrainingConfig c = quick_config(10, 7);
    const auto a = split_dataset(samples, c);
    const auto b = split_dataset(samples, c);
    REQUIRE(a.train.size() == b.train.size());
    for (std::size_t i = 0; i < a.train.size(); ++i)
        CHECK(a.train[i].true_strain == b.train[i].true_strain);

    std::multiset<double> seen;
    for (const auto* part : {&a.train, &a.validation, &a.test})
        for (const auto& s : *part) seen.insert(s.true_strain);
    CHECK(seen.size() == samples.size());
    CHECK(*seen.begin() == 0.0);
    CHECK(*seen.rbegin() == static_cast<double>(samples.size() - 1));

    c.seed = 8;
    const auto d = split_dataset(samples, c);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.train.size(); ++i)
        any_diff |= a.train[i].true_strain != d.train[i].true_strain;
    CHECK(any_diff);
}

TEST_CASE("split_dataset validates inputs") {
    TrainingConfig bad = quick_config();
    bad.split_fractions = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(split_dataset(synthetic_samples(100), bad), ConfigError);
    CHECK_THROWS_AS(split_dataset(synthetic_samples(9), quick_config()), ValidationError);
}

TEST_CASE("training fits constant-output data to the constant") {
    std::vector<StressStrainSample> data;
    for (int i = 0; i < 120; ++i)
        data.push_back({i / 119.0, i % 3 == 0 ? 0.001 : 0.052, 500.0});
    const auto split = split_dataset(data, quick_config(150));
    TrainingReport report;
    const auto model = train(split.train, split.validation, quick_config(150), &report);
    CHECK(report.best_validation_mse < 1e-12);
    for (double e : {0.0, 0.3, 0.9})
        CHECK(predict(model, e, 0.01).stress_mpa == doctest::Approx(500.0).epsilon(1e-6));
}

TEST_CASE("training fits identity-like data") {
    // sigma = 1000 * strain at a single rate
    std::vector<StressStrainSample> data;
    for (int i = 0; i < 400; ++i) {
        const double e = 0.4 * i / 399.0;
        data.push_back({e, 0.052, 1000.0 * e});
    }
    const auto split = split_dataset(data, quick_config(400, 2));
    const auto model = train(split.train, split.validation, quick_config(400, 2));
    CHECK(predict(model, 0.2, 0.052).stress_mpa == doctest::Approx(200.0).epsilon(0.02));
}

TEST_CASE("training is bit-reproducible for a fixed seed") {
    const auto data = synthetic_samples(400, 10.0);
    const auto split = split_dataset(data, quick_config(60, 5));
    const auto m1 = train(split.train, split.validation, quick_config(60, 5));
    const auto m2 = train(split.train, split.validation, quick_config(60, 5));
    CHECK(serialize_model(m1) == serialize_model(m2));

    const auto m3 = train(split.train, split.validation, quick_config(60, 6));
    CHECK(serialize_model(m1) != serialize_model(m3));
}

TEST_CASE("best-so-far selection keeps validation MSE from rising") {
    const auto data = synthetic_samples(500, 20.0);
    const auto split = split_dataset(data, quick_config(80, 9));
    TrainingReport report;
    train(split.train, split.validation, quick_config(80, 9), &report);
    CHECK(report.best_validation_mse <= report.initial_validation_mse);
}

TEST_CASE("training rejects unusable inputs") {
    const auto data = synthetic_samples(50);
    CHECK_THROWS_AS(train({}, data, quick_config()), ValidationError);

    auto poisoned = data;
    poisoned[10].true_stress_mpa = std::nan("");
    CHECK_THROWS_AS(train(poisoned, data, quick_config(5)), TrainingError);
}

TEST_CASE("prediction is pure and flags extrapolation") {
    const auto data = synthetic_samples(300);
    const auto split = split_dataset(data, quick_config(40));
    const auto model = train(split.train, split.validation, quick_config(40));

    const auto a = predict(model, 0.4, 0.01);
    const auto b = predict(model, 0.4, 0.01);
    CHECK(a.stress_mpa == b.stress_mpa);
    CHECK_FALSE(a.extrapolated);

    // strain range is [0,1]: 1.4 stays inside the doubled band, 2.6 does not
    CHECK_FALSE(predict(model, 1.4, 0.01).extrapolated);
    CHECK(predict(model, 2.6, 0.01).extrapolated);
    CHECK(predict(model, -0.6, 0.01).extrapolated);
    CHECK_THROWS_AS(predict(model, 0.2, 0.0), ValidationError);
    CHECK_THROWS_AS(predict(model, 0.2, -1.0), ValidationError);
}

TEST_CASE("normalization ranges cover the training features exactly") {
    const auto data = synthetic_samples(257, 5.0);
    const auto split = split_dataset(data, quick_config(30));
    const auto model = train(split.train, split.validation, quick_config(30));
    for (const auto& s : split.train) {
        const double u0 = model.input_norm[0].normalize(s.true_strain);
        const double u1 = model.input_norm[1].normalize(s.strain_rate);
        CHECK(u0 >= 0.0);
        CHECK(u0 <= 1.0);
        CHECK(u1 >= 0.0);
        CHECK(u1 <= 1.0);
    }
}

TEST_CASE("shear_yield values and linearity") {
    CHECK(shear_yield(std::sqrt(3.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(shear_yield(0.0) == 0.0);
    CHECK(shear_yield(600.0) == doctest::Approx(346.410161513775).epsilon(1e-12));
    for (double a : {0.0, 0.5, 2.0, 17.0})
        CHECK(shear_yield(a * 123.4) == doctest::Approx(a * shear_yield(123.4)).epsilon(1e-14));
    CHECK_THROWS_AS(shear_yield(-1.0), ValidationError);
}

TEST_CASE("flow_stress_at_thickness uses the cumulative strain") {
    const auto model = FlowStressModel::constant(500.0);
    CHECK(flow_stress_at_thickness(model, 4.0, 4.0, 0.052) ==
          doctest::Approx(2.0 * 500.0 / std::sqrt(3.0)).epsilon(1e-12));

    // the strain fed to the model is ln(4/3.24) = 0.2107
    const auto pred = predict(model, std::log(4.0 / 3.24), 0.052);
    CHECK(flow_stress_at_thickness(model, 4.0, 3.24, 0.052) ==
          doctest::Approx(2.0 * shear_yield(pred.stress_mpa)).epsilon(1e-12));

    CHECK_THROWS_AS(flow_stress_at_thickness(model, 4.0, 4.5, 0.052), ValidationError);
}

TEST_CASE("model file round trip") {
    const auto data = synthetic_samples(120, 2.0);
    const auto split = split_dataset(data, quick_config(30));
    const auto model = train(split.train, split.validation, quick_config(30));

    const auto path = write_temp("rollsim_model_test.fsm", "");
    save_model(model, path);
    const std::string text = io::read_file(path);
    CHECK(text.rfind("ROLLSIM-FSM v1\n", 0) == 0);

    const auto loaded = load_model(path);
    CHECK(serialize_model(loaded) == serialize_model(model));
    CHECK(predict(loaded, 0.37, 0.01).stress_mpa == predict(model, 0.37, 0.01).stress_mpa);
    std::filesystem::remove(path);
}

TEST_CASE("model loader rejects malformed files") {
    const auto bad_magic = write_temp("rollsim_bad_magic.fsm", "NOT-A-MODEL\n");
    CHECK_THROWS_AS(load_model(bad_magic), ValidationError);
    const auto truncated =
        write_temp("rollsim_truncated.fsm", "ROLLSIM-FSM v1\nhidden_width 3\n");
    CHECK_THROWS_AS(load_model(truncated), ValidationError);
    std::filesystem::remove(bad_magic);
    std::filesystem::remove(truncated);
}

TEST_CASE("dataset loader handles both header variants and bad rows") {
    const auto raw = write_temp("rollsim_raw.csv",
                                "strain_rate_per_s,extension_mm,force_n\n"
                                "0.001,0.32,2400\n"
                                "0.052,0,240\n");
    const auto loaded = load_dataset(raw, 32.0, 24.0);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].true_strain == doctest::Approx(std::log(1.01)).epsilon(1e-12));
    CHECK(loaded[0].true_stress_mpa == doctest::Approx(101.0).epsilon(1e-12));
    CHECK(loaded[1].true_stress_mpa == doctest::Approx(10.0).epsilon(1e-12));

    const auto conv = write_temp("rollsim_conv.csv",
                                 "strain_rate_per_s,true_strain,true_stress_mpa\n"
                                 "0.052,0.1,410.5\n");
    CHECK(load_dataset(conv).size() == 1);

    const auto bad_row = write_temp("rollsim_badrow.csv",
                                    "strain_rate_per_s,true_strain,true_stress_mpa\n"
                                    "0.052,0.1,410.5\n"
                                    "0.052,oops,400\n");
    CHECK_THROWS_WITH_AS(load_dataset(bad_row), doctest::Contains(":3:"), ValidationError);

    const auto empty = write_temp("rollsim_empty.csv", "");
    CHECK_THROWS_AS(load_dataset(empty), ValidationError);
    const auto header_only =
        write_temp("rollsim_header_only.csv", "strain_rate_per_s,true_strain,true_stress_mpa\n");
    CHECK_THROWS_AS(load_dataset(header_only), ValidationError);
    const auto bad_header = write_temp("rollsim_badheader.csv", "a,b,c\n1,2,3\n");
    CHECK_THROWS_AS(load_dataset(bad_header), ValidationError);

    for (const auto& p : {raw, conv, bad_row, empty, header_only, bad_header})
        std::filesystem::remove(p);
}

TEST_CASE("constant model helper predicts its constant everywhere") {
    const auto m = FlowStressModel::constant(321.5);
    m.validate();
    CHECK(predict(m, 0.0, 0.052).stress_mpa == doctest::Approx(321.5).epsilon(1e-15));
    CHECK(predict(m, 1.0, 0.0005).stress_mpa == doctest::Approx(321.5).epsilon(1e-15));
}
