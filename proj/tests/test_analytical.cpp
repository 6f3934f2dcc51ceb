#include <cmath>

#include <doctest.h>

#include "rollsim/analytical.hpp"
#include "rollsim/errors.hpp"

using namespace rollsim;
using namespace rollsim::analytical;

namespace {
constexpr double kDeg = 57.29577951308232;
}

TEST_CASE("analytical neutral angle reproduces the reference value") {
    const double alpha = 0.10066;  // 5.77 deg
    const double gamma = analytical_neutral_angle(alpha, 0.1);
    CHECK(gamma * kDeg == doctest::Approx(1.43).epsilon(0.005));
    CHECK(gamma < alpha);
}

TEST_CASE("analytical neutral angle limits and errors") {
    const double alpha = 0.10066;
    // friction-dominated limit: gamma -> arcsin(sin(alpha)/2)
    const double limit = std::asin(std::sin(alpha) / 2.0);
    CHECK(analytical_neutral_angle(alpha, 1e9) == doctest::Approx(limit).epsilon(1e-6));

    CHECK_THROWS_AS(analytical_neutral_angle(alpha, 0.02), NoAnalyticalNeutralError);
    CHECK_THROWS_AS(analytical_neutral_angle(0.0, 0.1), ValidationError);
    CHECK_THROWS_AS(analytical_neutral_angle(2.0, 0.1), ValidationError);
    CHECK_THROWS_AS(analytical_neutral_angle(alpha, 0.0), ValidationError);
}

TEST_CASE("analytical neutral angle grows with friction and stays below alpha") {
    const double alpha = 0.10066;
    double prev = 0.0;
    for (double mu : {0.06, 0.08, 0.1, 0.2, 0.5}) {
        const double g = analytical_neutral_angle(alpha, mu);
        CHECK(g > prev);
        CHECK(g < alpha);
        prev = g;
    }
}

TEST_CASE("flexural rigidity in both forms") {
    PlateSpec unit{1.0, 1.0, 12.0 * 0.7, 0.3, RigidityForm::as_printed};
    CHECK(flexural_rigidity(unit) == doctest::Approx(1.0).epsilon(1e-12));

    PlateSpec roll{1.0, 1.0, 211e9, 0.3, RigidityForm::as_printed};
    CHECK(flexural_rigidity(roll) == doctest::Approx(2.512e10).epsilon(1e-3));
    roll.form = RigidityForm::standard;
    CHECK(flexural_rigidity(roll) == doctest::Approx(1.932e10).epsilon(1e-3));

    CHECK(rigidity_form_from_string("as-printed") == RigidityForm::as_printed);
    CHECK(rigidity_form_from_string("standard") == RigidityForm::standard);
    CHECK_THROWS_AS(rigidity_form_from_string("other"), ValidationError);

    PlateSpec bad = unit;
    bad.poisson = 0.6;
    CHECK_THROWS_AS(flexural_rigidity(bad), ValidationError);
}

TEST_CASE("plate max deflection formula") {
    PlateSpec spec{1.0, 1.0, 12.0 * 0.7, 0.3, RigidityForm::as_printed};  // D = 1
    CHECK(plate_max_deflection(0.0, spec) == 0.0);
    CHECK(plate_max_deflection(16.0 * 3.14159265358979323846, spec) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // quadratic in the radius, linear in p, inverse in D
    PlateSpec twice = spec;
    twice.radius_m = 2.0;
    CHECK(plate_max_deflection(100.0, twice) ==
          doctest::Approx(4.0 * plate_max_deflection(100.0, spec)).epsilon(1e-12));
    CHECK(plate_max_deflection(200.0, spec) ==
          doctest::Approx(2.0 * plate_max_deflection(100.0, spec)).epsilon(1e-12));
    PlateSpec stiff = spec;
    stiff.elastic_modulus_pa *= 5.0;
    CHECK(plate_max_deflection(100.0, stiff) ==
          doctest::Approx(plate_max_deflection(100.0, spec) / 5.0).epsilon(1e-12));

    CHECK_THROWS_AS(plate_max_deflection(-1.0, spec), ValidationError);
}
