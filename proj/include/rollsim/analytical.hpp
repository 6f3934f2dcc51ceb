#pragma once

#include <string>

namespace rollsim::analytical {

// Poisson factor in the flexural rigidity: the roll-design handbooks use
// 1/(1-v^2); `as_printed` keeps the 1/(1-v) variant for comparison.
enum class RigidityForm { as_printed, standard };

RigidityForm rigidity_form_from_string(const std::string& name);

struct PlateSpec {
    double radius_m;
    double thickness_m = 1.0;
    double elastic_modulus_pa = 211e9;
    double poisson = 0.3;
    RigidityForm form = RigidityForm::as_printed;

    void validate() const;
};

// gamma_n = arcsin(sin(alpha)/2 + (cos(alpha)-1)/(2 mu)).
double analytical_neutral_angle(double alpha_rad, double mu);

// D = E t^3 / (12 (1-v))   (as printed)
// D = E t^3 / (12 (1-v^2)) (standard)
double flexural_rigidity(const PlateSpec& spec);

// W_max = p a^2 / (16 pi D), the clamped-plate center deflection baseline.
double plate_max_deflection(double pressure_pa, const PlateSpec& spec);

}  // namespace rollsim::analytical
