#include "rollsim/analytical.hpp"

#include <cmath>

#include "rollsim/errors.hpp"
#include "rollsim/io_util.hpp"

namespace rollsim::analytical {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

RigidityForm rigidity_form_from_string(const std::string& name) {
    if (name == "as-printed") return RigidityForm::as_printed;
    if (name == "standard") return RigidityForm::standard;
    throw ValidationError("unknown rigidity form: " + name);
}

void PlateSpec::validate() const {
    if (!(radius_m > 0.0)) throw ValidationError("plate radius must be positive");
    if (!(thickness_m > 0.0)) throw ValidationError("plate thickness must be positive");
    if (!(elastic_modulus_pa > 0.0)) throw ValidationError("elastic modulus must be positive");
    if (!(poisson > 0.0 && poisson < 0.5))
        throw ValidationError("Poisson ratio must lie in (0, 0.5)");
}

double analytical_neutral_angle(double alpha_rad, double mu) {
    if (!(alpha_rad > 0.0 && alpha_rad < kPi / 2.0))
        throw ValidationError("contact angle must lie in (0, pi/2)");
    if (!(mu > 0.0)) throw ValidationError("friction coefficient must be positive");
    const double s = std::sin(alpha_rad) / 2.0 + (std::cos(alpha_rad) - 1.0) / (2.0 * mu);
    if (!(s > 0.0 && s < 1.0))
        throw NoAnalyticalNeutralError(
            "no analytical neutral point: arcsin argument " + io::g17(s) +
            " outside (0, 1); friction too low for the draft");
    return std::asin(s);
}

double flexural_rigidity(const PlateSpec& spec) {
    spec.validate();
    const double t3 = spec.thickness_m * spec.thickness_m * spec.thickness_m;
    const double factor = spec.form == RigidityForm::as_printed
                              ? 1.0 - spec.poisson
                              : 1.0 - spec.poisson * spec.poisson;
    return spec.elastic_modulus_pa * t3 / (12.0 * factor);
}

double plate_max_deflection(double pressure_pa, const PlateSpec& spec) {
    if (!(pressure_pa >= 0.0)) throw ValidationError("pressure must be >= 0");
    return pressure_pa * spec.radius_m * spec.radius_m / (16.0 * kPi * flexural_rigidity(spec));
}

}  // namespace rollsim::analytical
