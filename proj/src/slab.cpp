#include "rollsim/slab.hpp"

#include <cmath>
#include <sstream>

#include "rollsim/errors.hpp"
#include "rollsim/io_util.hpp"
#include "rollsim/kernels.hpp"

namespace rollsim::slab {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegPerRad = 180.0 / kPi;

// 2k along the whole grid, evaluated once per march.
std::vector<double> two_k_profile(const RollPassGeometry& geom,
                                  const material::FlowStressModel& model,
                                  const std::vector<double>& grid) {
    std::vector<double> two_k(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double h = thickness_at(geom, grid[i]);
        two_k[i] = material::flow_stress_at_thickness(model, geom.reference_thickness_mm,
                                                      h, geom.strain_rate);
    }
    return two_k;
}

void check_finite(double q, std::size_t step, Side side) {
    if (!std::isfinite(q))
        throw SolverError(std::string("pressure became non-finite on the ") +
                          (side == Side::exit ? "exit" : "entry") +
                          " branch at step " + std::to_string(step));
}

}  // namespace

void RollPassGeometry::validate() const {
    if (!(entry_thickness_mm > exit_thickness_mm))
        throw ValidationError("entry thickness must exceed exit thickness (no draft)");
    if (!(exit_thickness_mm > 0.0)) throw ValidationError("exit thickness must be positive");
    if (!(roll_radius_mm > 0.0)) throw ValidationError("roll radius must be positive");
    if (!(friction_mu >= 0.0 && friction_mu < 1.0))
        throw ValidationError("friction coefficient must lie in [0, 1)");
    if (!(step_deg > 0.0)) throw ValidationError("angular step must be positive");
    if (!(reference_thickness_mm >= entry_thickness_mm))
        throw ValidationError("reference thickness must be at least the entry thickness");
    if (!(strain_rate > 0.0)) throw ValidationError("strain rate must be positive");
}

double contact_angle(const RollPassGeometry& geom) {
    geom.validate();
    return std::sqrt((geom.entry_thickness_mm - geom.exit_thickness_mm) / geom.roll_radius_mm);
}

double thickness_at(const RollPassGeometry& geom, double phi_rad) {
    const double alpha = contact_angle(geom);
    if (phi_rad < 0.0 || phi_rad > alpha * (1.0 + 1e-9))
        throw ValidationError("contact angle out of range [0, alpha]");
    return geom.exit_thickness_mm + geom.roll_radius_mm * phi_rad * phi_rad;
}

std::vector<double> angle_grid(const RollPassGeometry& geom) {
    const double alpha = contact_angle(geom);
    const double d = geom.step_deg / kDegPerRad;
    const auto steps = static_cast<std::size_t>(std::floor(alpha / d + 1e-12));
    std::vector<double> grid;
    grid.reserve(steps + 2);
    for (std::size_t i = 0; i <= steps; ++i) grid.push_back(static_cast<double>(i) * d);
    if (alpha - grid.back() > 1e-9 * d) grid.push_back(alpha);
    return grid;
}

BranchProfile march_exit(const RollPassGeometry& geom, const material::FlowStressModel& model) {
    const std::vector<double> grid = angle_grid(geom);
    const std::vector<double> two_k = two_k_profile(geom, model, grid);
    const double rp = geom.roll_radius_mm;
    const double mu = geom.friction_mu;

    BranchProfile branch{grid, std::vector<double>(grid.size()), Side::exit};
    std::vector<double>& q = branch.pressures_mpa;
    q[0] = two_k[0];  // p = 0 at the exit plane
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double dphi = grid[i + 1] - grid[i];
        const double h = thickness_at(geom, grid[i]);
        q[i + 1] = q[i] + (two_k[i + 1] - two_k[i]) +
                   dphi * (2.0 * two_k[i] * rp * grid[i] + 2.0 * mu * rp * q[i]) / h;
        check_finite(q[i + 1], i + 1, Side::exit);
    }
    return branch;
}

BranchProfile march_entry(const RollPassGeometry& geom, const material::FlowStressModel& model) {
    const std::vector<double> grid = angle_grid(geom);
    const std::vector<double> two_k = two_k_profile(geom, model, grid);
    const double rp = geom.roll_radius_mm;
    const double mu = geom.friction_mu;
    const std::size_t n = grid.size();

    BranchProfile branch{grid, std::vector<double>(n), Side::entry};
    std::vector<double>& q = branch.pressures_mpa;
    q[n - 1] = two_k[n - 1];  // p = 0 at the entry plane
    for (std::size_t i = n - 1; i > 0; --i) {
        const double dphi = grid[i - 1] - grid[i];  // negative
        const double h = thickness_at(geom, grid[i]);
        q[i - 1] = q[i] + (two_k[i - 1] - two_k[i]) +
                   dphi * (2.0 * two_k[i] * rp * grid[i] - 2.0 * mu * rp * q[i]) / h;
        check_finite(q[i - 1], i - 1, Side::entry);
    }
    return branch;
}

NeutralPoint find_neutral(const BranchProfile& entry, const BranchProfile& exit) {
    if (entry.angles_rad.size() != exit.angles_rad.size() ||
        entry.angles_rad != exit.angles_rad)
        throw ValidationError("entry and exit branches are sampled on different grids");
    const std::vector<double>& g = entry.angles_rad;
    const std::vector<double>& qe = entry.pressures_mpa;
    const std::vector<double>& qx = exit.pressures_mpa;
    if (g.size() < 2) throw ValidationError("branch profiles need at least two samples");

    int crossings = 0;
    bool found = false;
    NeutralPoint np{0.0, 0.0, false};
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double d0 = qe[i] - qx[i];
        const double d1 = qe[i + 1] - qx[i + 1];
        const bool crossing = (d0 == 0.0) || (d0 * d1 < 0.0);
        if (!crossing) continue;
        ++crossings;
        if (found) continue;
        found = true;
        if (d0 == 0.0) {
            np.angle_rad = g[i];
            np.pressure_mpa = qe[i];
        } else {
            const double t = d0 / (d0 - d1);
            np.angle_rad = g[i] + t * (g[i + 1] - g[i]);
            const double pe = qe[i] + t * (qe[i + 1] - qe[i]);
            const double px = qx[i] + t * (qx[i + 1] - qx[i]);
            np.pressure_mpa = 0.5 * (pe + px);
        }
    }
    if (!found)
        throw NoNeutralPointError(
            "entry and exit pressures never cross: entry-exit difference is " +
            io::g17(qe.front() - qx.front()) + " at phi=0 and " +
            io::g17(qe.back() - qx.back()) + " at alpha");
    np.multiple_crossings = crossings > 1;
    return np;
}

PressureProfile solve_pass(const RollPassGeometry& geom, const material::FlowStressModel& model) {
    PressureProfile profile{
        march_entry(geom, model), march_exit(geom, model), 0.0, 0.0,
        contact_angle(geom), false,
    };
    const NeutralPoint np = find_neutral(profile.entry, profile.exit);
    profile.neutral_angle_rad = np.angle_rad;
    profile.neutral_pressure_mpa = np.pressure_mpa;
    profile.multiple_crossings = np.multiple_crossings;
    return profile;
}

CompositeCurve composite(const PressureProfile& profile) {
    CompositeCurve c;
    const std::vector<double>& g = profile.exit.angles_rad;
    c.angles_rad.reserve(g.size() + 1);
    c.pressures_mpa.reserve(g.size() + 1);
    for (std::size_t i = 0; i < g.size() && g[i] < profile.neutral_angle_rad; ++i) {
        c.angles_rad.push_back(g[i]);
        c.pressures_mpa.push_back(profile.exit.pressures_mpa[i]);
    }
    c.angles_rad.push_back(profile.neutral_angle_rad);
    c.pressures_mpa.push_back(profile.neutral_pressure_mpa);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] <= profile.neutral_angle_rad) continue;
        c.angles_rad.push_back(profile.entry.angles_rad[i]);
        c.pressures_mpa.push_back(profile.entry.pressures_mpa[i]);
    }
    return c;
}

double mean_pressure(const PressureProfile& profile) {
    const CompositeCurve c = composite(profile);
    const double span = c.angles_rad.back() - c.angles_rad.front();
    if (!(span > 0.0)) throw ValidationError("degenerate pressure profile");
    const double integral = kernels::active().trapezoid(
        c.angles_rad.data(), c.pressures_mpa.data(), c.angles_rad.size());
    return integral / span;
}

std::string to_csv(const PressureProfile& profile) {
    std::ostringstream out;
    out << "# alpha_deg=" << io::g17(profile.contact_angle_rad * kDegPerRad)
        << ",neutral_deg=" << io::g17(profile.neutral_angle_rad * kDegPerRad)
        << ",neutral_mpa=" << io::g17(profile.neutral_pressure_mpa)
        << ",mean_mpa=" << io::g17(mean_pressure(profile)) << "\n";
    out << "phi_deg,q_mpa,branch\n";
    const auto dump = [&](const BranchProfile& b, const char* name) {
        for (std::size_t i = 0; i < b.angles_rad.size(); ++i)
            out << io::g17(b.angles_rad[i] * kDegPerRad) << ","
                << io::g17(b.pressures_mpa[i]) << "," << name << "\n";
    };
    dump(profile.exit, "exit");
    dump(profile.entry, "entry");
    return out.str();
}

}  // namespace rollsim::slab
