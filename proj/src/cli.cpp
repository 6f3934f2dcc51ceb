#include "rollsim/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "rollsim/errors.hpp"
#include "rollsim/io_util.hpp"

namespace rollsim::cli {
namespace {

constexpr double kDegPerRad = 57.29577951308232;

std::string pass_profile_name(int pass) { return "pass" + std::to_string(pass) + "_profile.csv"; }
std::string pass_deflection_name(int pass) {
    return "pass" + std::to_string(pass) + "_deflection.csv";
}

std::string fmt_diameter(double d) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", d);
    return buf;
}

// metadata lines only; data columns stay at full g17 fidelity
std::string meta(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

double denorm_mse(double normalized_mse, const material::Range& out) {
    return normalized_mse * out.width() * out.width();
}

double mse_mpa2(const material::FlowStressModel& model,
                const std::vector<material::StressStrainSample>& samples) {
    double acc = 0.0;
    for (const auto& s : samples) {
        const double d = material::predict(model, s.true_strain, s.strain_rate).stress_mpa -
                         s.true_stress_mpa;
        acc += d * d;
    }
    return acc / static_cast<double>(samples.size());
}

}  // namespace

void Config::validate() const {
    training_config().validate();
    if (!(gauge_length_mm > 0.0) || !(cross_section_mm2 > 0.0))
        throw ConfigError("specimen geometry must be positive");
    if (!(initial_thickness_mm > 0.0)) throw ConfigError("initial thickness must be positive");
    if (exit_thicknesses_mm.empty()) throw ConfigError("pass schedule is empty");
    double prev = initial_thickness_mm;
    for (double h : exit_thicknesses_mm) {
        if (!(h > 0.0 && h < prev))
            throw ConfigError("exit thicknesses must decrease strictly from the initial thickness");
        prev = h;
    }
    if (strain_accumulation != "cumulative" && strain_accumulation != "per-pass")
        throw ConfigError("strain_accumulation must be 'cumulative' or 'per-pass'");
    if (!(load_span_fraction > 0.0 && load_span_fraction <= 1.0))
        throw ConfigError("load_span_fraction must lie in (0, 1]");
    beam_spec().validate();
    beam::boundary_from_string(boundary);
    analytical::rigidity_form_from_string(rigidity_form);
}

material::TrainingConfig Config::training_config() const {
    material::TrainingConfig t;
    t.epochs = epochs;
    t.split_fractions = {train_fraction, validation_fraction, test_fraction};
    t.seed = seed;
    t.hidden_width = hidden_width;
    t.initial_damping = initial_damping;
    t.damping_increase_factor = damping_increase;
    t.damping_decrease_factor = damping_decrease;
    return t;
}

slab::RollPassGeometry Config::pass_geometry(double entry_mm, double exit_mm) const {
    slab::RollPassGeometry g;
    g.entry_thickness_mm = entry_mm;
    g.exit_thickness_mm = exit_mm;
    g.roll_radius_mm = roll_radius_mm;
    g.friction_mu = friction_mu;
    g.step_deg = step_deg;
    g.reference_thickness_mm =
        strain_accumulation == "cumulative" ? initial_thickness_mm : entry_mm;
    g.strain_rate = strain_rate_per_s;
    return g;
}

beam::BeamSpec Config::beam_spec() const { return beam_spec_with_diameter(roll_diameter_m); }

beam::BeamSpec Config::beam_spec_with_diameter(double diameter_m) const {
    beam::BeamSpec s;
    s.length_m = beam_length_m;
    s.diameter_m = diameter_m;
    s.elastic_modulus_pa = elastic_modulus_pa;
    s.element_count = element_count;
    s.boundary = beam::boundary_from_string(boundary);
    return s;
}

beam::LoadCase Config::load_case(double line_load) const {
    beam::LoadCase l;
    const double span = load_span_fraction * beam_length_m;
    l.span_start_m = 0.5 * (beam_length_m - span);
    l.span_end_m = l.span_start_m + span;
    l.line_load_n_per_m = line_load;
    return l;
}

double Config::effective_plate_radius_m() const {
    return plate_radius_m > 0.0 ? plate_radius_m : 0.5 * load_span_fraction * beam_length_m;
}

analytical::PlateSpec Config::plate_spec() const {
    analytical::PlateSpec p;
    p.radius_m = effective_plate_radius_m();
    p.thickness_m = plate_thickness_m;
    p.elastic_modulus_pa = elastic_modulus_pa;
    p.poisson = poisson;
    p.form = analytical::rigidity_form_from_string(rigidity_form);
    return p;
}

double line_load_n_per_m(double mean_pressure_mpa, double roll_radius_mm, double draft_mm) {
    if (!(mean_pressure_mpa >= 0.0) || !(roll_radius_mm > 0.0) || !(draft_mm > 0.0))
        throw ValidationError("line-load conversion needs P >= 0, R' > 0, draft > 0");
    const double contact_length_m = std::sqrt(roll_radius_mm * 1e-3 * draft_mm * 1e-3);
    return mean_pressure_mpa * 1e6 * contact_length_m;
}

TrainOutcome train_command(const std::string& dataset_path, const Config& config,
                           const std::string& model_out_path) {
    config.validate();
    const auto samples =
        material::load_dataset(dataset_path, config.gauge_length_mm, config.cross_section_mm2);
    const auto split = material::split_dataset(samples, config.training_config());

    TrainOutcome out;
    out.train_size = split.train.size();
    out.validation_size = split.validation.size();
    out.test_size = split.test.size();
    out.model = material::train(split.train, split.validation, config.training_config(),
                                &out.report);
    out.train_mse_mpa2 = denorm_mse(out.report.final_train_mse, out.model.output_norm);
    out.validation_mse_mpa2 = denorm_mse(out.report.best_validation_mse, out.model.output_norm);
    if (!split.test.empty()) {
        out.test_mse_mpa2 = mse_mpa2(out.model, split.test);
        double lo = split.test.front().true_stress_mpa, hi = lo;
        for (const auto& s : split.test) {
            lo = std::min(lo, s.true_stress_mpa);
            hi = std::max(hi, s.true_stress_mpa);
        }
        if (hi > lo) out.test_nrmse = std::sqrt(out.test_mse_mpa2) / (hi - lo);
    }

    material::save_model(out.model, model_out_path);
    return out;
}

std::vector<PassReport> run_schedule(const Config& config,
                                     const material::FlowStressModel& model,
                                     const std::string& outdir) {
    config.validate();
    model.validate();

    std::vector<PassReport> reports;
    double entry = config.initial_thickness_mm;
    int pass = 0;
    for (double exit : config.exit_thicknesses_mm) {
        ++pass;
        try {
            const auto geom = config.pass_geometry(entry, exit);
            const auto profile = slab::solve_pass(geom, model);
            const double pbar = slab::mean_pressure(profile);
            const double w = line_load_n_per_m(pbar, config.roll_radius_mm, entry - exit);
            const auto deflection = beam::solve(config.beam_spec(), config.load_case(w));
            const auto [max_x, max_w] = beam::max_deflection(deflection);

            PassReport r;
            r.pass_index = pass;
            r.entry_thickness_mm = entry;
            r.exit_thickness_mm = exit;
            r.alpha_deg = profile.contact_angle_rad * kDegPerRad;
            r.neutral_deg = profile.neutral_angle_rad * kDegPerRad;
            r.neutral_pressure_mpa = profile.neutral_pressure_mpa;
            r.mean_pressure_mpa = pbar;
            r.line_load_n_per_m = w;
            r.max_deflection_m = max_w;
            r.max_deflection_x_m = max_x;
            r.profile_csv = pass_profile_name(pass);
            r.deflection_csv = pass_deflection_name(pass);

            io::atomic_write(join(outdir, r.profile_csv), slab::to_csv(profile));
            io::atomic_write(join(outdir, r.deflection_csv), beam::to_csv(deflection));
            reports.push_back(r);
        } catch (const Error& e) {
            throw SolverError("pass " + std::to_string(pass) + ": " + e.what());
        }
        entry = exit;
    }

    std::ostringstream s;
    s << "# rollsim pass summary\n";
    s << "# strain_rate_per_s=" << meta(config.strain_rate_per_s)
      << ",friction_mu=" << meta(config.friction_mu)
      << ",roll_radius_mm=" << meta(config.roll_radius_mm)
      << ",step_deg=" << meta(config.step_deg)
      << ",strain_accumulation=" << config.strain_accumulation
      << ",reference_thickness_mm=" << meta(config.initial_thickness_mm)
      << ",boundary=" << config.boundary
      << ",angular_speed_rpm=" << meta(config.angular_speed_rpm) << "\n";
    s << "pass,entry_mm,exit_mm,alpha_deg,neutral_deg,neutral_pressure_mpa,mean_pressure_mpa,"
         "line_load_n_per_m,max_deflection_m,max_deflection_x_m,profile_csv,deflection_csv\n";
    for (const auto& r : reports) {
        s << r.pass_index << "," << io::g17(r.entry_thickness_mm) << ","
          << io::g17(r.exit_thickness_mm) << "," << io::g17(r.alpha_deg) << ","
          << io::g17(r.neutral_deg) << "," << io::g17(r.neutral_pressure_mpa) << ","
          << io::g17(r.mean_pressure_mpa) << "," << io::g17(r.line_load_n_per_m) << ","
          << io::g17(r.max_deflection_m) << "," << io::g17(r.max_deflection_x_m) << ","
          << r.profile_csv << "," << r.deflection_csv << "\n";
    }
    io::atomic_write(join(outdir, "summary.csv"), s.str());
    return reports;
}

std::vector<PassReport> read_summary(const std::string& outdir) {
    const std::string path = join(outdir, "summary.csv");
    if (!std::filesystem::exists(path))
        throw DependencyError("missing " + path + "; run `simulate` first");
    std::istringstream in(io::read_file(path));
    std::string line;
    std::vector<std::string> header;
    std::vector<PassReport> reports;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto fields = io::split_csv_line(line);
        if (header.empty()) {
            header = fields;
            continue;
        }
        if (fields.size() != header.size())
            throw ValidationError(path + ": ragged summary row");
        PassReport r;
        for (std::size_t i = 0; i < header.size(); ++i) {
            const std::string& k = header[i];
            const std::string& v = fields[i];
            if (k == "pass") r.pass_index = static_cast<int>(io::parse_double(v, k));
            else if (k == "entry_mm") r.entry_thickness_mm = io::parse_double(v, k);
            else if (k == "exit_mm") r.exit_thickness_mm = io::parse_double(v, k);
            else if (k == "alpha_deg") r.alpha_deg = io::parse_double(v, k);
            else if (k == "neutral_deg") r.neutral_deg = io::parse_double(v, k);
            else if (k == "neutral_pressure_mpa") r.neutral_pressure_mpa = io::parse_double(v, k);
            else if (k == "mean_pressure_mpa") r.mean_pressure_mpa = io::parse_double(v, k);
            else if (k == "line_load_n_per_m") r.line_load_n_per_m = io::parse_double(v, k);
            else if (k == "max_deflection_m") r.max_deflection_m = io::parse_double(v, k);
            else if (k == "max_deflection_x_m") r.max_deflection_x_m = io::parse_double(v, k);
            else if (k == "profile_csv") r.profile_csv = v;
            else if (k == "deflection_csv") r.deflection_csv = v;
        }
        reports.push_back(r);
    }
    if (reports.empty()) throw DependencyError(path + " contains no passes");
    return reports;
}

std::vector<ComparisonRow> compare_command(const Config& config, const std::string& outdir) {
    config.validate();
    const auto reports = read_summary(outdir);
    const auto plate = config.plate_spec();

    std::vector<ComparisonRow> rows;
    rows.reserve(reports.size());
    for (const auto& r : reports) {
        ComparisonRow row;
        row.true_strain = std::log(config.initial_thickness_mm / r.exit_thickness_mm);
        row.analytical_deflection_m =
            analytical::plate_max_deflection(r.mean_pressure_mpa * 1e6, plate);
        row.numerical_deflection_m = std::abs(r.max_deflection_m);
        rows.push_back(row);
    }

    std::ostringstream s;
    s << "# plate_radius_m=" << meta(plate.radius_m)
      << ",plate_thickness_m=" << meta(plate.thickness_m)
      << ",poisson=" << meta(plate.poisson) << ",rigidity_form=" << config.rigidity_form
      << "\n";
    s << "true_strain,analytical_deflection_m,numerical_deflection_m\n";
    for (const auto& row : rows)
        s << io::g17(row.true_strain) << "," << io::g17(row.analytical_deflection_m) << ","
          << io::g17(row.numerical_deflection_m) << "\n";
    io::atomic_write(join(outdir, "comparison.csv"), s.str());
    return rows;
}

std::vector<std::string> radius_study_command(const Config& config,
                                              const std::vector<double>& diameters_m,
                                              const std::string& outdir) {
    config.validate();
    if (diameters_m.empty()) {
        std::cerr << "radius-study: no diameters given, nothing to do\n";
        return {};
    }
    const auto reports = read_summary(outdir);
    const double w = reports.front().line_load_n_per_m;  // pass-1 load

    std::vector<std::string> files;
    for (double d : diameters_m) {
        const auto deflection =
            beam::solve(config.beam_spec_with_diameter(d), config.load_case(w));
        const std::string name = "radius_study_d" + fmt_diameter(d) + "_deflection.csv";
        io::atomic_write(join(outdir, name), beam::to_csv(deflection));
        files.push_back(name);
    }
    return files;
}

}  // namespace rollsim::cli
