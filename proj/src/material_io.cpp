#include <cmath>
#include <sstream>

#include "rollsim/errors.hpp"
#include "rollsim/io_util.hpp"
#include "rollsim/material.hpp"

namespace rollsim::material {
namespace {

const char* kRawHeader = "strain_rate_per_s,extension_mm,force_n";
const char* kConvertedHeader = "strain_rate_per_s,true_strain,true_stress_mpa";
const char* kModelMagic = "ROLLSIM-FSM v1";

std::string strip(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ')) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\xEF')) {
        if (s[i] == '\xEF') {  // UTF-8 BOM
            if (s.size() >= i + 3) i += 3;
            else break;
        } else {
            ++i;
        }
    }
    return s.substr(i);
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no, const std::string& why) {
    throw ValidationError(path + ":" + std::to_string(line_no) + ": " + why);
}

}  // namespace

std::vector<StressStrainSample> load_dataset(const std::string& path,
                                             double gauge_length_mm,
                                             double cross_section_mm2) {
    std::istringstream in(io::read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(path + ": empty dataset file");
    const std::string header = strip(line);
    bool raw;
    if (header == kRawHeader) {
        raw = true;
    } else if (header == kConvertedHeader) {
        raw = false;
    } else {
        parse_fail(path, 1, "unrecognized header '" + header + "'");
    }

    std::vector<StressStrainSample> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        const auto fields = io::split_csv_line(line);
        if (fields.size() != 3) parse_fail(path, line_no, "expected 3 fields");
        try {
            if (raw) {
                RawTensileRecord rec{
                    io::parse_double(fields[0], "strain_rate_per_s"),
                    io::parse_double(fields[1], "extension_mm"),
                    io::parse_double(fields[2], "force_n"),
                };
                samples.push_back(convert_raw(rec, gauge_length_mm, cross_section_mm2));
            } else {
                StressStrainSample s{
                    io::parse_double(fields[1], "true_strain"),
                    io::parse_double(fields[0], "strain_rate_per_s"),
                    io::parse_double(fields[2], "true_stress_mpa"),
                };
                if (!(s.strain_rate > 0.0)) throw ValidationError("strain_rate must be positive");
                if (s.true_strain < 0.0) throw ValidationError("true_strain must be >= 0");
                if (s.true_stress_mpa < 0.0) throw ValidationError("true_stress must be >= 0");
                samples.push_back(s);
            }
        } catch (const ValidationError& e) {
            parse_fail(path, line_no, e.what());
        }
    }
    if (samples.empty()) throw ValidationError(path + ": dataset has a header but no rows");
    return samples;
}

std::string serialize_model(const FlowStressModel& model) {
    std::ostringstream out;
    out << kModelMagic << "\n";
    out << "hidden_width " << model.hidden_width << "\n";
    out << "input_norm true_strain " << io::g17(model.input_norm[0].min) << " "
        << io::g17(model.input_norm[0].max) << "\n";
    out << "input_norm strain_rate " << io::g17(model.input_norm[1].min) << " "
        << io::g17(model.input_norm[1].max) << "\n";
    out << "output_norm true_stress_mpa " << io::g17(model.output_norm.min) << " "
        << io::g17(model.output_norm.max) << "\n";
    out << "training_seed " << model.training_seed << "\n";
    out << "input_weights\n";
    for (int j = 0; j < model.hidden_width; ++j)
        out << io::g17(model.input_weights[2 * j]) << " "
            << io::g17(model.input_weights[2 * j + 1]) << "\n";
    out << "input_biases\n";
    for (int j = 0; j < model.hidden_width; ++j)
        out << io::g17(model.input_biases[j]) << "\n";
    out << "output_weights\n";
    for (int j = 0; j < model.hidden_width; ++j)
        out << io::g17(model.output_weights[j]) << "\n";
    out << "output_bias " << io::g17(model.output_bias) << "\n";
    return out.str();
}

void save_model(const FlowStressModel& model, const std::string& path) {
    model.validate();
    io::atomic_write(path, serialize_model(model));
}

FlowStressModel load_model(const std::string& path) {
    std::istringstream in(io::read_file(path));
    std::string line, word;

    auto next_line = [&]() {
        if (!std::getline(in, line))
            throw ValidationError(path + ": truncated model file");
        line = strip(line);
    };

    next_line();
    if (line != kModelMagic)
        throw ValidationError(path + ": not a ROLLSIM-FSM v1 model file");

    FlowStressModel m;
    auto expect_kv = [&](const std::string& key) -> std::istringstream {
        next_line();
        std::istringstream ls(line);
        ls >> word;
        if (word != key)
            throw ValidationError(path + ": expected '" + key + "', found '" + word + "'");
        return ls;
    };

    {
        auto ls = expect_kv("hidden_width");
        if (!(ls >> m.hidden_width)) throw ValidationError(path + ": bad hidden_width");
    }
    for (int f = 0; f < 2; ++f) {
        auto ls = expect_kv("input_norm");
        std::string name;
        if (!(ls >> name >> m.input_norm[f].min >> m.input_norm[f].max))
            throw ValidationError(path + ": bad input_norm line");
    }
    {
        auto ls = expect_kv("output_norm");
        std::string name;
        if (!(ls >> name >> m.output_norm.min >> m.output_norm.max))
            throw ValidationError(path + ": bad output_norm line");
    }
    {
        auto ls = expect_kv("training_seed");
        if (!(ls >> m.training_seed)) throw ValidationError(path + ": bad training_seed");
    }
    if (m.hidden_width < 1) throw ValidationError(path + ": hidden_width must be >= 1");

    expect_kv("input_weights");
    m.input_weights.resize(2 * static_cast<std::size_t>(m.hidden_width));
    for (int j = 0; j < m.hidden_width; ++j) {
        next_line();
        std::istringstream ls(line);
        if (!(ls >> m.input_weights[2 * j] >> m.input_weights[2 * j + 1]))
            throw ValidationError(path + ": bad input_weights row");
    }
    expect_kv("input_biases");
    m.input_biases.resize(static_cast<std::size_t>(m.hidden_width));
    for (int j = 0; j < m.hidden_width; ++j) {
        next_line();
        std::istringstream ls(line);
        if (!(ls >> m.input_biases[j])) throw ValidationError(path + ": bad input_biases row");
    }
    expect_kv("output_weights");
    m.output_weights.resize(static_cast<std::size_t>(m.hidden_width));
    for (int j = 0; j < m.hidden_width; ++j) {
        next_line();
        std::istringstream ls(line);
        if (!(ls >> m.output_weights[j])) throw ValidationError(path + ": bad output_weights row");
    }
    {
        auto ls = expect_kv("output_bias");
        if (!(ls >> m.output_bias)) throw ValidationError(path + ": bad output_bias");
    }
    m.validate();
    return m;
}

}  // namespace rollsim::material
