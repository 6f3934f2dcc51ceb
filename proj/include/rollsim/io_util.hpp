#pragma once

#include <string>
#include <vector>

namespace rollsim::io {

// Full round-trip formatting for doubles (17 significant digits).
std::string g17(double v);

// Writes via a temporary file in the same directory, then renames. Emitted
// files are therefore never observed half-written.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// Splits one CSV line on commas; no quoting support (none of our formats
// quote), trims trailing CR.
std::vector<std::string> split_csv_line(const std::string& line);

// Strict double parse; throws ValidationError mentioning `context` otherwise.
double parse_double(const std::string& text, const std::string& context);

}  // namespace rollsim::io
