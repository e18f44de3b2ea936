#pragma once

// Flat sectioned config files describing measures, the analyzed vector,
// and one job per file, plus semantic validation and the measure builder.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mixmf/measure.hpp"

namespace mixmf {

enum class JobKind { spectrum, density, regularity, verify };

struct JobConfig {
  std::map<std::string, CascadeSpec> measures;
  std::vector<std::string> component_names;
  std::string reference_name;

  JobKind kind = JobKind::spectrum;
  std::vector<double> q_grid;  // spectrum sweep / verify relation grid
  std::vector<double> q;       // fixed q vector for density and verify
  std::optional<double> t_override;
  std::vector<int> depths;
  std::vector<double> user_points;

  double r0 = 0.25;
  double rho = 0.5;
  std::size_t radius_steps = 40;

  std::size_t samples = 256;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string output_dir = "out";
  std::string format = "csv";  // csv | json

  std::string source_name;  // diagnostics label
  std::string source_text;  // raw bytes, hashed into output headers
};

// Parses the sectioned key = value format. Sections: [measure <name>]
// (repeatable), [vector], [job]. '#' starts a comment. Errors carry
// "<name>:<line>: <message>" diagnostics.
JobConfig parse_config_text(const std::string& text, const std::string& name);
JobConfig parse_config_file(const std::string& path);

// Semantic validation: names resolve, job-specific parameters present,
// depth/enumeration caps respected. Throws std::invalid_argument.
void validate_config(const JobConfig& cfg);

// Builds the measure vector the config describes.
VectorMeasure build_vector(const JobConfig& cfg);

// FNV-1a 64-bit, used to stamp outputs with the config they came from.
std::uint64_t fnv1a64(std::string_view bytes);

std::string to_string(JobKind kind);

}  // namespace mixmf
