#include "mixmf/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mixmf {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail_at(const std::string& name, std::size_t line,
                          const std::string& msg) {
  throw std::runtime_error(name + ":" + std::to_string(line) + ": " + msg);
}

std::vector<double> parse_reals(const std::string& name, std::size_t line,
                                const std::string& value) {
  std::vector<double> out;
  std::istringstream iss(value);
  std::string tok;
  while (iss >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      fail_at(name, line, "expected a real number, got '" + tok + "'");
    }
  }
  return out;
}

std::vector<int> parse_ints(const std::string& name, std::size_t line,
                            const std::string& value) {
  std::vector<int> out;
  for (double v : parse_reals(name, line, value)) {
    if (v != std::floor(v)) {
      fail_at(name, line, "expected an integer list");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

double parse_one_real(const std::string& name, std::size_t line,
                      const std::string& value) {
  const auto v = parse_reals(name, line, value);
  if (v.size() != 1) fail_at(name, line, "expected exactly one number");
  return v[0];
}

std::vector<std::string> split_words(const std::string& value) {
  std::vector<std::string> out;
  std::istringstream iss(value);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string to_string(JobKind kind) {
  switch (kind) {
    case JobKind::spectrum: return "spectrum";
    case JobKind::density: return "density";
    case JobKind::regularity: return "regularity";
    case JobKind::verify: return "verify";
  }
  return "?";
}

JobConfig parse_config_text(const std::string& text,
                            const std::string& name) {
  JobConfig cfg;
  cfg.source_name = name;
  cfg.source_text = text;

  enum class Section { none, measure, vector_sec, job };
  Section sec = Section::none;
  std::string measure_name;
  CascadeSpec* spec = nullptr;

  std::istringstream stream(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail_at(name, line_no, "unterminated section");
      const std::string inside = trim(line.substr(1, line.size() - 2));
      if (inside.rfind("measure", 0) == 0) {
        measure_name = trim(inside.substr(7));
        if (measure_name.empty()) {
          fail_at(name, line_no, "[measure] needs a name");
        }
        if (cfg.measures.count(measure_name)) {
          fail_at(name, line_no,
                  "duplicate measure '" + measure_name + "'");
        }
        spec = &cfg.measures[measure_name];
        sec = Section::measure;
      } else if (inside == "vector") {
        sec = Section::vector_sec;
      } else if (inside == "job") {
        sec = Section::job;
      } else {
        fail_at(name, line_no, "unknown section '" + inside + "'");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail_at(name, line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_at(name, line_no, "empty key");

    switch (sec) {
      case Section::none:
        fail_at(name, line_no, "key outside any section");
      case Section::measure: {
        if (key == "base_count") {
          const double v = parse_one_real(name, line_no, value);
          if (v < 2 || v != std::floor(v)) {
            fail_at(name, line_no, "base_count must be an integer >= 2");
          }
          spec->base_count = static_cast<std::size_t>(v);
        } else if (key == "ratios") {
          spec->ratios = parse_reals(name, line_no, value);
        } else if (key == "offsets") {
          spec->offsets = parse_reals(name, line_no, value);
        } else if (key == "weights") {
          spec->weights = parse_reals(name, line_no, value);
        } else {
          fail_at(name, line_no, "unknown key '" + key + "' in [measure " +
                                     measure_name + "]");
        }
        break;
      }
      case Section::vector_sec: {
        if (key == "components") {
          cfg.component_names = split_words(value);
        } else if (key == "reference") {
          cfg.reference_name = value;
        } else {
          fail_at(name, line_no, "unknown key '" + key + "' in [vector]");
        }
        break;
      }
      case Section::job: {
        if (key == "kind") {
          if (value == "spectrum") cfg.kind = JobKind::spectrum;
          else if (value == "density") cfg.kind = JobKind::density;
          else if (value == "regularity") cfg.kind = JobKind::regularity;
          else if (value == "verify") cfg.kind = JobKind::verify;
          else fail_at(name, line_no, "unknown job kind '" + value + "'");
        } else if (key == "q_grid") {
          cfg.q_grid = parse_reals(name, line_no, value);
        } else if (key == "q") {
          cfg.q = parse_reals(name, line_no, value);
        } else if (key == "t") {
          cfg.t_override = parse_one_real(name, line_no, value);
        } else if (key == "depths") {
          cfg.depths = parse_ints(name, line_no, value);
        } else if (key == "points") {
          cfg.user_points = parse_reals(name, line_no, value);
        } else if (key == "r0") {
          cfg.r0 = parse_one_real(name, line_no, value);
        } else if (key == "rho") {
          cfg.rho = parse_one_real(name, line_no, value);
        } else if (key == "radius_steps") {
          cfg.radius_steps = static_cast<std::size_t>(
              parse_one_real(name, line_no, value));
        } else if (key == "samples") {
          cfg.samples = static_cast<std::size_t>(
              parse_one_real(name, line_no, value));
        } else if (key == "seed") {
          cfg.seed = static_cast<std::uint64_t>(
              parse_one_real(name, line_no, value));
        } else if (key == "threads") {
          cfg.threads = static_cast<unsigned>(
              parse_one_real(name, line_no, value));
        } else if (key == "output") {
          cfg.output_dir = value;
        } else if (key == "format") {
          cfg.format = value;
        } else {
          fail_at(name, line_no, "unknown key '" + key + "' in [job]");
        }
        break;
      }
    }
  }
  return cfg;
}

JobConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("config: cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void validate_config(const JobConfig& cfg) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
  };

  if (cfg.measures.empty()) fail("no [measure] sections");
  if (cfg.component_names.empty()) fail("[vector] lists no components");
  if (cfg.reference_name.empty()) fail("[vector] names no reference");
  for (const auto& n : cfg.component_names) {
    if (!cfg.measures.count(n)) fail("unknown component measure '" + n + "'");
  }
  if (!cfg.measures.count(cfg.reference_name)) {
    fail("unknown reference measure '" + cfg.reference_name + "'");
  }

  if (cfg.depths.empty()) fail("[job] needs depths");
  for (std::size_t i = 0; i < cfg.depths.size(); ++i) {
    if (cfg.depths[i] < 1 ||
        (i > 0 && cfg.depths[i] <= cfg.depths[i - 1])) {
      fail("depths must be strictly increasing and >= 1");
    }
  }
  const auto& ref_spec = cfg.measures.at(cfg.reference_name);
  const double b = static_cast<double>(ref_spec.base_count);
  if (static_cast<double>(cfg.depths.back()) * std::log2(b) > 40.0 + 1e-9) {
    fail("deepest depth exceeds the 2^40 cell enumeration cap; reduce "
         "depths");
  }

  const std::size_t k = cfg.component_names.size();
  switch (cfg.kind) {
    case JobKind::spectrum: {
      if (cfg.q_grid.size() < 3) fail("spectrum needs a q_grid of >= 3");
      for (std::size_t i = 1; i < cfg.q_grid.size(); ++i) {
        if (!(cfg.q_grid[i] > cfg.q_grid[i - 1])) {
          fail("q_grid must be strictly increasing");
        }
      }
      break;
    }
    case JobKind::density: {
      if (cfg.q.size() != k) fail("density needs q with one entry per "
                                  "component");
      if (cfg.samples < 8) fail("density needs samples >= 8");
      break;
    }
    case JobKind::regularity: {
      if (cfg.samples < 64) fail("regularity needs samples >= 64");
      break;
    }
    case JobKind::verify: {
      if (cfg.q.size() != k) fail("verify needs q with one entry per "
                                  "component");
      if (cfg.q_grid.empty()) fail("verify needs a q_grid");
      if (cfg.samples < 64) fail("verify needs samples >= 64");
      break;
    }
  }

  if (!(cfg.r0 > 0.0) || !(cfg.rho > 0.0) || !(cfg.rho < 1.0) ||
      cfg.radius_steps < 4) {
    fail("radius schedule needs r0 > 0, rho in (0,1), radius_steps >= 4");
  }
  if (cfg.threads < 1) fail("threads must be >= 1");
  if (cfg.format != "csv" && cfg.format != "json") {
    fail("format must be csv or json");
  }
  if (cfg.output_dir.empty()) fail("output directory must be non-empty");

  // Full structural validation of every measure, up front.
  for (const auto& [mname, spec] : cfg.measures) {
    try {
      (void)build_measure(spec);
    } catch (const std::invalid_argument& e) {
      fail("measure '" + mname + "': " + e.what());
    }
  }
  try {
    (void)build_vector(cfg);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

VectorMeasure build_vector(const JobConfig& cfg) {
  std::vector<SelfSimilarMeasure> components;
  components.reserve(cfg.component_names.size());
  for (const auto& n : cfg.component_names) {
    components.push_back(build_measure(cfg.measures.at(n)));
  }
  return VectorMeasure(std::move(components),
                       build_measure(cfg.measures.at(cfg.reference_name)));
}

}  // namespace mixmf
