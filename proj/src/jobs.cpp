#include "mixmf/jobs.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "mixmf/density.hpp"
#include "mixmf/dimension.hpp"
#include "mixmf/regularity.hpp"
#include "mixmf/theorems.hpp"

namespace mixmf {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string hash_hex(const JobConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(fnv1a64(cfg.source_text)));
  return buf;
}

// Numbers JSON can carry stay numbers; inf/nan become strings.
ordered_json json_num(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string join_path(const JobConfig& cfg, const std::string& file) {
  return (std::filesystem::path(cfg.output_dir) / file).string();
}

void write_text(const std::string& path, const std::string& body,
                std::vector<std::string>& files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << body;
  files.push_back(path);
}

void write_table(const JobConfig& cfg, const std::string& base,
                 const Table& t, std::vector<std::string>& files) {
  if (cfg.format == "csv") {
    std::string body;
    body += "# tool = mixmf\n";
    body += "# job = " + to_string(cfg.kind) + "\n";
    body += "# config = " + cfg.source_name + "\n";
    body += "# config_hash = " + hash_hex(cfg) + "\n";
    body += "# seed = " + std::to_string(cfg.seed) + "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      body += (c ? "," : "") + t.columns[c];
    }
    body += "\n";
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        body += (c ? "," : "") + row[c];
      }
      body += "\n";
    }
    write_text(join_path(cfg, base + ".csv"), body, files);
    return;
  }
  ordered_json j;
  j["meta"] = {{"tool", "mixmf"},
               {"job", to_string(cfg.kind)},
               {"config", cfg.source_name},
               {"config_hash", hash_hex(cfg)},
               {"seed", cfg.seed}};
  j["columns"] = t.columns;
  auto rows = ordered_json::array();
  for (const auto& row : t.rows) {
    auto jr = ordered_json::array();
    for (const auto& cell : row) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used == cell.size() && std::isfinite(v)) {
          jr.push_back(v);
          continue;
        }
      } catch (const std::exception&) {
      }
      jr.push_back(cell);
    }
    rows.push_back(jr);
  }
  j["rows"] = rows;
  write_text(join_path(cfg, base + ".json"), j.dump(2) + "\n", files);
}

void write_json(const JobConfig& cfg, const std::string& base,
                ordered_json j, std::vector<std::string>& files) {
  j["meta"] = {{"tool", "mixmf"},
               {"job", to_string(cfg.kind)},
               {"config", cfg.source_name},
               {"config_hash", hash_hex(cfg)},
               {"seed", cfg.seed}};
  write_text(join_path(cfg, base + ".json"), j.dump(2) + "\n", files);
}

const char* verdict_name(TheoremVerdict v) {
  switch (v) {
    case TheoremVerdict::pass: return "pass";
    case TheoremVerdict::fail: return "fail";
    case TheoremVerdict::non_informative: return "non_informative";
  }
  return "?";
}

const char* verdict_name(RegularityVerdict v) {
  switch (v) {
    case RegularityVerdict::exact_ahlfors: return "exact_ahlfors";
    case RegularityVerdict::quasi_ahlfors: return "quasi_ahlfors";
    case RegularityVerdict::not_at_this_alpha: return "not_at_this_alpha";
  }
  return "?";
}

ordered_json report_to_json(const TheoremReport& rep) {
  ordered_json q = ordered_json::object();
  for (const auto& [name, value] : rep.quantities) q[name] = json_num(value);
  return ordered_json{{"theorem_id", rep.theorem_id},
                      {"inputs", rep.inputs},
                      {"verdict", verdict_name(rep.verdict)},
                      {"tolerance", rep.tolerance},
                      {"seed", rep.seed},
                      {"note", rep.note},
                      {"quantities", q}};
}

int run_spectrum(const JobConfig& cfg, const VectorMeasure& vm,
                 std::vector<std::string>& files) {
  SpectrumOptions opts;
  opts.frozen.assign(vm.component_count(), 0.0);
  opts.threads = cfg.threads;
  const auto pts = legendre_spectrum(vm, cfg.q_grid, cfg.depths, opts);

  Table spectrum;
  spectrum.columns = {"q", "tau", "alpha", "f_alpha", "ok"};
  for (const auto& p : pts) {
    spectrum.rows.push_back({fmt(p.q), fmt(p.tau), fmt(p.alpha),
                             fmt(p.f_alpha), p.ok ? "1" : "0"});
  }
  write_table(cfg, "spectrum", spectrum, files);

  Table roots;
  roots.columns = {"q",    "kind",   "depth",  "root",
                   "residual", "oracle", "abs_err"};
  std::vector<double> qv(vm.component_count(), 0.0);
  for (double qg : cfg.q_grid) {
    qv[0] = qg;
    const DimensionEstimate est =
        cutoff_t(vm, qv, DimKind::hausdorff, cfg.depths);
    for (const auto& r : est.per_depth_roots) {
      const double oracle = est.oracle.value_or(
          std::numeric_limits<double>::quiet_NaN());
      roots.rows.push_back({fmt(qg), "hausdorff", std::to_string(r.depth),
                            fmt(r.root), fmt(r.residual), fmt(oracle),
                            fmt(std::abs(r.root - oracle))});
    }
  }
  write_table(cfg, "roots", roots, files);
  return 0;
}

int run_density(const JobConfig& cfg, const VectorMeasure& vm,
                std::vector<std::string>& files) {
  double t;
  if (cfg.t_override) {
    t = *cfg.t_override;
  } else {
    t = cutoff_t(vm, cfg.q, DimKind::hausdorff, cfg.depths).limit;
  }
  KernelParams params{cfg.q, t};

  std::vector<double> pts =
      vm.sample_support_points(cfg.samples, 20, cfg.seed);
  pts.insert(pts.end(), cfg.user_points.begin(), cfg.user_points.end());

  Table table;
  table.columns = {"x"};
  for (std::size_t j = 0; j < cfg.q.size(); ++j) {
    table.columns.push_back("q" + std::to_string(j));
  }
  table.columns.insert(table.columns.end(),
                       {"t", "lower", "upper", "in_K", "in_T"});
  std::size_t skipped = 0;
  for (double x : pts) {
    PointClassification cls;
    try {
      cls = classify_point(vm, x, params, cfg.depths);
    } catch (const std::domain_error&) {
      ++skipped;
      continue;
    }
    std::vector<std::string> row{fmt(x)};
    for (double qj : cfg.q) row.push_back(fmt(qj));
    row.push_back(fmt(t));
    row.push_back(fmt(cls.d_lower));
    row.push_back(fmt(cls.d_upper));
    row.push_back(cls.in_K ? "1" : "0");
    row.push_back(cls.in_T ? "1" : "0");
    table.rows.push_back(std::move(row));
  }
  write_table(cfg, "density", table, files);

  RadiusSchedule schedule{cfg.r0, cfg.rho, cfg.radius_steps};
  const SandwichReport rep =
      sandwich_check(vm.component(0), vm, params, cfg.depths.back(),
                     std::max<std::size_t>(cfg.samples, 8), cfg.seed,
                     schedule);
  ordered_json j{{"theta_total", json_num(rep.theta_total)},
                 {"h_hat", json_num(rep.h_hat)},
                 {"p_hat", json_num(rep.p_hat)},
                 {"inf_upper", json_num(rep.inf_upper)},
                 {"sup_upper", json_num(rep.sup_upper)},
                 {"inf_lower", json_num(rep.inf_lower)},
                 {"sup_lower", json_num(rep.sup_lower)},
                 {"hausdorff_ok", rep.hausdorff_ok},
                 {"packing_ok", rep.packing_ok},
                 {"non_informative", rep.non_informative},
                 {"points_used", rep.points_used},
                 {"points_skipped", rep.points_skipped},
                 {"classify_skipped", skipped},
                 {"t", json_num(t)}};
  write_json(cfg, "sandwich", std::move(j), files);
  return 0;
}

int run_regularity(const JobConfig& cfg, const VectorMeasure& vm,
                   std::vector<std::string>& files) {
  const RegularityReport reg =
      quasi_ahlfors_index(vm.reference(), cfg.depths);
  const RegularityReport shifted =
      quasi_ahlfors_scan(vm.reference(), reg.alpha_hat + 0.05, cfg.depths);
  const VectorDoublingReport dbl =
      is_doubling(vm, 2.0, cfg.depths, cfg.samples, cfg.seed);

  Table table;
  table.columns = {"trace", "name", "depth", "value"};
  for (const auto& [d, v] : reg.per_depth) {
    table.rows.push_back(
        {"ahlfors", "reference", std::to_string(d), fmt(v)});
  }
  for (const auto& [d, v] : shifted.per_depth) {
    table.rows.push_back(
        {"ahlfors_shifted", "reference", std::to_string(d), fmt(v)});
  }
  for (std::size_t i = 0; i < dbl.components.size(); ++i) {
    for (const auto& [d, v] : dbl.components[i].per_depth_sup) {
      table.rows.push_back({"doubling", "component_" + std::to_string(i),
                            std::to_string(d), fmt(v)});
    }
  }
  for (const auto& [d, v] : dbl.reference.per_depth_sup) {
    table.rows.push_back(
        {"doubling", "reference", std::to_string(d), fmt(v)});
  }
  write_table(cfg, "regularity", table, files);

  ordered_json comps = ordered_json::array();
  for (const auto& c : dbl.components) comps.push_back(json_num(c.P_a_hat));
  ordered_json j{{"alpha_hat", json_num(reg.alpha_hat)},
                 {"M_hat", json_num(reg.M_hat)},
                 {"verdict", verdict_name(reg.verdict)},
                 {"shifted_alpha", json_num(shifted.alpha_used)},
                 {"shifted_verdict", verdict_name(shifted.verdict)},
                 {"doubling_a", dbl.a},
                 {"P_a_components", comps},
                 {"P_a_reference", json_num(dbl.reference.P_a_hat)},
                 {"P_a_product", json_num(dbl.product)},
                 {"in_P_D", dbl.in_P_D}};
  write_json(cfg, "regularity", std::move(j), files);
  return 0;
}

int run_verify(const JobConfig& cfg, const VectorMeasure& vm,
               std::vector<std::string>& files) {
  std::vector<TheoremReport> reports;
  if (vm.component_count() == 1) {
    reports.push_back(verify_billingsley(vm, vm.reference(), cfg.q_grid,
                                         cfg.depths));
  }
  DensitySetOptions opts;
  opts.samples = cfg.samples;
  opts.seed = cfg.seed;
  opts.t_override = cfg.t_override;
  reports.push_back(
      verify_dimension_of_density_sets(vm, cfg.q, cfg.depths, opts));

  ordered_json arr = ordered_json::array();
  bool any_fail = false, any_noninf = false;
  for (const auto& rep : reports) {
    arr.push_back(report_to_json(rep));
    any_fail = any_fail || rep.verdict == TheoremVerdict::fail;
    any_noninf =
        any_noninf || rep.verdict == TheoremVerdict::non_informative;
  }
  write_json(cfg, "theorems", ordered_json{{"reports", arr}}, files);
  return any_fail ? 2 : (any_noninf ? 3 : 0);
}

}  // namespace

JobOutcome run_job(const JobConfig& cfg) {
  validate_config(cfg);
  std::filesystem::create_directories(cfg.output_dir);
  const VectorMeasure vm = build_vector(cfg);

  JobOutcome outcome;
  switch (cfg.kind) {
    case JobKind::spectrum:
      outcome.exit_code = run_spectrum(cfg, vm, outcome.files);
      break;
    case JobKind::density:
      outcome.exit_code = run_density(cfg, vm, outcome.files);
      break;
    case JobKind::regularity:
      outcome.exit_code = run_regularity(cfg, vm, outcome.files);
      break;
    case JobKind::verify:
      outcome.exit_code = run_verify(cfg, vm, outcome.files);
      break;
  }
  return outcome;
}

}  // namespace mixmf
