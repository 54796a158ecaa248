#pragma once

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "magvol/reports.hpp"

namespace magvol {

// One process runs one command; everything needed to reproduce a run is in
// the config (and echoed into the report).
struct RunConfig {
  std::string command;
  std::string body_path;
  std::string points_path;
  std::string measure_spec = "l1";
  std::uint64_t seed = 20240214;  // fixed default, not wall clock
  std::int64_t samples = 1'000'000;
  double epsilon = 0.25;
  std::vector<double> ts;
  int grid_k = 0;
  double tol = 1e-9;
  int max_iter = 100000;
  int workers = 1;
  std::string format = "json";
  bool normalized = false;
};

namespace detail {

inline std::vector<Vec> require_points(const RunConfig& cfg) {
  require(!cfg.points_path.empty(), ErrorKind::InvalidArgument,
          "--points FILE is required for this command");
  return load_points(cfg.points_path);
}

inline ConvexBody require_body(const RunConfig& cfg) {
  require(!cfg.body_path.empty(), ErrorKind::InvalidArgument,
          "--body FILE is required for this command");
  return load_body(cfg.body_path);
}

inline std::vector<double> default_ts(const RunConfig& cfg, std::vector<double> fallback) {
  return cfg.ts.empty() ? fallback : cfg.ts;
}

}  // namespace detail

inline Json run_to_json(const RunConfig& cfg) {
  const std::string& c = cfg.command;
  if (c == "magnitude" || c == "maxdiv") {
    const std::vector<Vec> points = detail::require_points(cfg);
    require(!points.empty(), ErrorKind::InvalidArgument, "points file contains no points");
    const int dim = static_cast<int>(points.front().size());
    const NormSpec norm = parse_norm_spec(cfg.measure_spec, dim);
    if (c == "magnitude") return magnitude_report(points, norm, cfg.measure_spec, cfg.workers);
    return maxdiv_report(points, norm, cfg.measure_spec, cfg.tol, cfg.max_iter, cfg.workers);
  }
  if (c == "l1iv") return l1iv_report(detail::require_body(cfg), cfg.workers);
  if (c == "htiv") {
    const ConvexBody body = detail::require_body(cfg);
    const GeneratingMeasure measure = parse_measure_spec(cfg.measure_spec, body.dim());
    return htiv_report(body, measure, cfg.measure_spec, cfg.normalized, cfg.workers);
  }
  if (c == "bound") {
    const ConvexBody body = detail::require_body(cfg);
    const GeneratingMeasure measure = parse_measure_spec(cfg.measure_spec, body.dim());
    return bound_report(body, measure, cfg.measure_spec, cfg.workers);
  }
  if (c == "l1exact") return l1exact_report(detail::require_body(cfg), cfg.workers);
  if (c == "mahler")
    return mahler_report(detail::require_body(cfg), cfg.samples, cfg.seed, cfg.workers);
  if (c == "sudakov")
    return sudakov_report(detail::require_body(cfg), cfg.epsilon, cfg.seed, cfg.grid_k,
                          cfg.workers);
  if (c == "steiner")
    return steiner_report(detail::require_body(cfg), detail::default_ts(cfg, {0.25, 0.5, 1.0, 2.0}),
                          cfg.workers);
  if (c == "wills") return wills_report(detail::require_body(cfg), cfg.workers);
  if (c == "smallt") {
    const ConvexBody body = detail::require_body(cfg);
    const GeneratingMeasure measure = parse_measure_spec(cfg.measure_spec, body.dim());
    return smallt_report(body, measure, cfg.measure_spec,
                         detail::default_ts(cfg, {0.1, 0.05, 0.01}), cfg.grid_k, cfg.workers);
  }
  fail(ErrorKind::InvalidArgument, "unknown command: " + c);
}

// Exit codes: 0 success, 1 I/O failure, 2 domain error (reported as a
// machine-readable object on stdout).
inline int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Json report = run_to_json(cfg);
    if (cfg.format == "csv") {
      out << report_to_csv(report);
    } else {
      require(cfg.format == "json", ErrorKind::InvalidArgument,
              "--format must be json or csv, got \"" + cfg.format + "\"");
      out << report.dump(2) << "\n";
    }
    return 0;
  } catch (const DomainError& e) {
    Json j;
    j["error"]["kind"] = e.kind_name();
    j["error"]["message"] = e.what();
    out << j.dump(2) << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace magvol
