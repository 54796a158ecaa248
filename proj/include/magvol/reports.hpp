#pragma once

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>

#include "magvol/body_io.hpp"
#include "magvol/bounds.hpp"
#include "magvol/intrinsic_volumes.hpp"

namespace magvol {

inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

namespace detail {

inline Json iv_to_json(const IntrinsicVolumeVector& v) {
  Json j;
  j["kind"] = iv_kind_name(v.kind);
  j["values"] = Json::array();
  for (double x : v.values) j["values"].push_back(x);
  j["provenance"] = v.exact() ? "exact" : "montecarlo";
  if (!v.exact()) {
    j["std_err"] = Json::array();
    for (double x : v.std_err) j["std_err"].push_back(x);
  }
  return j;
}

inline Json mc_to_json(const McEstimate& e) {
  Json j;
  j["value"] = e.value;
  j["std_err"] = e.std_err;
  j["samples"] = e.samples;
  j["seed"] = e.seed;
  return j;
}

}  // namespace detail

// Shared report envelope: every pipeline emits inputs, seeds, tolerances,
// outputs, and caveats, plus a digest of the fully resolved inputs so that
// downstream comparisons are traceable to exactly what ran.
class ReportBuilder {
 public:
  ReportBuilder(const std::string& command, int workers) {
    report_["command"] = command;
    report_["workers"] = workers;
    report_["inputs"] = Json::object();
    report_["seeds"] = Json::object();
    report_["tolerances"] = Json::object();
    report_["outputs"] = Json::object();
    report_["caveats"] = Json::object();
  }

  Json& inputs() { return report_["inputs"]; }
  Json& seeds() { return report_["seeds"]; }
  Json& tolerances() { return report_["tolerances"]; }
  Json& outputs() { return report_["outputs"]; }
  Json& caveats() { return report_["caveats"]; }

  // Digest over command + inputs + seeds + tolerances, with `extra` carrying
  // any resolved payloads (full atom lists etc.) that the inputs section only
  // summarizes.
  Json finish(const std::string& extra = "") {
    Json id;
    id["command"] = report_["command"];
    id["inputs"] = report_["inputs"];
    id["seeds"] = report_["seeds"];
    id["tolerances"] = report_["tolerances"];
    report_["digest"] = hex64(fnv1a64(id.dump() + extra));
    Json out = report_;
    // Keep a stable key order: digest right after command.
    Json ordered;
    ordered["command"] = out["command"];
    ordered["digest"] = out["digest"];
    ordered["workers"] = out["workers"];
    ordered["inputs"] = out["inputs"];
    ordered["seeds"] = out["seeds"];
    ordered["tolerances"] = out["tolerances"];
    ordered["outputs"] = out["outputs"];
    ordered["caveats"] = out["caveats"];
    return ordered;
  }

 private:
  Json report_;
};

inline Json measure_summary(const GeneratingMeasure& m, const std::string& spec) {
  Json j;
  j["spec"] = spec;
  j["atoms"] = m.size();
  j["dim"] = m.dim();
  j["spans"] = m.spans();
  return j;
}

// ---------------------------------------------------------------------------
// Per-command reports
// ---------------------------------------------------------------------------

inline Json magnitude_report(const std::vector<Vec>& points, const NormSpec& norm,
                             const std::string& norm_spec, int workers) {
  ReportBuilder rb("magnitude", workers);
  rb.inputs()["points"] = points.size();
  rb.inputs()["norm"] = norm_spec;
  const FiniteMetricSpace space = build_space(points, norm);
  const PdReport pd = check_positive_definite(space);
  const double mag = magnitude(space);
  rb.outputs()["magnitude"] = mag;
  rb.outputs()["is_positive_definite"] = pd.is_pd;
  rb.outputs()["min_eig"] = pd.min_eig;
  if (norm.is_measure() && norm.measure()->target_norm_error())
    rb.caveats()["measure_norm_error"] = *norm.measure()->target_norm_error();
  return rb.finish(detail::vecs_to_json(points).dump());
}

inline Json maxdiv_report(const std::vector<Vec>& points, const NormSpec& norm,
                          const std::string& norm_spec, double tol, int max_iter, int workers) {
  ReportBuilder rb("maxdiv", workers);
  rb.inputs()["points"] = points.size();
  rb.inputs()["norm"] = norm_spec;
  rb.tolerances()["kkt_tol"] = tol;
  rb.inputs()["max_iter"] = max_iter;
  const FiniteMetricSpace space = build_space(points, norm);
  const DiversityWeights dw = max_diversity(space, tol, max_iter);
  rb.outputs()["max_diversity"] = dw.max_diversity;
  rb.outputs()["objective"] = dw.objective;
  rb.outputs()["weights"] = detail::vec_to_json(dw.v);
  rb.outputs()["kkt_residual"] = dw.kkt_residual;
  rb.outputs()["certified"] = dw.certified;
  rb.outputs()["iterations"] = dw.iterations;
  if (!dw.certified) rb.caveats()["iteration_limit"] = "KKT residual above tolerance";
  return rb.finish(detail::vecs_to_json(points).dump());
}

inline Json l1iv_report(const ConvexBody& body, int workers) {
  ReportBuilder rb("l1iv", workers);
  rb.inputs()["body"] = body_to_json(body);
  rb.outputs()["v_prime"] = detail::iv_to_json(l1_intrinsic_volumes(body));
  return rb.finish();
}

inline Json htiv_report(const ConvexBody& body, const GeneratingMeasure& measure,
                        const std::string& measure_spec, bool normalized, int workers) {
  ReportBuilder rb("htiv", workers);
  rb.inputs()["body"] = body_to_json(body);
  rb.inputs()["measure"] = measure_summary(measure, measure_spec);
  IntrinsicVolumeVector mu = ht_intrinsic_volumes(body, measure);
  rb.outputs()["mu"] = detail::iv_to_json(mu);
  if (normalized)
    rb.outputs()["mu_normalized"] =
        detail::iv_to_json(normalize(mu, IntrinsicConstants::upto(mu.top_index())));
  if (measure.target_norm_error()) rb.caveats()["measure_norm_error"] = *measure.target_norm_error();
  return rb.finish(measure_to_json(measure).dump());
}

inline Json bound_report(const ConvexBody& body, const GeneratingMeasure& measure,
                         const std::string& measure_spec, int workers) {
  ReportBuilder rb("bound", workers);
  rb.inputs()["body"] = body_to_json(body);
  rb.inputs()["measure"] = measure_summary(measure, measure_spec);
  const BoundReport br = magnitude_upper_bound(body, measure);
  rb.outputs()["sum_bound"] = br.sum_bound;
  rb.outputs()["exp_bound"] = br.exp_bound;
  rb.outputs()["mu"] = detail::iv_to_json(br.mu);
  if (br.caveat_norm_error) rb.caveats()["measure_norm_error"] = *br.caveat_norm_error;
  return rb.finish(measure_to_json(measure).dump());
}

inline Json l1exact_report(const ConvexBody& body, int workers) {
  ReportBuilder rb("l1exact", workers);
  rb.inputs()["body"] = body_to_json(body);
  rb.outputs()["magnitude"] = l1_magnitude_exact(body);
  rb.outputs()["v_prime"] = detail::iv_to_json(l1_intrinsic_volumes(body));
  return rb.finish();
}

inline Json mahler_report(const ConvexBody& body, std::int64_t samples, std::uint64_t seed,
                          int workers) {
  ReportBuilder rb("mahler", workers);
  rb.inputs()["body"] = body_to_json(body);
  rb.inputs()["samples"] = samples;
  rb.seeds()["seed"] = seed;
  const MahlerReport mr = mahler_pipeline(body, samples, seed);
  rb.outputs()["vol_z"] = mr.vol_z;
  rb.outputs()["vol_polar"] = detail::mc_to_json(mr.vol_polar);
  rb.outputs()["product"] = mr.product;
  rb.outputs()["product_std_err"] = mr.product_std_err;
  rb.outputs()["bound"] = mr.bound;
  rb.outputs()["slack_sigmas"] = mr.slack_sigmas;
  Json rows = Json::array();
  for (const auto& r : mr.t_rows) {
    Json row;
    row["t"] = r[0];
    row["mag_lower_bound"] = r[1];
    row["sum_bound_top_term"] = r[2];
    rows.push_back(std::move(row));
  }
  rb.outputs()["t_rows"] = std::move(rows);
  rb.caveats()["vol_polar_is_monte_carlo"] = true;
  return rb.finish();
}

inline Json sudakov_report(const ConvexBody& body, double epsilon, std::uint64_t seed, int grid_k,
                           int workers) {
  ReportBuilder rb("sudakov", workers);
  rb.inputs()["body"] = body_to_json(body);
  rb.inputs()["epsilon"] = epsilon;
  rb.inputs()["grid_k"] = grid_k;
  rb.seeds()["seed"] = seed;
  const PackingResult pr = sudakov_pipeline(body, epsilon, seed, grid_k);
  rb.outputs()["count"] = pr.count;
  rb.outputs()["t_star"] = pr.t_star;
  rb.outputs()["mag_lower"] = pr.mag_lower;
  rb.outputs()["counting_bound"] = pr.counting_bound;
  rb.outputs()["bound_ok"] = pr.bound_ok;
  rb.outputs()["centers"] = detail::vecs_to_json(pr.centers);
  if (pr.sudakov_ratio) rb.outputs()["v1_over_eps_sqrt_logN"] = *pr.sudakov_ratio;
  rb.caveats()["packing_is_greedy"] = "greedy farthest-point packing, not maximal";
  return rb.finish();
}

inline Json steiner_report(const ConvexBody& body, const std::vector<double>& ts, int workers) {
  ReportBuilder rb("steiner", workers);
  rb.inputs()["body"] = body_to_json(body);
  rb.inputs()["ts"] = Json(ts);
  rb.tolerances()["max_rel_dev"] = 1e-9;
  const SteinerReport sr = steiner_check(body, ts);
  rb.outputs()["v_prime"] = detail::iv_to_json(sr.v_prime);
  Json rows = Json::array();
  for (const auto& r : sr.rows) {
    Json row;
    row["t"] = r.t;
    row["minkowski_area"] = r.minkowski_area;
    row["polynomial"] = r.polynomial;
    rows.push_back(std::move(row));
  }
  rb.outputs()["rows"] = std::move(rows);
  rb.outputs()["max_abs_dev"] = sr.max_abs_dev;
  rb.outputs()["max_rel_dev"] = sr.max_rel_dev;
  rb.outputs()["ok"] = sr.max_rel_dev <= 1e-9;
  return rb.finish();
}

inline Json wills_report(const ConvexBody& body, int workers) {
  ReportBuilder rb("wills", workers);
  rb.inputs()["body"] = body_to_json(body);
  const WillsReport wr = wills_check(body);
  rb.outputs()["count"] = wr.count;
  rb.outputs()["wills"] = wr.wills;
  rb.outputs()["ok"] = wr.ok;
  return rb.finish();
}

inline Json smallt_report(const ConvexBody& body, const GeneratingMeasure& measure,
                          const std::string& measure_spec, const std::vector<double>& ts,
                          int grid_k, int workers) {
  ReportBuilder rb("smallt", workers);
  rb.inputs()["body"] = body_to_json(body);
  rb.inputs()["measure"] = measure_summary(measure, measure_spec);
  rb.inputs()["ts"] = Json(ts);
  rb.inputs()["grid_k"] = grid_k;
  const SmallTReport sr = small_t_slope_check(body, measure, ts, grid_k);
  rb.outputs()["mu1"] = sr.mu1;
  rb.outputs()["slope_bound"] = sr.slope_bound;
  Json rows = Json::array();
  for (const auto& r : sr.rows) {
    Json row;
    row["t"] = r.t;
    row["grid_magnitude"] = r.grid_magnitude;
    row["slope"] = r.slope;
    row["sum_bound"] = r.sum_bound;
    row["ok"] = r.ok;
    row["slope_at_most_first_order"] = r.slope_at_most_first_order;
    rows.push_back(std::move(row));
  }
  rb.outputs()["rows"] = std::move(rows);
  rb.outputs()["all_ok"] = sr.all_ok;
  rb.caveats()["grid_magnitude_is_lower_bound"] = true;
  if (measure.target_norm_error()) rb.caveats()["measure_norm_error"] = *measure.target_norm_error();
  return rb.finish(measure_to_json(measure).dump());
}

// CSV rows for the sweep pipelines.
inline std::string report_to_csv(const Json& report) {
  std::ostringstream os;
  const std::string command = report["command"].get<std::string>();
  auto dump_rows = [&](const Json& rows) {
    bool header = false;
    for (const auto& row : rows) {
      if (!header) {
        bool first = true;
        for (auto it = row.begin(); it != row.end(); ++it) {
          os << (first ? "" : ",") << it.key();
          first = false;
        }
        os << "\n";
        header = true;
      }
      bool first = true;
      for (auto it = row.begin(); it != row.end(); ++it) {
        os << (first ? "" : ",") << it.value().dump();
        first = false;
      }
      os << "\n";
    }
  };
  if (command == "mahler")
    dump_rows(report["outputs"]["t_rows"]);
  else if (command == "steiner" || command == "smallt")
    dump_rows(report["outputs"]["rows"]);
  else
    fail(ErrorKind::InvalidArgument, "--format csv is only available for mahler, steiner, smallt");
  return os.str();
}

}  // namespace magvol
