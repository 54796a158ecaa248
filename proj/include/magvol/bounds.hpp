#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "magvol/convex_bodies.hpp"
#include "magvol/errors.hpp"
#include "magvol/finite_metric.hpp"
#include "magvol/generating_measures.hpp"
#include "magvol/intrinsic_volumes.hpp"

namespace magvol {

// Magnitude upper bounds for a convex body in the hypermetric normed space of
// a generating measure:
//
//   Mag(K) <= sum_{m=0}^n 4^{-m} mu_m(K) <= exp(mu_1(K) / 4).
struct BoundReport {
  double sum_bound = 0.0;
  double exp_bound = 0.0;
  IntrinsicVolumeVector mu;
  std::optional<double> caveat_norm_error;
};

inline BoundReport magnitude_upper_bound(const ConvexBody& body,
                                         const GeneratingMeasure& measure) {
  BoundReport report;
  report.mu = ht_intrinsic_volumes(body, measure);
  double sum = 0.0;
  for (std::size_t m = 0; m < report.mu.values.size(); ++m)
    sum += std::ldexp(report.mu.values[m], -2 * static_cast<int>(m));  // 4^{-m} mu_m
  report.sum_bound = sum;
  report.exp_bound = std::exp(report.mu.values.size() > 1 ? report.mu.values[1] / 4.0 : 0.0);
  report.caveat_norm_error = measure.target_norm_error();
  return report;
}

// Exact magnitude of a solid body in l1^n: Mag(K) = sum_m 2^{-m} V'_m(K),
// valid only when K has nonempty interior. Degenerate bodies are refused
// because the formula is then merely an upper bound.
inline double l1_magnitude_exact(const ConvexBody& body) {
  require(volume(body) > 0.0, ErrorKind::DegenerateBody,
          "l1_magnitude_exact requires a full-dimensional body");
  const IntrinsicVolumeVector v = l1_intrinsic_volumes(body);
  double sum = 0.0;
  for (std::size_t m = 0; m < v.values.size(); ++m)
    sum += std::ldexp(v.values[m], -static_cast<int>(m));
  return sum;
}

// f(x) = sum_m x^m / (Gamma(1 + m/2) m!), a Wright generalized hypergeometric
// series. Terms are generated until the next one drops below 1e-16 of the
// running sum; for x <= 100 the geometric tail at that point is below 1e-14
// relative.
inline double wright_f(double x, int terms = 400) {
  require(x >= 0.0, ErrorKind::InvalidArgument, "wright_f requires x >= 0");
  require(terms >= 1, ErrorKind::InvalidArgument, "wright_f requires terms >= 1");
  double sum = 0.0;
  const double logx = x > 0.0 ? std::log(x) : 0.0;
  for (int m = 0; m < terms; ++m) {
    const double term =
        x == 0.0 && m > 0
            ? 0.0
            : std::exp(m * logx - std::lgamma(1.0 + 0.5 * m) - std::lgamma(m + 1.0));
    sum += term;
    if (m > 0 && term < 1e-16 * sum) break;
  }
  return sum;
}

// The sharper chain from the sum bound plus the Chevet-McMullen inequality
// V_m <= V_1^m / m!:  Mag(K, l2) <= f(sqrt(pi) V_1(K) / 4).
inline double wright_chain_bound(double v1) {
  require(v1 >= 0.0, ErrorKind::InvalidArgument, "V_1 must be nonnegative");
  return wright_f(std::sqrt(M_PI) * v1 / 4.0);
}

// exp(c * v1^{2/3}).
inline double mag_v1_bound(double v1, double c) {
  require(v1 >= 0.0, ErrorKind::InvalidArgument, "V_1 must be nonnegative");
  require(c > 0.0, ErrorKind::InvalidArgument, "constant must be positive");
  return std::exp(c * std::pow(v1, 2.0 / 3.0));
}

// Smallest constant (on a fixed log grid, rounded up to 3 decimals) with
// f(x) <= exp(c x^{2/3}) across x in logspace(-2, 2, 400). Scanned rather than
// hand-derived so no unverified constant enters any assertion.
inline double wright_exponent_constant() {
  double c = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double x = std::pow(10.0, -2.0 + 4.0 * i / 399.0);
    c = std::max(c, std::log(wright_f(x)) / std::pow(x, 2.0 / 3.0));
  }
  return std::ceil(c * 1000.0) / 1000.0;
}

// ---------------------------------------------------------------------------
// Sudakov packing pipeline
// ---------------------------------------------------------------------------

struct PackingResult {
  std::vector<Vec> centers;
  double epsilon = 0.0;
  int count = 0;          // N
  double t_star = 0.0;    // log(2N) / epsilon
  double mag_lower = 0.0; // exact magnitude of the packing at scale t_star
  double counting_bound = 0.0;  // N / (1 + N e^{-t* eps}) = 2N/3
  bool bound_ok = true;
  std::optional<double> sudakov_ratio;  // V_1(K) / (eps sqrt(log N))
};

namespace detail {

inline int default_grid_k(int n) { return n <= 1 ? 256 : (n == 2 ? 64 : 24); }

// Closed-form Euclidean V_1 where available: boxes (sum of side lengths) and
// planar polygons (half perimeter).
inline std::optional<double> euclidean_v1_closed_form(const ConvexBody& body) {
  if (body.is_box()) {
    const AxisBox& b = body.as_box();
    return (b.highs - b.lows).sum();
  }
  if (body.dim() == 2) return euclidean_polygon_intrinsic(body).values[1];
  return std::nullopt;
}

}  // namespace detail

// Greedy farthest-point packing over a dense candidate grid, then the exact
// magnitude of the packing at scale t* = log(2N)/eps. The counting-measure
// bound gives Mag >= N / (1 + N e^{-t eps}), which at t* equals 2N/3.
inline PackingResult sudakov_pipeline(const ConvexBody& body, double epsilon, std::uint64_t seed,
                                      int grid_k = 0) {
  require(epsilon > 0.0, ErrorKind::InvalidArgument, "epsilon must be positive");
  if (grid_k <= 0) grid_k = detail::default_grid_k(body.dim());
  const std::vector<Vec> candidates = grid_sample(body, grid_k);
  require(!candidates.empty(), ErrorKind::DegenerateBody, "no candidate points inside the body");

  PackingResult result;
  result.epsilon = epsilon;
  std::vector<Vec> centers;
  centers.push_back(candidates[seed % candidates.size()]);
  std::vector<double> dist(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    dist[i] = (candidates[i] - centers.front()).norm();
  while (true) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
      if (dist[i] > dist[far]) far = i;
    if (dist[far] < epsilon) break;
    centers.push_back(candidates[far]);
    for (std::size_t i = 0; i < candidates.size(); ++i)
      dist[i] = std::min(dist[i], (candidates[i] - centers.back()).norm());
  }

  const int N = static_cast<int>(centers.size());
  result.centers = centers;
  result.count = N;
  result.t_star = std::log(2.0 * N) / epsilon;
  const FiniteMetricSpace packing = build_space(centers, NormSpec::lp(2.0));
  result.mag_lower = magnitude(scale_space(packing, result.t_star));
  result.counting_bound = N / (1.0 + N * std::exp(-result.t_star * epsilon));
  if (N >= 2) {
    result.bound_ok = result.mag_lower >= 2.0 * N / 3.0 - 1e-9;
    if (auto v1 = detail::euclidean_v1_closed_form(body))
      result.sudakov_ratio = *v1 / (epsilon * std::sqrt(std::log(static_cast<double>(N))));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Mahler product pipeline
// ---------------------------------------------------------------------------

struct MahlerReport {
  double vol_z = 0.0;          // exact
  McEstimate vol_polar;        // Monte Carlo
  double product = 0.0;
  double product_std_err = 0.0;
  double bound = 0.0;          // 4^n / n!
  double slack_sigmas = 0.0;   // (product - bound) / std_err
  // Rows (t, t^n/n!, 4^{-n} product t^n): the magnitude-function route that
  // forces the Mahler bound as t grows.
  std::vector<std::array<double, 3>> t_rows;
};

inline MahlerReport mahler_pipeline(const ConvexBody& body, std::int64_t samples,
                                    std::uint64_t seed) {
  require(body.is_zonotope(), ErrorKind::InvalidArgument, "mahler_pipeline expects a zonotope");
  const int n = body.dim();
  require(n <= kMaxExactPolytopeDim, ErrorKind::DimensionCap, "mahler_pipeline requires n <= 4");
  MahlerReport report;
  report.vol_z = volume(body);
  require(report.vol_z > 0.0, ErrorKind::DegenerateBody,
          "zonotope is not full-dimensional; polar volume undefined");
  report.vol_polar = polar_volume(body, samples, seed);
  report.product = report.vol_z * report.vol_polar.value;
  report.product_std_err = report.vol_z * report.vol_polar.std_err;
  double log_bound = n * std::log(4.0) - std::lgamma(n + 1.0);
  report.bound = std::exp(log_bound);
  report.slack_sigmas = report.product_std_err > 0.0
                            ? (report.product - report.bound) / report.product_std_err
                            : std::numeric_limits<double>::infinity();
  for (double t : {1.0, 2.0, 5.0, 10.0, 20.0}) {
    const double lower = std::exp(n * std::log(t) - std::lgamma(n + 1.0));
    const double top = std::ldexp(report.product, -2 * n) * std::pow(t, n);
    report.t_rows.push_back({t, lower, top});
  }
  return report;
}

// ---------------------------------------------------------------------------
// l1 Steiner formula check (exact, planar)
// ---------------------------------------------------------------------------

struct SteinerRow {
  double t = 0.0;
  double minkowski_area = 0.0;  // exact polygon area of K + t[0,1]^2
  double polynomial = 0.0;      // V'_2 + V'_1 t + t^2
};

struct SteinerReport {
  std::vector<SteinerRow> rows;
  IntrinsicVolumeVector v_prime;
  double max_abs_dev = 0.0;
  double max_rel_dev = 0.0;
};

inline SteinerReport steiner_check(const ConvexBody& body, const std::vector<double>& ts) {
  require(body.dim() == 2, ErrorKind::DimensionCap, "steiner_check requires n=2");
  SteinerReport report;
  report.v_prime = l1_intrinsic_volumes(body);
  for (double t : ts) {
    SteinerRow row;
    row.t = t;
    row.minkowski_area = volume(minkowski_sum_cube(body, t));
    row.polynomial = report.v_prime.values[2] + report.v_prime.values[1] * t + t * t;
    report.max_abs_dev = std::max(report.max_abs_dev, std::abs(row.minkowski_area - row.polynomial));
    if (row.polynomial != 0.0)
      report.max_rel_dev = std::max(report.max_rel_dev,
                                    std::abs(row.minkowski_area - row.polynomial) /
                                        std::abs(row.polynomial));
    report.rows.push_back(row);
  }
  return report;
}

// ---------------------------------------------------------------------------
// l1 Wills inequality check
// ---------------------------------------------------------------------------

struct WillsReport {
  long long count = 0;
  double wills = 0.0;  // W'(K) = sum_m V'_m(K)
  bool ok = false;
};

inline WillsReport wills_check(const ConvexBody& body) {
  require(body.dim() <= 3, ErrorKind::DimensionCap, "wills_check requires n <= 3");
  WillsReport report;
  report.count = lattice_points(body);
  const IntrinsicVolumeVector v = l1_intrinsic_volumes(body);
  for (double x : v.values) report.wills += x;
  report.ok = static_cast<double>(report.count) <= report.wills + 1e-9;
  return report;
}

// ---------------------------------------------------------------------------
// Small-t first-order bound
// ---------------------------------------------------------------------------

struct SmallTRow {
  double t = 0.0;
  double grid_magnitude = 0.0;
  double slope = 0.0;        // (grid magnitude - 1) / t, reported against mu1/4
  double sum_bound = 0.0;    // Theorem-1 sum bound of tK
  bool ok = false;           // grid magnitude <= sum bound
  bool slope_at_most_first_order = false;  // slope <= mu1/4, informational
};

struct SmallTReport {
  std::vector<SmallTRow> rows;
  double mu1 = 0.0;
  double slope_bound = 0.0;  // mu1 / 4, the t -> 0 limsup bound
  bool all_ok = true;
};

// First-order behavior of the magnitude function near t = 0, on finite grid
// lower bounds of Mag(tK). The certified check per row is
//
//   grid magnitude <= sum_m 4^{-m} mu_m(K) t^m + 1e-9,
//
// valid at every t since grid magnitude <= body magnitude <= Theorem 1 bound.
// The slope (grid magnitude - 1)/t is reported against the limsup bound
// mu_1/4; at positive t it may legitimately sit above it (already for squares
// in l1 the exact magnitude gives slope 2 + t against mu_1/4 = 2), so that
// comparison is informational, not asserted.
inline SmallTReport small_t_slope_check(const ConvexBody& body, const GeneratingMeasure& measure,
                                        const std::vector<double>& ts, int grid_k = 0) {
  require(measure.dim() == body.dim(), ErrorKind::InvalidArgument,
          "measure and body dimensions must match");
  if (grid_k <= 0) grid_k = detail::default_grid_k(body.dim());
  SmallTReport report;
  const IntrinsicVolumeVector mu = ht_intrinsic_volumes(body, measure);
  report.mu1 = mu.values.size() > 1 ? mu.values[1] : 0.0;
  report.slope_bound = report.mu1 / 4.0;
  const std::vector<Vec> grid = grid_sample(body, grid_k);
  const FiniteMetricSpace base =
      grid.empty() ? FiniteMetricSpace::from_distances(Mat(0, 0))
                   : build_space(grid, NormSpec::from_measure(measure));
  for (double t : ts) {
    require(t > 0.0, ErrorKind::InvalidArgument, "small-t values must be positive");
    SmallTRow row;
    row.t = t;
    row.grid_magnitude = base.empty() ? 0.0 : magnitude(scale_space(base, t));
    row.slope = (row.grid_magnitude - 1.0) / t;
    row.sum_bound = 0.0;
    for (std::size_t m = 0; m < mu.values.size(); ++m)
      row.sum_bound += std::ldexp(mu.values[m], -2 * static_cast<int>(m)) * std::pow(t, double(m));
    row.ok = row.grid_magnitude <= row.sum_bound + 1e-9;
    row.slope_at_most_first_order = row.slope <= report.slope_bound + 1e-9;
    report.all_ok = report.all_ok && row.ok;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace magvol
