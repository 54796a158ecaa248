#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "magvol/convex_bodies.hpp"
#include "magvol/errors.hpp"
#include "magvol/generating_measures.hpp"

namespace magvol {

inline constexpr std::int64_t kTupleBudget = 2'000'000;

enum class IvKind { L1Prime, HolmesThompson, HolmesThompsonNormalized, Euclidean };

inline const char* iv_kind_name(IvKind k) {
  switch (k) {
    case IvKind::L1Prime: return "l1_prime";
    case IvKind::HolmesThompson: return "holmes_thompson";
    case IvKind::HolmesThompsonNormalized: return "holmes_thompson_normalized";
    case IvKind::Euclidean: return "euclidean";
  }
  return "unknown";
}

// Intrinsic volume vector indexed 0..n. values[0] is always 1. An empty
// std_err means every entry came from an exact engine.
struct IntrinsicVolumeVector {
  std::vector<double> values;
  IvKind kind = IvKind::L1Prime;
  std::vector<double> std_err;

  bool exact() const { return std_err.empty(); }
  int top_index() const { return static_cast<int>(values.size()) - 1; }
};

// Euclidean unit-ball volumes omega_m = pi^{m/2} / Gamma(1 + m/2), via lgamma.
struct IntrinsicConstants {
  std::vector<double> omegas;

  static IntrinsicConstants upto(int n) {
    IntrinsicConstants c;
    c.omegas.reserve(n + 1);
    for (int m = 0; m <= n; ++m)
      c.omegas.push_back(std::exp(0.5 * m * std::log(M_PI) - std::lgamma(1.0 + 0.5 * m)));
    return c;
  }
};

namespace detail {

inline std::int64_t binomial(int n, int m) {
  if (m < 0 || m > n) return 0;
  std::int64_t r = 1;
  for (int i = 0; i < m; ++i) r = r * (n - i) / (i + 1);
  return r;
}

inline double projected_volume(const ConvexBody& body, const Mat& A) {
  return volume(project(body, ProjectionMatrix{A}));
}

}  // namespace detail

// l1 intrinsic volumes V'_m(K) = sum over m-dimensional coordinate subspaces
// of vol_m(K|P). Exact; requires the exact projection-volume engine (n <= 4).
inline IntrinsicVolumeVector l1_intrinsic_volumes(const ConvexBody& body) {
  const int n = body.dim();
  require(n <= kMaxExactPolytopeDim, ErrorKind::DimensionCap,
          "l1 intrinsic volumes require ambient dimension <= 4");
  IntrinsicVolumeVector out;
  out.kind = IvKind::L1Prime;
  out.values.assign(n + 1, 0.0);
  out.values[0] = 1.0;
  for (int m = 1; m <= n; ++m) {
    double sum = 0.0;
    detail::for_each_subset(n, m, [&](const std::vector<int>& idx) {
      sum += volume(project(body, ProjectionMatrix::coordinate(n, idx)));
    });
    out.values[m] = sum;
  }
  return out;
}

// V'_m of an axis box in closed form: the elementary symmetric polynomials of
// the side lengths.
inline IntrinsicVolumeVector box_l1_closed_form(const Vec& lengths) {
  const int n = static_cast<int>(lengths.size());
  for (int i = 0; i < n; ++i)
    require(lengths[i] >= 0.0, ErrorKind::InvalidArgument, "box side lengths must be nonnegative");
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int m = std::min(i + 1, n); m >= 1; --m) e[m] += e[m - 1] * lengths[i];
  IntrinsicVolumeVector out;
  out.kind = IvKind::L1Prime;
  out.values = std::move(e);
  return out;
}

// Holmes-Thompson intrinsic volumes of K for the hypermetric norm generated by
// a discrete measure:
//
//   mu_m(K) = (2^m / m!) * sum over ordered atom m-tuples of
//             (prod of weights) * vol_m(A K),
//
// with A the tuple's direction-row matrix. Tuples with a repeated or dependent
// atom have rank-deficient images and contribute vol 0, so the sum reduces to
// m-subsets counted with multiplicity m!.
inline IntrinsicVolumeVector ht_intrinsic_volumes(const ConvexBody& body,
                                                  const GeneratingMeasure& measure) {
  const int n = body.dim();
  require(measure.dim() == n, ErrorKind::InvalidArgument,
          "measure and body dimensions must match");
  if (body.is_polytope())
    require(n <= kMaxExactPolytopeDim, ErrorKind::DimensionCap,
            "exact projected volumes of vpolytopes require n <= 4");
  require(n <= kMaxEnumDim, ErrorKind::DimensionCap, "ambient dimension capped at 12");

  const int N = static_cast<int>(measure.size());
  IntrinsicVolumeVector out;
  out.kind = IvKind::HolmesThompson;
  out.values.assign(n + 1, 0.0);
  out.values[0] = 1.0;
  for (int m = 1; m <= n; ++m) {
    require(detail::binomial(N, m) <= kTupleBudget, ErrorKind::TupleBudgetExceeded,
            "atom tuple enumeration exceeds the budget of " + std::to_string(kTupleBudget) +
                " multisets");
    double sum = 0.0;
    Mat A(m, n);
    detail::for_each_subset(N, m, [&](const std::vector<int>& idx) {
      double w = 1.0;
      for (int r = 0; r < m; ++r) {
        const MeasureAtom& atom = measure.atoms()[idx[r]];
        A.row(r) = atom.dir.transpose();
        w *= atom.weight;
      }
      sum += w * detail::projected_volume(body, A);
    });
    out.values[m] = std::ldexp(sum, m);  // 2^m * subset sum
  }
  return out;
}

// mu1 alone, via support-function widths: mu_1(K) = 2 sum_j w_j width(K, theta_j).
inline double ht_mu1(const ConvexBody& body, const GeneratingMeasure& measure) {
  require(measure.dim() == body.dim(), ErrorKind::InvalidArgument,
          "measure and body dimensions must match");
  double s = 0.0;
  for (const MeasureAtom& a : measure.atoms())
    s += a.weight * (support_function(body, a.dir) + support_function(body, -a.dir));
  return 2.0 * s;
}

inline IntrinsicVolumeVector normalize(const IntrinsicVolumeVector& v,
                                       const IntrinsicConstants& constants) {
  require(v.kind == IvKind::HolmesThompson, ErrorKind::InvalidArgument,
          "normalize expects a Holmes-Thompson vector");
  require(constants.omegas.size() >= v.values.size(), ErrorKind::InvalidArgument,
          "not enough omega constants");
  IntrinsicVolumeVector out = v;
  out.kind = IvKind::HolmesThompsonNormalized;
  for (std::size_t m = 0; m < out.values.size(); ++m) out.values[m] /= constants.omegas[m];
  return out;
}

struct SupermultRow {
  int i = 0;
  int j = 0;
  double lhs = 0.0;  // mu_{i+j}
  double rhs = 0.0;  // (i! j! / (i+j)!) mu_i mu_j
  bool ok = false;
};

// mu_{i+j} <= (i! j! / (i+j)!) mu_i mu_j for all i, j >= 0 with i+j <= n.
inline std::vector<SupermultRow> check_supermultiplicativity(const IntrinsicVolumeVector& v) {
  require(v.kind == IvKind::HolmesThompson, ErrorKind::InvalidArgument,
          "supermultiplicativity check expects a Holmes-Thompson vector");
  const int n = v.top_index();
  std::vector<SupermultRow> rows;
  for (int i = 0; i <= n; ++i) {
    for (int j = i; i + j <= n; ++j) {
      SupermultRow row;
      row.i = i;
      row.j = j;
      row.lhs = v.values[i + j];
      const double logcoef =
          std::lgamma(i + 1.0) + std::lgamma(j + 1.0) - std::lgamma(i + j + 1.0);
      row.rhs = std::exp(logcoef) * v.values[i] * v.values[j];
      row.ok = row.lhs <= row.rhs + 1e-9 * std::abs(row.rhs);
      rows.push_back(row);
    }
  }
  return rows;
}

// Classical Euclidean intrinsic volumes, closed forms only (oracle use):
// boxes via elementary symmetric polynomials of the side lengths.
inline IntrinsicVolumeVector euclidean_box_intrinsic(const Vec& lengths) {
  IntrinsicVolumeVector out = box_l1_closed_form(lengths);
  out.kind = IvKind::Euclidean;
  return out;
}

// Convex polygons: (1, perimeter/2, area).
inline IntrinsicVolumeVector euclidean_polygon_intrinsic(const ConvexBody& body) {
  require(body.dim() == 2, ErrorKind::DimensionCap, "polygon intrinsic volumes require n=2");
  std::vector<Eigen::Vector2d> pts;
  for (const Vec& p : body_points(body)) pts.emplace_back(p[0], p[1]);
  const auto hull = detail::hull_2d(std::move(pts));
  double perimeter = 0.0;
  for (std::size_t i = 0; i < hull.size() && hull.size() >= 2; ++i)
    perimeter += (hull[(i + 1) % hull.size()] - hull[i]).norm();
  if (hull.size() == 2) perimeter = (hull[1] - hull[0]).norm() * 2.0;
  IntrinsicVolumeVector out;
  out.kind = IvKind::Euclidean;
  out.values = {1.0, 0.5 * perimeter, detail::polygon_area(hull)};
  return out;
}

}  // namespace magvol
