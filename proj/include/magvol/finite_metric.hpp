#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "magvol/convex_bodies.hpp"
#include "magvol/errors.hpp"
#include "magvol/generating_measures.hpp"
#include "magvol/rng.hpp"

namespace magvol {

inline constexpr std::size_t kDefaultKernelCap = 8192;
inline constexpr double kTriangleSlack = 1e-12;

// Distance norm for build_space: either lp with p in [1,2] (the hypermetric
// range) or the norm of a discrete generating measure.
class NormSpec {
 public:
  static NormSpec lp(double p) {
    require(p >= 1.0 && p <= 2.0, ErrorKind::InvalidArgument,
            "lp norm requires p in [1, 2] (hypermetric range)");
    NormSpec s;
    s.p_ = p;
    return s;
  }

  static NormSpec from_measure(GeneratingMeasure m) {
    require(m.spans(), ErrorKind::InvalidArgument,
            "a non-spanning measure induces only a seminorm");
    NormSpec s;
    s.measure_ = std::make_shared<GeneratingMeasure>(std::move(m));
    return s;
  }

  double evaluate(const Vec& x) const {
    if (measure_) return measure_->norm(x);
    if (p_ == 1.0) return x.cwiseAbs().sum();
    if (p_ == 2.0) return x.norm();
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), p_);
    return std::pow(s, 1.0 / p_);
  }

  bool is_measure() const { return static_cast<bool>(measure_); }
  const GeneratingMeasure* measure() const { return measure_.get(); }
  double p() const { return p_; }

 private:
  double p_ = 2.0;
  std::shared_ptr<const GeneratingMeasure> measure_;
};

// A finite metric space: point labels (optional coordinates) plus the
// symmetric distance matrix. The triangle inequality is validated on
// construction; beyond 256 points a deterministic sample of triples is
// checked instead of all of them.
class FiniteMetricSpace {
 public:
  static FiniteMetricSpace from_distances(Mat dist, std::vector<Vec> points = {}) {
    return FiniteMetricSpace(std::move(dist), std::move(points));
  }

  std::size_t size() const { return static_cast<std::size_t>(dist_.rows()); }
  const Mat& distances() const { return dist_; }
  const std::vector<Vec>& points() const { return points_; }
  bool empty() const { return dist_.rows() == 0; }

 private:
  FiniteMetricSpace(Mat dist, std::vector<Vec> points)
      : dist_(std::move(dist)), points_(std::move(points)) {
    const auto k = dist_.rows();
    require(dist_.cols() == k, ErrorKind::InvalidArgument, "distance matrix must be square");
    if (!points_.empty())
      require(static_cast<Eigen::Index>(points_.size()) == k, ErrorKind::InvalidArgument,
              "point list and distance matrix sizes differ");
    for (Eigen::Index i = 0; i < k; ++i) {
      require(dist_(i, i) == 0.0, ErrorKind::InvalidArgument,
              "distance matrix must have a zero diagonal");
      for (Eigen::Index j = i + 1; j < k; ++j) {
        require(dist_(i, j) >= 0.0, ErrorKind::InvalidArgument, "distances must be nonnegative");
        require(std::abs(dist_(i, j) - dist_(j, i)) <= kTriangleSlack, ErrorKind::InvalidArgument,
                "distance matrix must be symmetric");
        dist_(j, i) = dist_(i, j);
      }
    }
    validate_triangle();
  }

  void validate_triangle() const {
    const auto k = dist_.rows();
    auto check = [&](Eigen::Index i, Eigen::Index j, Eigen::Index l) {
      require(dist_(i, j) <= dist_(i, l) + dist_(l, j) + kTriangleSlack,
              ErrorKind::InvalidArgument, "triangle inequality violated");
    };
    if (k <= 256) {
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j)
          for (Eigen::Index l = 0; l < k; ++l) check(i, j, l);
    } else {
      Rng rng(0x7219e637u);
      for (int t = 0; t < 2'000'000; ++t) {
        const auto i = static_cast<Eigen::Index>(rng.next_below(k));
        const auto j = static_cast<Eigen::Index>(rng.next_below(k));
        const auto l = static_cast<Eigen::Index>(rng.next_below(k));
        check(i, j, l);
      }
    }
  }

  Mat dist_;
  std::vector<Vec> points_;
};

inline FiniteMetricSpace build_space(const std::vector<Vec>& points, const NormSpec& norm) {
  if (points.empty()) return FiniteMetricSpace::from_distances(Mat(0, 0));
  const int n = static_cast<int>(points.front().size());
  for (const Vec& p : points)
    require(static_cast<int>(p.size()) == n, ErrorKind::InvalidArgument,
            "points have mixed dimensions");
  const auto k = static_cast<Eigen::Index>(points.size());
  Mat dist = Mat::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j)
      dist(i, j) = dist(j, i) = norm.evaluate(points[i] - points[j]);
  return FiniteMetricSpace::from_distances(std::move(dist), points);
}

inline FiniteMetricSpace scale_space(const FiniteMetricSpace& space, double t) {
  require(t > 0.0, ErrorKind::InvalidArgument, "scale factor must be positive");
  return FiniteMetricSpace::from_distances(t * space.distances(), space.points());
}

// Similarity kernel Z_ij = exp(-d_ij) with its Cholesky factor. Positive
// definiteness is decided by factorization success with a pivot threshold of
// 1e-12 times the largest diagonal entry.
class SimilarityMatrix {
 public:
  static SimilarityMatrix from(const FiniteMetricSpace& space,
                               std::size_t cap = kDefaultKernelCap) {
    require(space.size() <= cap, ErrorKind::InvalidArgument,
            "kernel matrix size exceeds the configured cap of " + std::to_string(cap));
    SimilarityMatrix sim;
    sim.Z_ = (-space.distances()).array().exp().matrix();
    if (space.size() == 0) {
      sim.pd_ = true;
      return sim;
    }
    Eigen::LLT<Mat> llt(sim.Z_);
    if (llt.info() != Eigen::Success) {
      sim.pd_ = false;
      return sim;
    }
    const Vec diag = llt.matrixLLT().diagonal();
    const double pivot_min = diag.minCoeff();
    sim.min_pivot_ = pivot_min * pivot_min;
    if (sim.min_pivot_ <= 1e-12 * sim.Z_.diagonal().maxCoeff()) {
      sim.pd_ = false;
      return sim;
    }
    sim.pd_ = true;
    sim.llt_.emplace(std::move(llt));
    return sim;
  }

  const Mat& Z() const { return Z_; }
  bool positive_definite() const { return pd_; }
  double min_pivot() const { return min_pivot_; }

  Vec solve_ones() const {
    require(pd_ && llt_.has_value(), ErrorKind::NotPositiveDefinite,
            "similarity matrix is not positive definite");
    return llt_->solve(Vec::Ones(Z_.rows()));
  }

 private:
  Mat Z_;
  bool pd_ = false;
  double min_pivot_ = 0.0;
  std::optional<Eigen::LLT<Mat>> llt_;
};

struct PdReport {
  bool is_pd = false;
  double min_eig = 0.0;
};

inline PdReport check_positive_definite(const FiniteMetricSpace& space) {
  PdReport report;
  SimilarityMatrix sim = SimilarityMatrix::from(space);
  report.is_pd = sim.positive_definite();
  if (space.size() == 0) {
    report.min_eig = 0.0;
    return report;
  }
  if (space.size() <= 512) {
    Eigen::SelfAdjointEigenSolver<Mat> es(sim.Z(), Eigen::EigenvaluesOnly);
    report.min_eig = es.eigenvalues().minCoeff();
  } else {
    report.min_eig = sim.min_pivot();
  }
  return report;
}

// Magnitude of a finite positive definite space: the total mass of the
// weighting vector w solving Z w = 1.
inline double magnitude(const FiniteMetricSpace& space) {
  if (space.empty()) return 0.0;
  SimilarityMatrix sim = SimilarityMatrix::from(space);
  return sim.solve_ones().sum();
}

struct DiversityWeights {
  Vec v;                    // nonnegative, sums to 1
  double objective = 0.0;   // v . Z v
  double max_diversity = 0.0;
  double kkt_residual = 0.0;
  bool certified = false;
  int iterations = 0;
};

namespace detail {

// Euclidean projection onto the probability simplex (Duchi et al.).
inline Vec project_simplex(Vec v) {
  const auto k = v.size();
  std::vector<double> u(v.data(), v.data() + k);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  int rho = 0;
  for (int i = 0; i < k; ++i) {
    css += u[i];
    const double t = (css - 1.0) / (i + 1);
    if (u[i] - t > 0.0) {
      rho = i + 1;
      theta = t;
    }
  }
  for (int i = 0; i < k; ++i) v[i] = std::max(0.0, v[i] - theta);
  return v;
}

}  // namespace detail

// Maximum diversity: D_max = 1 / min { v.Zv : v >= 0, sum v = 1 }. Projected
// gradient with periodic active-set refinement; the result is certified when
// the KKT residual max_{i: v_i>0} (Zv)_i - min_j (Zv)_j drops below tol.
inline DiversityWeights max_diversity(const FiniteMetricSpace& space, double tol = 1e-9,
                                      int max_iter = 100000) {
  require(!space.empty(), ErrorKind::InvalidArgument, "max_diversity requires a nonempty space");
  require(tol > 0.0, ErrorKind::InvalidArgument, "max_diversity requires tol > 0");
  const Mat Z = (-space.distances()).array().exp().matrix();
  const auto k = Z.rows();
  DiversityWeights out;
  if (k == 1) {
    out.v = Vec::Ones(1);
    out.objective = Z(0, 0);
    out.max_diversity = 1.0 / out.objective;
    out.certified = true;
    return out;
  }

  Vec v = Vec::Constant(k, 1.0 / static_cast<double>(k));
  const double lipschitz = 2.0 * Z.cwiseAbs().rowwise().sum().maxCoeff();
  const double step = 1.0 / lipschitz;
  int iter = 0;

  auto kkt = [&](const Vec& w, double& residual) {
    const Vec g = Z * w;
    double active_max = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < k; ++i)
      if (w[i] > 1e-12) active_max = std::max(active_max, g[i]);
    residual = active_max - g.minCoeff();
    return residual <= tol;
  };

  // Active-set refinement: solve the equality-constrained problem on the
  // support (Z_SS w = 1, normalized), dropping negative weights and adding
  // the most violating outside coordinate.
  auto refine = [&](Vec w) -> std::optional<Vec> {
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < k; ++i)
      if (w[i] > 1e-10) support.push_back(i);
    if (support.empty()) return std::nullopt;
    const int rounds = std::min(2 * static_cast<int>(k) + 8, max_iter - iter);
    for (int round = 0; round < rounds; ++round) {
      ++iter;
      const auto s = static_cast<Eigen::Index>(support.size());
      Mat Zs(s, s);
      for (Eigen::Index a = 0; a < s; ++a)
        for (Eigen::Index b = 0; b < s; ++b) Zs(a, b) = Z(support[a], support[b]);
      Eigen::LLT<Mat> llt(Zs);
      if (llt.info() != Eigen::Success) return std::nullopt;
      Vec ws = llt.solve(Vec::Ones(s));
      Eigen::Index worst = -1;
      double worst_val = 0.0;
      for (Eigen::Index a = 0; a < s; ++a)
        if (ws[a] < worst_val) {
          worst_val = ws[a];
          worst = a;
        }
      if (worst >= 0) {
        support.erase(support.begin() + worst);
        if (support.empty()) return std::nullopt;
        continue;
      }
      const double mass = ws.sum();
      Vec cand = Vec::Zero(k);
      for (Eigen::Index a = 0; a < s; ++a) cand[support[a]] = ws[a] / mass;
      const Vec g = Z * cand;
      const double mu = 1.0 / mass;
      Eigen::Index jmin;
      const double gmin = g.minCoeff(&jmin);
      if (gmin >= mu - tol) return cand;
      bool already = false;
      for (auto idx : support)
        if (idx == jmin) already = true;
      if (already) return cand;  // numerical stall; accept current iterate
      support.push_back(jmin);
      std::sort(support.begin(), support.end());
    }
    return std::nullopt;
  };

  double residual = std::numeric_limits<double>::infinity();
  while (iter < max_iter) {
    for (int inner = 0; inner < 50 && iter < max_iter; ++inner, ++iter)
      v = detail::project_simplex(v - step * 2.0 * (Z * v));
    if (kkt(v, residual)) break;
    if (iter >= max_iter) break;
    if (auto refined = refine(v)) {
      double r;
      if (kkt(*refined, r)) {
        v = *refined;
        residual = r;
        break;
      }
      if ((*refined).dot(Z * (*refined)) < v.dot(Z * v)) v = *refined;
    }
    if (kkt(v, residual)) break;
  }

  out.v = v;
  out.objective = v.dot(Z * v);
  out.max_diversity = 1.0 / out.objective;
  out.iterations = iter;
  kkt(v, out.kkt_residual);
  out.certified = out.kkt_residual <= tol;
  return out;
}

// Uniform axis grid over the bounding box intersected with the body. Bodies
// whose affine dimension is below the ambient one return their own defining
// points instead.
inline std::vector<Vec> grid_sample(const ConvexBody& body, int k_per_side) {
  require(k_per_side >= 1, ErrorKind::InvalidArgument, "grid_sample requires k_per_side >= 1");
  const int n = body.dim();

  if (!body.is_box()) {
    const std::vector<Vec> pts = body_points(body);
    const double scale = detail::coord_scale(pts);
    auto [rank, basis] = detail::affine_basis(pts, 1e-11 * scale);
    (void)basis;
    if (rank < n) return detail::dedup_points(pts, 1e-12 * scale);
  }

  const AxisBox bb = bounding_box(body);
  std::vector<std::vector<double>> axis_values(n);
  for (int i = 0; i < n; ++i) {
    if (bb.highs[i] - bb.lows[i] <= 0.0) {
      axis_values[i] = {bb.lows[i]};
    } else if (k_per_side == 1) {
      axis_values[i] = {0.5 * (bb.lows[i] + bb.highs[i])};
    } else {
      for (int j = 0; j < k_per_side; ++j)
        axis_values[i].push_back(bb.lows[i] + (bb.highs[i] - bb.lows[i]) * j / (k_per_side - 1));
    }
  }

  MembershipOracle oracle(body);
  std::vector<Vec> out;
  std::vector<int> idx(n, 0);
  Vec x(n);
  while (true) {
    for (int i = 0; i < n; ++i) x[i] = axis_values[i][idx[i]];
    if (oracle.contains(x)) out.push_back(x);
    int i = n - 1;
    while (i >= 0 && ++idx[i] == static_cast<int>(axis_values[i].size())) idx[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace magvol
