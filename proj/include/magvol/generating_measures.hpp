#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "magvol/convex_bodies.hpp"
#include "magvol/errors.hpp"
#include "magvol/rng.hpp"

namespace magvol {

// One atom of a discrete even measure on the sphere: a representative unit
// direction carrying the total weight of its antipodal pair. With this
// convention the induced (semi)norm is |x| = sum_j w_j |<x, theta_j>|.
struct MeasureAtom {
  Vec dir;
  double weight;
};

class GeneratingMeasure {
 public:
  GeneratingMeasure(std::vector<MeasureAtom> atoms, int dim)
      : atoms_(std::move(atoms)), dim_(dim) {
    require(dim_ >= 1, ErrorKind::InvalidArgument, "measure dimension must be positive");
    require(!atoms_.empty(), ErrorKind::InvalidArgument, "measure needs at least one atom");
    for (const MeasureAtom& a : atoms_) {
      require(static_cast<int>(a.dir.size()) == dim_, ErrorKind::InvalidArgument,
              "measure atom dimension mismatch");
      require(std::abs(a.dir.norm() - 1.0) <= 1e-12, ErrorKind::InvalidArgument,
              "measure directions must be unit vectors");
      require(a.weight > 0.0, ErrorKind::InvalidArgument, "measure weights must be positive");
    }
    Mat D(dim_, static_cast<int>(atoms_.size()));
    for (std::size_t j = 0; j < atoms_.size(); ++j) D.col(static_cast<int>(j)) = atoms_[j].dir;
    Eigen::ColPivHouseholderQR<Mat> qr(D);
    qr.setThreshold(1e-11);
    spans_ = static_cast<int>(qr.rank()) == dim_;
  }

  int dim() const { return dim_; }
  const std::vector<MeasureAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  // False means the atom directions do not span R^n and norm() is only a
  // seminorm.
  bool spans() const { return spans_; }

  double norm(const Vec& x) const {
    require(static_cast<int>(x.size()) == dim_, ErrorKind::InvalidArgument,
            "norm argument dimension mismatch");
    double s = 0.0;
    for (const MeasureAtom& a : atoms_) s += a.weight * std::abs(a.dir.dot(x));
    return s;
  }

  // Measured worst-case relative deviation from a target norm, when this
  // measure is a discretization (set by euclidean_measure). Propagated into
  // reports as a caveat.
  std::optional<double> target_norm_error() const { return target_norm_error_; }
  void set_target_norm_error(double e) { target_norm_error_ = e; }

 private:
  std::vector<MeasureAtom> atoms_;
  int dim_;
  bool spans_ = false;
  std::optional<double> target_norm_error_;
};

// rho = (1/2) sum_i (delta_{e_i} + delta_{-e_i}); stored as one atom per axis
// with the pair's total weight 1, so norm() is exactly the l1 norm.
inline GeneratingMeasure l1_measure(int n) {
  require(n >= 1, ErrorKind::InvalidArgument, "l1_measure requires n >= 1");
  std::vector<MeasureAtom> atoms;
  atoms.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    atoms.push_back({std::move(e), 1.0});
  }
  return GeneratingMeasure(std::move(atoms), n);
}

namespace detail {

inline double measure_norm_error_vs_l2(const GeneratingMeasure& m, int trials,
                                       std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  Vec x(m.dim());
  for (int t = 0; t < trials; ++t) {
    for (int i = 0; i < m.dim(); ++i) x[i] = rng.normal();
    const double l2 = x.norm();
    if (l2 <= 1e-12) continue;
    x /= l2;
    worst = std::max(worst, std::abs(m.norm(x) - 1.0));
  }
  return worst;
}

}  // namespace detail

// Equal-weight discretization of the spherical generating measure of l2^n,
// n in {2,3}, N antipodal pairs. Weights are calibrated so |e_1| = 1 exactly;
// the measured worst-direction deviation from the Euclidean norm is attached
// to the result.
inline GeneratingMeasure euclidean_measure(int n, int N) {
  require(n == 2 || n == 3, ErrorKind::InvalidArgument, "euclidean_measure supports n in {2,3}");
  require(N >= 2 * n, ErrorKind::InvalidArgument, "euclidean_measure requires N >= 2n");
  std::vector<MeasureAtom> atoms;
  atoms.reserve(N);
  if (n == 2) {
    for (int j = 0; j < N; ++j) {
      const double a = M_PI * static_cast<double>(j) / static_cast<double>(N);
      Vec d(2);
      d << std::cos(a), std::sin(a);
      atoms.push_back({std::move(d), 1.0});
    }
  } else {
    // Fibonacci point set on the upper half-sphere.
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < N; ++j) {
      const double z = (static_cast<double>(j) + 0.5) / static_cast<double>(N);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(j);
      Vec d(3);
      d << r * std::cos(phi), r * std::sin(phi), z;
      d.normalize();
      atoms.push_back({std::move(d), 1.0});
    }
  }
  Vec e1 = Vec::Zero(n);
  e1[0] = 1.0;
  double raw = 0.0;
  for (const MeasureAtom& a : atoms) raw += std::abs(a.dir.dot(e1));
  const double w = 1.0 / raw;
  for (MeasureAtom& a : atoms) a.weight = w;
  GeneratingMeasure m(std::move(atoms), n);
  m.set_target_norm_error(detail::measure_norm_error_vs_l2(m, 1000, 0x5eedu));
  return m;
}

// N uniform random unit directions with weights in (0.1, 1]; resampled until
// the directions span R^n (at most 100 attempts).
inline GeneratingMeasure random_measure(int n, int N, std::uint64_t seed) {
  require(n >= 1, ErrorKind::InvalidArgument, "random_measure requires n >= 1");
  require(N >= n, ErrorKind::InvalidArgument, "random_measure requires N >= n");
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<MeasureAtom> atoms;
    atoms.reserve(N);
    for (int j = 0; j < N; ++j) {
      Vec d(n);
      double nn = 0.0;
      do {
        for (int i = 0; i < n; ++i) d[i] = rng.normal();
        nn = d.norm();
      } while (nn <= 1e-12);
      d /= nn;
      const double w = 1.0 - 0.9 * rng.next_double();  // (0.1, 1]
      atoms.push_back({std::move(d), w});
    }
    GeneratingMeasure m(std::move(atoms), n);
    if (m.spans()) return m;
  }
  fail(ErrorKind::InvalidArgument, "random_measure failed to produce a spanning measure");
}

// The isometric embedding E_N -> l1^N from the discrete generating measure:
// x maps to (w_j <x, theta_j>)_j, so pairwise l1 distances of the images equal
// pairwise measure-norm distances of the inputs.
inline std::vector<Vec> embed_l1(const GeneratingMeasure& measure, const std::vector<Vec>& points) {
  require(measure.spans(), ErrorKind::InvalidArgument,
          "embed_l1 requires a spanning (norm-inducing) measure");
  std::vector<Vec> images;
  images.reserve(points.size());
  const int N = static_cast<int>(measure.size());
  for (const Vec& x : points) {
    require(static_cast<int>(x.size()) == measure.dim(), ErrorKind::InvalidArgument,
            "embed_l1 point dimension mismatch");
    Vec img(N);
    for (int j = 0; j < N; ++j)
      img[j] = measure.atoms()[j].weight * measure.atoms()[j].dir.dot(x);
    images.push_back(std::move(img));
  }
  return images;
}

}  // namespace magvol
