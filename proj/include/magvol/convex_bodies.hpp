#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "magvol/errors.hpp"
#include "magvol/rng.hpp"

namespace magvol {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr int kMaxExactPolytopeDim = 4;   // hull + triangulation engine
inline constexpr int kMaxEnumDim = 12;           // zonotope/box subset enumeration
inline constexpr int kMaxZonotopeGenerators = 12;

// K = conv(vertices). Vertex list may contain interior or duplicate points;
// hull cleanup happens inside the volume/membership engines.
struct VPolytope {
  std::vector<Vec> vertices;
};

// Symmetric zonotope sum_i [-v_i, v_i]. An empty generator list is the origin.
struct Zonotope {
  std::vector<Vec> generators;
};

struct AxisBox {
  Vec lows;
  Vec highs;
};

class ConvexBody {
 public:
  using Variant = std::variant<VPolytope, Zonotope, AxisBox>;

  static ConvexBody polytope(std::vector<Vec> vertices) {
    require(!vertices.empty(), ErrorKind::InvalidArgument, "vpolytope needs at least one vertex");
    const int n = static_cast<int>(vertices.front().size());
    require(n >= 1, ErrorKind::InvalidArgument, "vpolytope vertices must be nonempty vectors");
    for (const Vec& v : vertices)
      require(static_cast<int>(v.size()) == n, ErrorKind::InvalidArgument,
              "vpolytope vertices have mixed dimensions");
    return ConvexBody(VPolytope{std::move(vertices)}, n);
  }

  static ConvexBody zonotope(std::vector<Vec> generators, int dim_if_empty = -1) {
    int n = dim_if_empty;
    if (!generators.empty()) n = static_cast<int>(generators.front().size());
    require(n >= 1, ErrorKind::InvalidArgument, "zonotope needs a positive ambient dimension");
    require(static_cast<int>(generators.size()) <= kMaxZonotopeGenerators, ErrorKind::DimensionCap,
            "zonotope generator count exceeds the enumeration cap of " +
                std::to_string(kMaxZonotopeGenerators));
    for (const Vec& g : generators) {
      require(static_cast<int>(g.size()) == n, ErrorKind::InvalidArgument,
              "zonotope generators have mixed dimensions");
      require(g.norm() > 0.0, ErrorKind::InvalidArgument, "zonotope generators must be nonzero");
    }
    return ConvexBody(Zonotope{std::move(generators)}, n);
  }

  static ConvexBody box(Vec lows, Vec highs) {
    require(lows.size() == highs.size() && lows.size() >= 1, ErrorKind::InvalidArgument,
            "box bounds must be nonempty vectors of equal dimension");
    for (int i = 0; i < lows.size(); ++i)
      require(lows[i] <= highs[i], ErrorKind::InvalidArgument, "box lows must not exceed highs");
    const int n = static_cast<int>(lows.size());
    return ConvexBody(AxisBox{std::move(lows), std::move(highs)}, n);
  }

  int dim() const { return dim_; }
  const Variant& variant() const { return body_; }

  bool is_polytope() const { return std::holds_alternative<VPolytope>(body_); }
  bool is_zonotope() const { return std::holds_alternative<Zonotope>(body_); }
  bool is_box() const { return std::holds_alternative<AxisBox>(body_); }

  const VPolytope& as_polytope() const { return std::get<VPolytope>(body_); }
  const Zonotope& as_zonotope() const { return std::get<Zonotope>(body_); }
  const AxisBox& as_box() const { return std::get<AxisBox>(body_); }

 private:
  ConvexBody(Variant b, int dim) : body_(std::move(b)), dim_(dim) {}

  Variant body_;
  int dim_;
};

// Rows x_1..x_m of the linear map A : R^n -> R^m.
struct ProjectionMatrix {
  Mat A;

  static ProjectionMatrix from_rows(const std::vector<Vec>& rows) {
    require(!rows.empty(), ErrorKind::InvalidArgument, "projection needs at least one row");
    const int n = static_cast<int>(rows.front().size());
    Mat A(static_cast<int>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require(static_cast<int>(rows[i].size()) == n, ErrorKind::InvalidArgument,
              "projection rows have mixed dimensions");
      A.row(static_cast<int>(i)) = rows[i].transpose();
    }
    require(A.rows() <= A.cols(), ErrorKind::InvalidArgument,
            "projection must map to a space of dimension <= ambient");
    return ProjectionMatrix{std::move(A)};
  }

  // Coordinate projection P_{i_1..i_m} with rows e_{i_1}, ..., e_{i_m}.
  static ProjectionMatrix coordinate(int n, const std::vector<int>& idx) {
    Mat A = Mat::Zero(static_cast<int>(idx.size()), n);
    for (std::size_t r = 0; r < idx.size(); ++r) A(static_cast<int>(r), idx[r]) = 1.0;
    return ProjectionMatrix{std::move(A)};
  }
};

struct McEstimate {
  double value = 0.0;
  double std_err = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline double coord_scale(const std::vector<Vec>& pts) {
  double s = 1.0;
  for (const Vec& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

inline std::vector<Vec> dedup_points(const std::vector<Vec>& pts, double tol) {
  std::vector<Vec> out;
  for (const Vec& p : pts) {
    bool seen = false;
    for (const Vec& q : out)
      if ((p - q).cwiseAbs().maxCoeff() <= tol) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(p);
  }
  return out;
}

// Orthonormal basis of the affine hull: returns (rank r, n x r basis Q).
// Points then decompose as p = p0 + Q y with y = Q^T (p - p0).
inline std::pair<int, Mat> affine_basis(const std::vector<Vec>& pts, double tol) {
  const int n = static_cast<int>(pts.front().size());
  if (pts.size() == 1) return {0, Mat(n, 0)};
  Mat D(n, static_cast<int>(pts.size()) - 1);
  for (std::size_t i = 1; i < pts.size(); ++i) D.col(static_cast<int>(i) - 1) = pts[i] - pts[0];
  Eigen::ColPivHouseholderQR<Mat> qr(D);
  qr.setThreshold(tol);
  const int r = static_cast<int>(qr.rank());
  Mat Q = qr.householderQ() * Mat::Identity(n, r);
  return {r, Q};
}

// Monotone chain. Returns the hull in CCW order; collinear points dropped.
inline std::vector<Eigen::Vector2d> hull_2d(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) {
                          return a.x() == b.x() && a.y() == b.y();
                        }),
            pts.end());
  const std::size_t k = pts.size();
  if (k < 3) return pts;
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> hull(2 * k);
  std::size_t h = 0;
  for (std::size_t i = 0; i < k; ++i) {
    while (h >= 2 && cross(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  for (std::size_t i = k - 1, lower = h + 1; i-- > 0;) {
    while (h >= lower && cross(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  hull.resize(h - 1);
  return hull;
}

inline double polygon_area(const std::vector<Eigen::Vector2d>& ccw) {
  if (ccw.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const auto& a = ccw[i];
    const auto& b = ccw[(i + 1) % ccw.size()];
    twice += a.x() * b.y() - a.y() * b.x();
  }
  return 0.5 * std::abs(twice);
}

inline double det3(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  return a.x() * (b.y() * c.z() - b.z() * c.y()) - a.y() * (b.x() * c.z() - b.z() * c.x()) +
         a.z() * (b.x() * c.y() - b.y() * c.x());
}

// Vector orthogonal to d-1 rows in R^d (d <= 4), by cofactor expansion.
// Near-zero result means the rows are dependent.
inline Vec orthogonal_vector(const std::vector<Vec>& rows, int d) {
  Vec n(d);
  if (d == 1) {
    n[0] = 1.0;
  } else if (d == 2) {
    n[0] = -rows[0][1];
    n[1] = rows[0][0];
  } else if (d == 3) {
    const Vec& a = rows[0];
    const Vec& b = rows[1];
    n[0] = a[1] * b[2] - a[2] * b[1];
    n[1] = a[2] * b[0] - a[0] * b[2];
    n[2] = a[0] * b[1] - a[1] * b[0];
  } else {
    for (int i = 0; i < 4; ++i) {
      Eigen::Vector3d m[3];
      for (int r = 0; r < 3; ++r) {
        int c = 0;
        for (int j = 0; j < 4; ++j) {
          if (j == i) continue;
        m[r][c++] = rows[r][j];
        }
      }
      n[i] = ((i % 2) ? -1.0 : 1.0) * det3(m[0], m[1], m[2]);
    }
  }
  return n;
}

template <typename F>
inline void for_each_subset(int n, int m, F&& fn) {
  if (m > n || m < 0) return;
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = m - 1;
    while (i >= 0 && idx[i] == n - m + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

struct Facet {
  Vec unit_normal;       // outward
  double offset;         // <n, x> <= offset supports the hull
  std::vector<int> ids;  // points lying on the facet plane
};

// Supporting-hyperplane enumeration for a full-dimensional point set in R^d,
// d in {2,3,4}. Brute force over d-subsets; facets deduplicated by their
// on-plane point sets. Intended for desk-scale vertex counts.
inline std::vector<Facet> enumerate_facets(const std::vector<Vec>& pts, int d) {
  const double scale = coord_scale(pts);
  const double tol = 1e-9 * scale;
  std::vector<Facet> facets;
  std::vector<std::vector<int>> seen_keys;
  const int k = static_cast<int>(pts.size());
  for_each_subset(k, d, [&](const std::vector<int>& idx) {
    std::vector<Vec> rows;
    rows.reserve(d - 1);
    for (int i = 1; i < d; ++i) rows.push_back(pts[idx[i]] - pts[idx[0]]);
    Vec n = orthogonal_vector(rows, d);
    double rownorms = 1.0;
    for (const Vec& r : rows) rownorms *= std::max(r.norm(), 1e-300);
    if (n.norm() <= 1e-9 * rownorms) return;  // degenerate subset
    n.normalize();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Vec& p : pts) {
      const double v = n.dot(p);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double h0 = n.dot(pts[idx[0]]);
    double offset;
    if (hi <= h0 + tol) {
      offset = hi;
    } else if (lo >= h0 - tol) {
      n = -n;
      offset = -lo;
    } else {
      return;  // not supporting
    }
    std::vector<int> ids;
    for (int i = 0; i < k; ++i)
      if (std::abs(n.dot(pts[i]) - offset) <= 2 * tol) ids.push_back(i);
    if (static_cast<int>(ids.size()) < d) return;
    std::sort(ids.begin(), ids.end());
    for (const auto& key : seen_keys)
      if (key == ids) return;
    seen_keys.push_back(ids);
    facets.push_back(Facet{std::move(n), offset, std::move(ids)});
  });
  return facets;
}

double polytope_volume(const std::vector<Vec>& raw_pts, int d);

// Orthonormal basis of the hyperplane orthogonal to `normal` (d x (d-1)).
inline Mat plane_basis(const Vec& normal) {
  const int d = static_cast<int>(normal.size());
  Eigen::HouseholderQR<Mat> qr(normal);
  Mat Q = qr.householderQ();
  return Q.rightCols(d - 1);
}

inline double polytope_volume(const std::vector<Vec>& raw_pts, int d) {
  if (raw_pts.empty()) return 0.0;
  const double scale = coord_scale(raw_pts);
  std::vector<Vec> pts = dedup_points(raw_pts, 1e-12 * scale);
  if (static_cast<int>(pts.size()) <= d) {
    // Possibly a simplex; rank check below still applies.
    if (static_cast<int>(pts.size()) < d + 1) return 0.0;
  }
  auto [rank, basis] = affine_basis(pts, 1e-11 * scale);
  if (rank < d) return 0.0;
  if (d == 1) {
    double lo = pts[0][0], hi = pts[0][0];
    for (const Vec& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return hi - lo;
  }
  if (d == 2) {
    std::vector<Eigen::Vector2d> p2(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) p2[i] = Eigen::Vector2d(pts[i][0], pts[i][1]);
    return polygon_area(hull_2d(std::move(p2)));
  }
  // d in {3, 4}: pyramid decomposition over the point centroid.
  Vec centroid = Vec::Zero(d);
  for (const Vec& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  double vol = 0.0;
  for (const Facet& f : enumerate_facets(pts, d)) {
    const double height = f.offset - f.unit_normal.dot(centroid);
    if (height <= 0.0) continue;
    Mat B = plane_basis(f.unit_normal);
    std::vector<Vec> fpts;
    fpts.reserve(f.ids.size());
    const Vec& p0 = pts[f.ids.front()];
    for (int id : f.ids) fpts.push_back(B.transpose() * (pts[id] - p0));
    vol += height * polytope_volume(fpts, d - 1) / static_cast<double>(d);
  }
  return vol;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Vertices, support functions, bounding boxes
// ---------------------------------------------------------------------------

// Explicit point representation: vertices (or a superset including interior
// points, for zonotopes via sign enumeration). Hull cleanup is deferred.
inline std::vector<Vec> body_points(const ConvexBody& body) {
  if (body.is_polytope()) return body.as_polytope().vertices;
  if (body.is_box()) {
    const AxisBox& b = body.as_box();
    const int n = body.dim();
    require(n <= kMaxEnumDim, ErrorKind::DimensionCap, "box corner enumeration capped at n=12");
    std::vector<Vec> pts;
    pts.reserve(std::size_t(1) << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
      Vec p(n);
      for (int i = 0; i < n; ++i) p[i] = (mask >> i) & 1 ? b.highs[i] : b.lows[i];
      pts.push_back(std::move(p));
    }
    return pts;
  }
  const Zonotope& z = body.as_zonotope();
  const int n = body.dim();
  const int N = static_cast<int>(z.generators.size());
  std::vector<Vec> pts;
  pts.reserve(std::size_t(1) << std::max(N, 1));
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << N); ++mask) {
    Vec p = Vec::Zero(n);
    for (int i = 0; i < N; ++i) p += ((mask >> i) & 1 ? 1.0 : -1.0) * z.generators[i];
    pts.push_back(std::move(p));
  }
  if (pts.empty()) pts.push_back(Vec::Zero(n));
  return pts;
}

inline double support_function(const ConvexBody& body, const Vec& u) {
  require(static_cast<int>(u.size()) == body.dim(), ErrorKind::InvalidArgument,
          "support direction dimension mismatch");
  if (body.is_polytope()) {
    double h = -std::numeric_limits<double>::infinity();
    for (const Vec& v : body.as_polytope().vertices) h = std::max(h, u.dot(v));
    return h;
  }
  if (body.is_zonotope()) {
    double h = 0.0;
    for (const Vec& g : body.as_zonotope().generators) h += std::abs(u.dot(g));
    return h;
  }
  const AxisBox& b = body.as_box();
  double h = 0.0;
  for (int i = 0; i < body.dim(); ++i)
    h += u[i] * 0.5 * (b.lows[i] + b.highs[i]) + std::abs(u[i]) * 0.5 * (b.highs[i] - b.lows[i]);
  return h;
}

inline AxisBox bounding_box(const ConvexBody& body) {
  const int n = body.dim();
  Vec lows(n), highs(n);
  if (body.is_box()) return body.as_box();
  if (body.is_zonotope()) {
    for (int k = 0; k < n; ++k) {
      double e = 0.0;
      for (const Vec& g : body.as_zonotope().generators) e += std::abs(g[k]);
      lows[k] = -e;
      highs[k] = e;
    }
    return AxisBox{lows, highs};
  }
  lows.setConstant(std::numeric_limits<double>::infinity());
  highs.setConstant(-std::numeric_limits<double>::infinity());
  for (const Vec& v : body.as_polytope().vertices) {
    lows = lows.cwiseMin(v);
    highs = highs.cwiseMax(v);
  }
  return AxisBox{lows, highs};
}

inline ConvexBody scale_body(const ConvexBody& body, double t) {
  require(t >= 0.0, ErrorKind::InvalidArgument, "scale factor must be nonnegative");
  if (body.is_polytope()) {
    auto vs = body.as_polytope().vertices;
    for (Vec& v : vs) v *= t;
    return ConvexBody::polytope(std::move(vs));
  }
  if (body.is_box()) {
    const AxisBox& b = body.as_box();
    return ConvexBody::box(t * b.lows, t * b.highs);
  }
  std::vector<Vec> gs;
  for (const Vec& g : body.as_zonotope().generators)
    if (t > 0.0) gs.push_back(t * g);
  return ConvexBody::zonotope(std::move(gs), body.dim());
}

// Translation. Zonotopes are stored origin-symmetric, so a translated zonotope
// comes back as a VPolytope over its sign-enumeration points.
inline ConvexBody translate_body(const ConvexBody& body, const Vec& shift) {
  require(static_cast<int>(shift.size()) == body.dim(), ErrorKind::InvalidArgument,
          "translation dimension mismatch");
  if (body.is_box()) {
    const AxisBox& b = body.as_box();
    return ConvexBody::box(b.lows + shift, b.highs + shift);
  }
  std::vector<Vec> pts = body_points(body);
  for (Vec& p : pts) p += shift;
  return ConvexBody::polytope(std::move(pts));
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

struct Halfspace {
  Vec normal;
  double offset;  // <normal, x> <= offset
};

// Precomputed point-membership test. Degenerate bodies are reduced to their
// affine hull and tested there.
class MembershipOracle {
 public:
  explicit MembershipOracle(const ConvexBody& body, double rel_tol = 1e-9) : rel_tol_(rel_tol) {
    build(body);
  }

  bool contains(const Vec& x) const {
    if (box_) {
      for (int i = 0; i < x.size(); ++i)
        if (x[i] < box_->lows[i] - tol_ || x[i] > box_->highs[i] + tol_) return false;
      return true;
    }
    Vec y = x;
    if (reduced_) {
      const Vec centered = x - origin_;
      y = basis_.transpose() * centered;
      const double residual = (centered - basis_ * y).norm();
      if (residual > tol_) return false;
      if (rank_ == 0) return true;
    }
    for (const Halfspace& h : halfspaces_)
      if (h.normal.dot(y) > h.offset + tol_) return false;
    return true;
  }

 private:
  void build(const ConvexBody& body) {
    const int n = body.dim();
    if (body.is_box()) {
      box_ = body.as_box();
      tol_ = rel_tol_ * std::max({1.0, box_->lows.cwiseAbs().maxCoeff(),
                                  box_->highs.cwiseAbs().maxCoeff()});
      return;
    }
    if (body.is_zonotope()) {
      const Zonotope& z = body.as_zonotope();
      Mat G(n, static_cast<int>(z.generators.size()));
      for (std::size_t i = 0; i < z.generators.size(); ++i) G.col(static_cast<int>(i)) = z.generators[i];
      double scale = z.generators.empty() ? 1.0 : G.cwiseAbs().maxCoeff();
      tol_ = rel_tol_ * std::max(1.0, scale);
      Eigen::ColPivHouseholderQR<Mat> qr(G);
      qr.setThreshold(1e-11 * std::max(1.0, scale));
      const int r = static_cast<int>(qr.rank());
      std::vector<Vec> gens = z.generators;
      if (r < n) {
        reduced_ = true;
        rank_ = r;
        origin_ = Vec::Zero(n);
        basis_ = qr.householderQ() * Mat::Identity(n, r);
        for (Vec& g : gens) g = basis_.transpose() * g;
        if (r == 0) return;
      }
      const int d = reduced_ ? rank_ : n;
      build_zonotope_halfspaces(gens, d);
      return;
    }
    const VPolytope& poly = body.as_polytope();
    const double scale = detail::coord_scale(poly.vertices);
    tol_ = rel_tol_ * scale;
    std::vector<Vec> pts = detail::dedup_points(poly.vertices, 1e-12 * scale);
    auto [rank, basis] = detail::affine_basis(pts, 1e-11 * scale);
    if (rank < n) {
      reduced_ = true;
      rank_ = rank;
      origin_ = pts.front();
      basis_ = basis;
      if (rank == 0) return;
      for (Vec& p : pts) p = basis_.transpose() * (p - origin_);
    }
    const int d = reduced_ ? rank_ : n;
    require(d <= kMaxExactPolytopeDim, ErrorKind::DimensionCap,
            "vpolytope membership requires affine dimension <= 4");
    if (d == 1) {
      double lo = pts[0][0], hi = pts[0][0];
      for (const Vec& p : pts) {
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
      }
      Vec e(1);
      e[0] = 1.0;
      halfspaces_.push_back({e, hi});
      halfspaces_.push_back({-e, -lo});
      return;
    }
    for (const detail::Facet& f : detail::enumerate_facets(pts, d))
      halfspaces_.push_back({f.unit_normal, f.offset});
  }

  void build_zonotope_halfspaces(const std::vector<Vec>& gens, int d) {
    require(d <= kMaxExactPolytopeDim, ErrorKind::DimensionCap,
            "zonotope membership requires dimension <= 4");
    auto add = [&](Vec n) {
      const double nn = n.norm();
      if (nn <= 1e-13) return;
      n /= nn;
      double h = 0.0;
      for (const Vec& g : gens) h += std::abs(n.dot(g));
      halfspaces_.push_back({n, h});
      halfspaces_.push_back({-n, h});
    };
    if (d == 1) {
      Vec e(1);
      e[0] = 1.0;
      add(e);
      return;
    }
    const int N = static_cast<int>(gens.size());
    detail::for_each_subset(N, d - 1, [&](const std::vector<int>& idx) {
      std::vector<Vec> rows;
      rows.reserve(d - 1);
      for (int i : idx) rows.push_back(gens[i]);
      add(detail::orthogonal_vector(rows, d));
    });
  }

  double rel_tol_;
  double tol_ = 1e-9;
  std::optional<AxisBox> box_;
  std::vector<Halfspace> halfspaces_;
  bool reduced_ = false;
  int rank_ = 0;
  Vec origin_;
  Mat basis_;
};

// ---------------------------------------------------------------------------
// Exact volume
// ---------------------------------------------------------------------------

inline double volume(const ConvexBody& body) {
  const int n = body.dim();
  if (body.is_box()) {
    require(n <= kMaxEnumDim, ErrorKind::DimensionCap, "box volume capped at n=12");
    const AxisBox& b = body.as_box();
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= b.highs[i] - b.lows[i];
    return v;
  }
  if (body.is_zonotope()) {
    require(n <= kMaxEnumDim, ErrorKind::DimensionCap, "zonotope volume capped at n=12");
    const Zonotope& z = body.as_zonotope();
    const int N = static_cast<int>(z.generators.size());
    if (N < n) return 0.0;
    double sum = 0.0;
    detail::for_each_subset(N, n, [&](const std::vector<int>& idx) {
      Mat M(n, n);
      for (int c = 0; c < n; ++c) M.col(c) = z.generators[idx[c]];
      sum += std::abs(M.determinant());
    });
    return std::ldexp(sum, n);  // 2^n * sum of |det|
  }
  require(n <= kMaxExactPolytopeDim, ErrorKind::DimensionCap,
          "exact vpolytope volume requires n <= 4");
  return detail::polytope_volume(body.as_polytope().vertices, n);
}

// ---------------------------------------------------------------------------
// Monte Carlo volume
// ---------------------------------------------------------------------------

inline constexpr std::int64_t kMcChunk = 65536;

// Hit-or-miss estimate of vol{x in box : membership(x)}. Samples are drawn in
// fixed-size chunks whose substreams depend only on (seed, chunk index), so
// the estimate is reproducible regardless of how work is scheduled.
inline McEstimate volume_mc(const std::function<bool(const Vec&)>& membership,
                            const AxisBox& box, std::int64_t samples, std::uint64_t seed) {
  require(samples >= 1000, ErrorKind::InvalidArgument, "volume_mc requires samples >= 1000");
  const int n = static_cast<int>(box.lows.size());
  double box_vol = 1.0;
  for (int i = 0; i < n; ++i) box_vol *= box.highs[i] - box.lows[i];
  std::int64_t hits = 0;
  Vec x(n);
  for (std::int64_t start = 0, chunk = 0; start < samples; start += kMcChunk, ++chunk) {
    Rng rng(chunk_seed(seed, static_cast<std::uint64_t>(chunk)));
    const std::int64_t count = std::min(kMcChunk, samples - start);
    for (std::int64_t s = 0; s < count; ++s) {
      for (int i = 0; i < n; ++i) x[i] = box.lows[i] + (box.highs[i] - box.lows[i]) * rng.next_double();
      if (membership(x)) ++hits;
    }
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  McEstimate est;
  est.value = box_vol * p;
  est.std_err = box_vol * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  est.samples = samples;
  est.seed = seed;
  return est;
}

// ---------------------------------------------------------------------------
// Polar bodies of zonotopes
// ---------------------------------------------------------------------------

// y lies in Z° iff h_Z(y) = sum_i |<y, v_i>| <= 1.
inline bool polar_membership(const Zonotope& z, const Vec& y) {
  double s = 0.0;
  for (const Vec& g : z.generators) {
    s += std::abs(y.dot(g));
    if (s > 1.0) return false;
  }
  return s <= 1.0;
}

// Componentwise bounding box of Z°. The min-norm coefficient solution of
// V c = e_k certifies gauge_Z(e_k) <= |c|_inf, hence max_{y in Z°} |y_k|
// <= |c|_inf; a 25% margin keeps accepted samples clear of the box boundary.
inline AxisBox polar_bounding_box(const Zonotope& z, int n) {
  Mat V(n, static_cast<int>(z.generators.size()));
  for (std::size_t i = 0; i < z.generators.size(); ++i) V.col(static_cast<int>(i)) = z.generators[i];
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(V);
  Vec lows(n), highs(n);
  for (int k = 0; k < n; ++k) {
    Vec e = Vec::Zero(n);
    e[k] = 1.0;
    const Vec c = cod.solve(e);
    require((V * c - e).norm() <= 1e-9, ErrorKind::DegenerateBody,
            "polar body is unbounded (zonotope not full-dimensional)");
    const double m = 1.25 * c.cwiseAbs().maxCoeff();
    lows[k] = -m;
    highs[k] = m;
  }
  return AxisBox{lows, highs};
}

inline McEstimate polar_volume(const ConvexBody& body, std::int64_t samples, std::uint64_t seed) {
  require(body.is_zonotope(), ErrorKind::InvalidArgument, "polar_volume expects a zonotope");
  require(volume(body) > 0.0, ErrorKind::DegenerateBody,
          "zonotope is not full-dimensional; polar body is unbounded");
  const Zonotope& z = body.as_zonotope();
  const int n = body.dim();
  const AxisBox box = polar_bounding_box(z, n);
  bool near_boundary = false;
  auto member = [&](const Vec& y) {
    if (!polar_membership(z, y)) return false;
    for (int k = 0; k < n; ++k)
      if (std::abs(y[k]) >= 0.99 * box.highs[k]) near_boundary = true;
    return true;
  };
  McEstimate est = volume_mc(member, box, samples, seed);
  require(!near_boundary, ErrorKind::InvalidArgument,
          "polar bounding box certificate violated: accepted sample within 1% of the box boundary");
  return est;
}

// ---------------------------------------------------------------------------
// Linear images
// ---------------------------------------------------------------------------

namespace detail {

inline bool signed_coordinate_rows(const Mat& A, std::vector<std::pair<int, double>>& out) {
  out.clear();
  for (int r = 0; r < A.rows(); ++r) {
    int nz = -1;
    for (int c = 0; c < A.cols(); ++c) {
      if (A(r, c) == 0.0) continue;
      if (nz >= 0 || (A(r, c) != 1.0 && A(r, c) != -1.0)) return false;
      nz = c;
    }
    if (nz < 0) return false;
    out.emplace_back(nz, A(r, nz));
  }
  return true;
}

}  // namespace detail

// Linear image A K. Vertex lists and generator lists map through A; axis boxes
// stay boxes under signed coordinate selections and otherwise become the
// zonotope of their side generators (the image translate is dropped, which is
// harmless for the translation-invariant volume machinery downstream).
inline ConvexBody project(const ConvexBody& body, const ProjectionMatrix& proj) {
  const Mat& A = proj.A;
  require(static_cast<int>(A.cols()) == body.dim(), ErrorKind::InvalidArgument,
          "projection dimension mismatch");
  const int m = static_cast<int>(A.rows());
  if (body.is_polytope()) {
    std::vector<Vec> vs;
    vs.reserve(body.as_polytope().vertices.size());
    for (const Vec& v : body.as_polytope().vertices) vs.push_back(A * v);
    return ConvexBody::polytope(std::move(vs));
  }
  if (body.is_zonotope()) {
    std::vector<Vec> gs;
    for (const Vec& g : body.as_zonotope().generators) {
      Vec img = A * g;
      if (img.norm() > 0.0) gs.push_back(std::move(img));
    }
    return ConvexBody::zonotope(std::move(gs), m);
  }
  const AxisBox& b = body.as_box();
  std::vector<std::pair<int, double>> rows;
  if (detail::signed_coordinate_rows(A, rows)) {
    Vec lows(m), highs(m);
    for (int r = 0; r < m; ++r) {
      const auto [c, s] = rows[r];
      if (s > 0) {
        lows[r] = b.lows[c];
        highs[r] = b.highs[c];
      } else {
        lows[r] = -b.highs[c];
        highs[r] = -b.lows[c];
      }
    }
    return ConvexBody::box(std::move(lows), std::move(highs));
  }
  std::vector<Vec> gs;
  for (int i = 0; i < body.dim(); ++i) {
    const double half = 0.5 * (b.highs[i] - b.lows[i]);
    if (half == 0.0) continue;
    Vec img = A.col(i) * half;
    if (img.norm() > 0.0) gs.push_back(std::move(img));
  }
  return ConvexBody::zonotope(std::move(gs), m);
}

// ---------------------------------------------------------------------------
// Minkowski sums with cubes (exact in the plane)
// ---------------------------------------------------------------------------

// K + t[0,1]^2 as an exact convex polygon: the sum of two convex polygons is
// the hull of pairwise vertex sums.
inline ConvexBody minkowski_sum_cube(const ConvexBody& body, double t) {
  require(body.dim() == 2, ErrorKind::DimensionCap, "exact Minkowski sum with a cube requires n=2");
  require(t >= 0.0, ErrorKind::InvalidArgument, "cube scale must be nonnegative");
  const std::array<Eigen::Vector2d, 4> corners = {
      Eigen::Vector2d(0, 0), Eigen::Vector2d(t, 0), Eigen::Vector2d(t, t), Eigen::Vector2d(0, t)};
  std::vector<Eigen::Vector2d> sums;
  for (const Vec& p : body_points(body))
    for (const auto& c : corners) sums.emplace_back(p[0] + c[0], p[1] + c[1]);
  std::vector<Eigen::Vector2d> hull = detail::hull_2d(std::move(sums));
  std::vector<Vec> verts;
  verts.reserve(hull.size());
  for (const auto& p : hull) {
    Vec v(2);
    v << p.x(), p.y();
    verts.push_back(std::move(v));
  }
  return ConvexBody::polytope(std::move(verts));
}

// ---------------------------------------------------------------------------
// Lattice point counts
// ---------------------------------------------------------------------------

inline long long lattice_points(const ConvexBody& body) {
  const int n = body.dim();
  require(n <= 3, ErrorKind::DimensionCap, "lattice point enumeration requires n <= 3");
  const AxisBox bb = bounding_box(body);
  MembershipOracle oracle(body);
  std::vector<long long> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = static_cast<long long>(std::ceil(bb.lows[i] - 1e-9));
    hi[i] = static_cast<long long>(std::floor(bb.highs[i] + 1e-9));
  }
  long long count = 0;
  Vec x(n);
  std::vector<long long> c(lo);
  if (n >= 1) {
    for (long long i = lo[0]; i <= hi[0]; ++i) {
      x[0] = static_cast<double>(i);
      if (n == 1) {
        if (oracle.contains(x)) ++count;
        continue;
      }
      for (long long j = lo[1]; j <= hi[1]; ++j) {
        x[1] = static_cast<double>(j);
        if (n == 2) {
          if (oracle.contains(x)) ++count;
          continue;
        }
        for (long long k = lo[2]; k <= hi[2]; ++k) {
          x[2] = static_cast<double>(k);
          if (oracle.contains(x)) ++count;
        }
      }
    }
  }
  return count;
}

}  // namespace magvol
