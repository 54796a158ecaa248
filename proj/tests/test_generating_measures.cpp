#include <catch2/catch_amalgamated.hpp>

#include "magvol/generating_measures.hpp"
#include "support/oracles.hpp"

using namespace magvol;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

double max_rel_norm_error_vs(const GeneratingMeasure& m,
                             const std::vector<Vec>& test_vectors) {
  double worst = 0.0;
  for (const Vec& x : test_vectors) {
    const double l2 = x.norm();
    if (l2 <= 0) continue;
    worst = std::max(worst, std::abs(m.norm(x) - l2) / l2);
  }
  return worst;
}

}  // namespace

TEST_CASE("l1 measure induces exactly the l1 norm") {
  const GeneratingMeasure m2 = l1_measure(2);
  CHECK(m2.norm(v2(1, 1)) == 2.0);
  CHECK(m2.norm(Vec::Zero(2)) == 0.0);

  const GeneratingMeasure m1 = l1_measure(1);
  Vec t(1);
  t << -3.5;
  CHECK(m1.norm(t) == 3.5);

  Vec x3(3);
  x3 << 1, -2, 3;
  CHECK(l1_measure(3).norm(x3) == 6.0);

  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng.next_below(4));
    Vec x(n);
    for (int j = 0; j < n; ++j) x[j] = rng.uniform(-5, 5);
    CHECK(std::abs(l1_measure(n).norm(x) - x.cwiseAbs().sum()) <= 1e-12);
  }
}

TEST_CASE("a non-spanning measure is flagged as a seminorm") {
  // Single antipodal pair +-e1 (canonical: one atom, pair weight 1).
  Vec e1 = v2(1, 0);
  const GeneratingMeasure m({{e1, 1.0}}, 2);
  CHECK_FALSE(m.spans());
  CHECK(m.norm(v2(3, 4)) == 3.0);
}

TEST_CASE("measure construction validates directions and weights") {
  CHECK_THROWS_AS(GeneratingMeasure({{v2(1, 1), 1.0}}, 2), DomainError);   // not unit
  CHECK_THROWS_AS(GeneratingMeasure({{v2(1, 0), 0.0}}, 2), DomainError);   // zero weight
  CHECK_THROWS_AS(GeneratingMeasure({{v2(1, 0), -1.0}}, 2), DomainError);  // negative weight
}

TEST_CASE("measure norms are homogeneous and satisfy the triangle inequality") {
  const GeneratingMeasure m = random_measure(3, 6, 99);
  Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    Vec x(3), y(3);
    for (int j = 0; j < 3; ++j) {
      x[j] = rng.uniform(-2, 2);
      y[j] = rng.uniform(-2, 2);
    }
    const double t = rng.uniform(-3, 3);
    CHECK(std::abs(m.norm(t * x) - std::abs(t) * m.norm(x)) <= 1e-12 * (1.0 + m.norm(x)));
    CHECK(m.norm(x + y) <= m.norm(x) + m.norm(y) + 1e-12);
  }
}

TEST_CASE("euclidean measure calibration and convergence") {
  const GeneratingMeasure m = euclidean_measure(2, 180);
  CHECK(m.norm(v2(1, 0)) == Catch::Approx(1.0).margin(1e-15));  // forced by calibration

  Rng rng(501);
  std::vector<Vec> dirs;
  for (int i = 0; i < 1000; ++i) {
    Vec x(2);
    x << rng.normal(), rng.normal();
    if (x.norm() > 1e-9) dirs.push_back(x / x.norm());
  }
  const double err180 = max_rel_norm_error_vs(m, dirs);
  CHECK(err180 < 1e-4);

  const double err360 = max_rel_norm_error_vs(euclidean_measure(2, 360), dirs);
  CHECK(err360 < err180);

  // Total weight approximates pi / integral of |cos| over [0, pi]; the
  // quadrature oracle pins that integral at 2.
  double total = 0.0;
  for (const MeasureAtom& a : m.atoms()) total += a.weight;
  const double integral = oracles::quad_abs_cos(100000);
  CHECK(integral == Catch::Approx(2.0).margin(1e-8));
  CHECK(total == Catch::Approx(M_PI / integral).margin(1e-3));

  // Reported discretization error matches an independent re-measurement.
  REQUIRE(m.target_norm_error().has_value());
  CHECK(*m.target_norm_error() < 1e-4);

  // n = 3: calibration on e1, sane reported error, halving under refinement.
  const GeneratingMeasure m3 = euclidean_measure(3, 200);
  Vec e1 = Vec::Zero(3);
  e1[0] = 1.0;
  CHECK(m3.norm(e1) == Catch::Approx(1.0).margin(1e-15));
  CHECK(*m3.target_norm_error() < 0.05);
  CHECK(*euclidean_measure(3, 400).target_norm_error() < *m3.target_norm_error());

  CHECK_THROWS_AS(euclidean_measure(4, 50), DomainError);
  CHECK_THROWS_AS(euclidean_measure(2, 3), DomainError);
}

TEST_CASE("a small even measure in the plane still spans") {
  const GeneratingMeasure m = euclidean_measure(2, 4);
  CHECK(m.spans());
  CHECK(m.size() == 4);
}

TEST_CASE("random measures are reproducible and well-formed") {
  const GeneratingMeasure a = random_measure(3, 5, 42);
  const GeneratingMeasure b = random_measure(3, 5, 42);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.atoms()[i].dir == b.atoms()[i].dir);
    CHECK(a.atoms()[i].weight == b.atoms()[i].weight);
  }
  CHECK(a.spans());
  for (const MeasureAtom& atom : a.atoms()) {
    CHECK(std::abs(atom.dir.norm() - 1.0) <= 1e-12);
    CHECK(atom.weight > 0.1);
    CHECK(atom.weight <= 1.0);
  }
  const GeneratingMeasure c = random_measure(3, 5, 43);
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i) same = same && a.atoms()[i].dir == c.atoms()[i].dir;
  CHECK_FALSE(same);
}

TEST_CASE("a two-atom planar measure has a parallelogram unit ball") {
  // The unit ball {x : sum w_j |<x, theta_j>| <= 1} is the polar of the
  // zonotope with generators w_j theta_j; for two atoms that is a 4-gon.
  const GeneratingMeasure m = random_measure(2, 2, 321);
  std::vector<Vec> gens;
  for (const MeasureAtom& a : m.atoms()) gens.push_back(a.weight * a.dir);

  double big = 0.0;
  for (const Vec& g : gens) big += g.norm();
  big = 10.0 / std::max(big, 1e-12) * (1.0 + big * big);
  std::vector<Eigen::Vector2d> ball = {{-big, -big}, {big, -big}, {big, big}, {-big, big}};
  for (int mask = 0; mask < 4; ++mask) {
    Eigen::Vector2d u(0, 0);
    for (int i = 0; i < 2; ++i)
      u += (((mask >> i) & 1) ? 1.0 : -1.0) * Eigen::Vector2d(gens[i][0], gens[i][1]);
    ball = oracles::clip_halfplane(ball, u, 1.0);
  }
  CHECK(ball.size() == 4);
  for (const auto& vtx : ball) CHECK(m.norm(v2(vtx.x(), vtx.y())) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("embed_l1 is an isometry into l1^N") {
  // For the l1 measure the embedding is the identity on coordinates.
  const GeneratingMeasure m = l1_measure(2);
  const std::vector<Vec> pts = {v2(0, 0), v2(1, 2), v2(-1, 0.5)};
  const auto images = embed_l1(m, pts);
  REQUIRE(images.size() == 3);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      CHECK(std::abs((images[i] - images[j]).cwiseAbs().sum() -
                     (pts[i] - pts[j]).cwiseAbs().sum()) <= 1e-14);

  // Single point.
  CHECK(embed_l1(m, {v2(3, 4)}).size() == 1);

  // Random measures: distortion below 1e-10 over many pairs.
  Rng rng(314);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + (trial % 2);
    const GeneratingMeasure rm = random_measure(n, n + 3, 1000 + trial);
    std::vector<Vec> qs;
    for (int i = 0; i < 50; ++i) {
      Vec q(n);
      for (int j = 0; j < n; ++j) q[j] = rng.uniform(-2, 2);
      qs.push_back(q);
    }
    const auto im = embed_l1(rm, qs);
    double worst = 0.0;
    for (std::size_t i = 0; i < qs.size(); ++i)
      for (std::size_t j = i + 1; j < qs.size(); ++j)
        worst = std::max(worst, std::abs((im[i] - im[j]).cwiseAbs().sum() -
                                         rm.norm(qs[i] - qs[j])));
    CHECK(worst < 1e-10);
  }

  // Non-spanning measures are rejected.
  const GeneratingMeasure semi({{v2(1, 0), 1.0}}, 2);
  CHECK_THROWS_AS(embed_l1(semi, pts), DomainError);
}
