#include <catch2/catch_amalgamated.hpp>

#include "magvol/intrinsic_volumes.hpp"
#include "support/random_bodies.hpp"

using namespace magvol;

namespace {

Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("omega constants") {
  const auto c = IntrinsicConstants::upto(4);
  CHECK(c.omegas[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(c.omegas[1] == Catch::Approx(2.0).margin(1e-12));
  CHECK(c.omegas[2] == Catch::Approx(M_PI).margin(1e-12));
  CHECK(c.omegas[3] == Catch::Approx(4.0 * M_PI / 3.0).margin(1e-12));
  CHECK(c.omegas[4] == Catch::Approx(M_PI * M_PI / 2.0).margin(1e-12));
}

TEST_CASE("l1 intrinsic volumes of simple bodies") {
  const auto box = l1_intrinsic_volumes(ConvexBody::box(v2(0, 0), v2(3, 5)));
  CHECK(box.values[0] == 1.0);
  CHECK(box.values[1] == Catch::Approx(8.0));
  CHECK(box.values[2] == Catch::Approx(15.0));

  const auto seg = l1_intrinsic_volumes(ConvexBody::box(v1(0), v1(2.5)));
  CHECK(seg.values[0] == 1.0);
  CHECK(seg.values[1] == 2.5);

  const auto pt = l1_intrinsic_volumes(ConvexBody::polytope({v3(1, 2, 3)}));
  CHECK(pt.values == std::vector<double>{1.0, 0.0, 0.0, 0.0});

  const auto tri = l1_intrinsic_volumes(ConvexBody::polytope({v2(0, 0), v2(2, 0), v2(0, 2)}));
  CHECK(tri.values[1] == Catch::Approx(4.0));
  CHECK(tri.values[2] == Catch::Approx(2.0));

  CHECK_THROWS_AS(l1_intrinsic_volumes(ConvexBody::box(Vec::Zero(5), Vec::Ones(5))), DomainError);
}

TEST_CASE("box closed form matches the projection enumeration") {
  auto cf = box_l1_closed_form(v2(2, 2));
  CHECK(cf.values == std::vector<double>{1.0, 4.0, 4.0});

  Vec len1(1);
  len1 << 7.0;
  CHECK(box_l1_closed_form(len1).values == std::vector<double>{1.0, 7.0});

  const auto cf3 = box_l1_closed_form(v3(1, 1, 1));
  CHECK(cf3.values == std::vector<double>{1.0, 3.0, 3.0, 1.0});
  const auto enum3 =
      l1_intrinsic_volumes(ConvexBody::box(Vec::Zero(3), Vec::Ones(3)));
  for (int m = 0; m <= 3; ++m) CHECK(cf3.values[m] == Catch::Approx(enum3.values[m]).margin(1e-12));

  Rng rng(606);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(4));
    Vec lo(n), len(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = rng.uniform(-2, 2);
      len[i] = rng.uniform(0, 2);
    }
    const auto a = box_l1_closed_form(len);
    const auto b = l1_intrinsic_volumes(ConvexBody::box(lo, lo + len));
    for (int m = 0; m <= n; ++m) CHECK(a.values[m] == Catch::Approx(b.values[m]).margin(1e-10));
  }

  CHECK_THROWS_AS(box_l1_closed_form(v2(-1, 1)), DomainError);
}

TEST_CASE("master regression: l1-measure Holmes-Thompson equals 2^m V'_m") {
  Rng rng(2718);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + (trial % 2);
    const ConvexBody body = testbodies::random_body(rng, n, trial);
    const auto vp = l1_intrinsic_volumes(body);
    const auto mu = ht_intrinsic_volumes(body, l1_measure(n));
    for (int m = 0; m <= n; ++m) {
      const double expected = std::ldexp(vp.values[m], m);
      CHECK(mu.values[m] == Catch::Approx(expected).epsilon(1e-9).margin(1e-12));
    }
  }
}

TEST_CASE("4D bodies run through the full tuple machinery") {
  Vec len(4);
  len << 0.5, 1.0, 1.5, 2.0;
  const ConvexBody box = ConvexBody::box(Vec::Zero(4), len);
  const auto cf = box_l1_closed_form(len);
  const auto mu = ht_intrinsic_volumes(box, l1_measure(4));
  for (int m = 0; m <= 4; ++m)
    CHECK(mu.values[m] == Catch::Approx(std::ldexp(cf.values[m], m)).epsilon(1e-10));
}

TEST_CASE("Holmes-Thompson volumes at top degree recover the symplectic product") {
  // mu_2 of [-1,1]^2 under the l1 measure: 2^2 V'_2 = 16.
  const auto mu = ht_intrinsic_volumes(ConvexBody::box(v2(-1, -1), v2(1, 1)), l1_measure(2));
  CHECK(mu.values[2] == Catch::Approx(16.0));

  // For the unit ball of the norm itself: mu_n(B) = vol(B) vol(B polar).
  // The l1-measure norm has unit ball B_1^2, polar B_inf^2: 2 * 4 = 8.
  const ConvexBody b1 =
      ConvexBody::polytope({v2(1, 0), v2(-1, 0), v2(0, 1), v2(0, -1)});
  const auto mu_ball = ht_intrinsic_volumes(b1, l1_measure(2));
  CHECK(mu_ball.values[2] == Catch::Approx(8.0));

  const auto pt = ht_intrinsic_volumes(ConvexBody::polytope({v2(4, 4)}), l1_measure(2));
  CHECK(pt.values == std::vector<double>{1.0, 0.0, 0.0});
}

TEST_CASE("ht_mu1 agrees with the full tuple enumeration") {
  Rng rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + (trial % 2);
    const ConvexBody body = testbodies::random_body(rng, n, trial + 1);
    const GeneratingMeasure m = random_measure(n, n + 2 + (trial % 3), 40 + trial);
    const auto mu = ht_intrinsic_volumes(body, m);
    CHECK(ht_mu1(body, m) == Catch::Approx(mu.values[1]).epsilon(1e-10));
  }
}

TEST_CASE("tuple budget is enforced") {
  const GeneratingMeasure big = random_measure(3, 300, 1);
  CHECK_THROWS_AS(ht_intrinsic_volumes(ConvexBody::box(Vec::Zero(3), Vec::Ones(3)), big),
                  DomainError);
  try {
    ht_intrinsic_volumes(ConvexBody::box(Vec::Zero(3), Vec::Ones(3)), big);
  } catch (const DomainError& e) {
    CHECK(e.kind() == ErrorKind::TupleBudgetExceeded);
  }
}

TEST_CASE("normalization divides by omega_m") {
  IntrinsicVolumeVector mu;
  mu.kind = IvKind::HolmesThompson;
  mu.values = {1.0, 4.0, M_PI * M_PI};
  const auto tilde = normalize(mu, IntrinsicConstants::upto(2));
  CHECK(tilde.kind == IvKind::HolmesThompsonNormalized);
  CHECK(tilde.values[0] == Catch::Approx(1.0));
  CHECK(tilde.values[1] == Catch::Approx(2.0));
  CHECK(tilde.values[2] == Catch::Approx(M_PI));
  CHECK_THROWS_AS(normalize(tilde, IntrinsicConstants::upto(2)), DomainError);
}

TEST_CASE("discretized l2 measure reproduces Euclidean intrinsic volumes") {
  const GeneratingMeasure m = euclidean_measure(2, 180);
  const ConvexBody sq = ConvexBody::box(v2(0, 0), v2(1, 1));
  const auto tilde = normalize(ht_intrinsic_volumes(sq, m), IntrinsicConstants::upto(2));
  // V_1 of the unit square is half its perimeter.
  CHECK(std::abs(tilde.values[1] - 2.0) / 2.0 < 0.005);
  CHECK(std::abs(tilde.values[2] - 1.0) < 0.005);
  CHECK(euclidean_polygon_intrinsic(sq).values == std::vector<double>{1.0, 2.0, 1.0});
  CHECK(euclidean_box_intrinsic(v3(1, 2, 3)).values ==
        std::vector<double>{1.0, 6.0, 11.0, 6.0});
}

TEST_CASE("supermultiplicativity rows") {
  // Point body: all nontrivial rows are 0 <= 0.
  const auto pt = ht_intrinsic_volumes(ConvexBody::polytope({v3(0, 0, 0)}), l1_measure(3));
  for (const auto& row : check_supermultiplicativity(pt)) CHECK(row.ok);

  // Unit square with the l1 measure: mu = (1, 4, 4); mu_2 = 4 <= mu_1^2/2 = 8.
  const auto sq = ht_intrinsic_volumes(ConvexBody::box(v2(0, 0), v2(1, 1)), l1_measure(2));
  CHECK(sq.values == std::vector<double>{1.0, 4.0, 4.0});
  bool saw_11 = false;
  for (const auto& row : check_supermultiplicativity(sq)) {
    CHECK(row.ok);
    if (row.i == 1 && row.j == 1) {
      saw_11 = true;
      CHECK(row.lhs == Catch::Approx(4.0));
      CHECK(row.rhs == Catch::Approx(8.0));
    }
  }
  CHECK(saw_11);

  // Random zonotopes and measures in R^3 (exact projected volumes).
  Rng rng(424242);
  for (int trial = 0; trial < 10; ++trial) {
    const ConvexBody z = testbodies::random_zonotope(rng, 3, 4 + trial % 3);
    const GeneratingMeasure m = random_measure(3, 3 + trial % 5, 900 + trial);
    for (const auto& row : check_supermultiplicativity(ht_intrinsic_volumes(z, m)))
      CHECK(row.ok);
  }

  IntrinsicVolumeVector wrong;
  wrong.kind = IvKind::L1Prime;
  wrong.values = {1.0, 1.0};
  CHECK_THROWS_AS(check_supermultiplicativity(wrong), DomainError);
}

TEST_CASE("homogeneity: values[m] scale like t^m") {
  Rng rng(121);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + (trial % 2);
    const ConvexBody body = testbodies::random_body(rng, n, trial);
    const GeneratingMeasure m = random_measure(n, n + 2, 50 + trial);
    const auto base = ht_intrinsic_volumes(body, m);
    for (double t : {0.5, 2.0, 3.0}) {
      const auto scaled = ht_intrinsic_volumes(scale_body(body, t), m);
      for (int mm = 0; mm <= n; ++mm)
        CHECK(scaled.values[mm] ==
              Catch::Approx(std::pow(t, mm) * base.values[mm]).epsilon(1e-9).margin(1e-12));
    }
  }
}

TEST_CASE("monotonicity under set containment for hypermetric measures") {
  Rng rng(333);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + (trial % 2);
    const GeneratingMeasure m = random_measure(n, n + 3, 60 + trial);

    // Nested boxes.
    Vec lo(n), hi(n), pad(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = rng.uniform(-1, 0);
      hi[i] = rng.uniform(0.5, 1.5);
      pad[i] = rng.uniform(0.1, 0.8);
    }
    const auto inner = ht_intrinsic_volumes(ConvexBody::box(lo, hi), m);
    const auto outer = ht_intrinsic_volumes(ConvexBody::box(lo - pad, hi + pad), m);
    for (int mm = 0; mm <= n; ++mm) CHECK(inner.values[mm] <= outer.values[mm] + 1e-9);

    // A zonotope contains its scaled-down copy.
    const ConvexBody z = testbodies::random_zonotope(rng, n, n + 2);
    const auto zi = ht_intrinsic_volumes(scale_body(z, 0.6), m);
    const auto zo = ht_intrinsic_volumes(z, m);
    for (int mm = 0; mm <= n; ++mm) CHECK(zi.values[mm] <= zo.values[mm] + 1e-9);
  }
}

TEST_CASE("valuation property on axis-box unions") {
  // V'(K u L) + V'(K n L) = V'(K) + V'(L) when the union is again a box.
  Rng rng(246);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(3));
    Vec lo(n), mid_lo(n), mid_hi(n), hi(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = rng.uniform(-1, 0);
      hi[i] = rng.uniform(1, 2);
      mid_lo[i] = lo[i];
      mid_hi[i] = hi[i];
    }
    // Overlap along one axis only, so K u L stays a box.
    const int axis = static_cast<int>(rng.next_below(n));
    mid_lo[axis] = rng.uniform(0.1, 0.4);
    mid_hi[axis] = rng.uniform(0.5, 0.9);
    Vec k_hi = hi, l_lo = lo;
    k_hi[axis] = mid_hi[axis];
    l_lo[axis] = mid_lo[axis];

    const auto vk = l1_intrinsic_volumes(ConvexBody::box(lo, k_hi));
    const auto vl = l1_intrinsic_volumes(ConvexBody::box(l_lo, hi));
    const auto vu = l1_intrinsic_volumes(ConvexBody::box(lo, hi));
    const auto vi = l1_intrinsic_volumes(ConvexBody::box(l_lo, k_hi));
    for (int m = 0; m <= n; ++m)
      CHECK(vu.values[m] + vi.values[m] ==
            Catch::Approx(vk.values[m] + vl.values[m]).epsilon(1e-10).margin(1e-12));
  }
}

TEST_CASE("translation invariance and permutation equivariance") {
  Rng rng(77);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + (trial % 2);
    const ConvexBody body = testbodies::random_body(rng, n, trial);
    Vec shift(n);
    for (int i = 0; i < n; ++i) shift[i] = rng.uniform(-4, 4);
    const auto a = l1_intrinsic_volumes(body);
    const auto b = l1_intrinsic_volumes(translate_body(body, shift));
    for (int m = 0; m <= n; ++m)
      CHECK(a.values[m] == Catch::Approx(b.values[m]).epsilon(1e-9).margin(1e-9));

    // Coordinate permutation leaves V' unchanged.
    Mat P = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) P(i, (i + 1) % n) = 1.0;
    const auto c = l1_intrinsic_volumes(project(body, ProjectionMatrix{P}));
    for (int m = 0; m <= n; ++m)
      CHECK(a.values[m] == Catch::Approx(c.values[m]).epsilon(1e-10).margin(1e-12));
  }
}
