#include <doctest.h>

#include <numbers>

#include "test_support.hpp"
#include "vmlab/error.hpp"
#include "vmlab/normed.hpp"

using namespace vmlab;
using namespace vmlab::testing;

namespace {

// Objective written out directly from its definition, independent of the library.
double objective(const SpaceDescriptor& s, const std::vector<Vector>& vs, const std::vector<double>& mu, double p,
                 const std::vector<double>& xs) {
  double total = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    double t = 0.0;
    for (std::size_t j = 0; j < s.dim(); ++j) t += s.weight(j) * vs[i][j] * xs[j];
    total += mu[i] * std::pow(std::abs(t), p);
  }
  return std::pow(total, 1.0 / p);
}

double dual_norm_direct(const SpaceDescriptor& s, const std::vector<double>& xs) {
  const double r = conjugate_exponent(s.q());
  if (std::isinf(r)) {
    double m = 0.0;
    for (double v : xs) m = std::max(m, std::abs(v));
    return m;
  }
  double t = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) t += s.weight(j) * std::pow(std::abs(xs[j]), r);
  return std::pow(t, 1.0 / r);
}

// Directions: a fine angular grid for d = 2 (a multiple of 8 so that axes and
// diagonals are hit), the surface of the cube [-1,1]^3 on a k x k grid for
// d = 3 (corners and face centres included). Each is radially projected onto
// the dual unit sphere.
double grid_scan(const SpaceDescriptor& s, const std::vector<Vector>& vs, const std::vector<double>& mu, double p) {
  double best = 0.0;
  auto visit = [&](std::vector<double> u) {
    const double r = dual_norm_direct(s, u);
    for (double& v : u) v /= r;
    best = std::max(best, objective(s, vs, mu, p, u));
  };
  if (s.dim() == 2) {
    const int n = 1 << 16;
    for (int k = 0; k < n; ++k) {
      const double t = 2.0 * std::numbers::pi * k / n;
      visit({std::cos(t), std::sin(t)});
    }
  } else {
    const int k = 120;
    for (int axis = 0; axis < 3; ++axis) {
      for (double side : {-1.0, 1.0}) {
        for (int a = 0; a <= k; ++a) {
          for (int b = 0; b <= k; ++b) {
            std::vector<double> u(3);
            u[axis] = side;
            u[(axis + 1) % 3] = -1.0 + 2.0 * a / k;
            u[(axis + 2) % 3] = -1.0 + 2.0 * b / k;
            visit(u);
          }
        }
      }
    }
  }
  return best;
}

std::vector<double> random_weights(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (double& v : w) v = rng.uniform(0.2, 2.0);
  return w;
}

}  // namespace

TEST_CASE("norm and dual norm examples") {
  CHECK(norm(SpaceDescriptor::lq(2, 2.0), Vector{{3, 4}}) == doctest::Approx(5.0));
  CHECK(norm(SpaceDescriptor::lq(3, 1.0), Vector{{1, -2, 3}}) == doctest::Approx(6.0));
  CHECK(norm(SpaceDescriptor::lq(3, kInf), Vector{{1, -2, 3}}) == 3.0);
  CHECK(dual_norm(SpaceDescriptor::lq(2, 1.0), DualVector{{3, -4}}) == 4.0);
  CHECK(dual_norm(SpaceDescriptor::lq(2, 2.0), DualVector{{3, 4}}) == doctest::Approx(5.0));
  CHECK(dual_norm(SpaceDescriptor::lq(2, kInf), DualVector{{3, -4}}) == doctest::Approx(7.0));
  CHECK_THROWS_AS(norm(SpaceDescriptor::lq(2, 2.0), Vector{{1, 2, 3}}), Error);
  CHECK_THROWS_AS(SpaceDescriptor::lq(2, 0.5), Error);
}

TEST_CASE("weighted pairing realises the dual norm") {
  Rng rng(21);
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 1 + rng.index(5);
    const double q = pick(rng, {1.0, 1.5, 2.0, 3.0, kInf});
    const SpaceDescriptor s = SpaceDescriptor::weighted_lq(random_weights(rng, d), q);
    const Vector x{rng.normal_vector(d)};
    const DualVector xs{rng.normal_vector(d)};
    CHECK(std::abs(pairing(s, x, xs)) <= norm(s, x) * dual_norm(s, xs) * (1 + 1e-12));
    // The norming functional of x: ball_argmax of the gradient direction.
    std::vector<double> g(d);
    for (std::size_t j = 0; j < d; ++j) g[j] = s.weight(j) * x[j];
    const DualVector best{ball_argmax(s.dual(), g)};
    CHECK(dual_norm(s, best) <= 1.0 + 1e-12);
    CHECK(pairing(s, x, best) == doctest::Approx(norm(s, x)).epsilon(1e-10));
  }
}

TEST_CASE("duality round trip") {
  Rng rng(22);
  for (double q : {1.0, 1.5, 2.0, 4.0, kInf}) {
    const auto s = SpaceDescriptor::weighted_lq(random_weights(rng, 3), q);
    CHECK(s.dual().dual() == s);
    CHECK(SpaceDescriptor::lq(2, q).dual().dual() == SpaceDescriptor::lq(2, q));
  }
}

TEST_CASE("dual ball extreme points") {
  const auto l1 = dual_ball_extreme_points(SpaceDescriptor::lq(2, 1.0));
  REQUIRE(l1);
  CHECK(l1->size() == 4);
  for (const auto& v : *l1) CHECK((std::abs(v[0]) == 1.0 && std::abs(v[1]) == 1.0));
  const auto linf = dual_ball_extreme_points(SpaceDescriptor::lq(2, kInf));
  REQUIRE(linf);
  CHECK(linf->size() == 4);
  for (const auto& v : *linf) CHECK(std::abs(v[0]) + std::abs(v[1]) == 1.0);
  CHECK_FALSE(dual_ball_extreme_points(SpaceDescriptor::lq(3, 2.0)));
  CHECK_THROWS_AS(dual_ball_extreme_points(SpaceDescriptor::lq(17, 1.0)), Error);
}

TEST_CASE("maximize_p_moment examples") {
  const auto l2 = SpaceDescriptor::lq(2, 2.0);
  for (double p : {1.0, 1.7, 3.0}) {
    const std::vector<Vector> v{Vector{{3, 4}}};
    const std::vector<double> one{1.0};
    const auto r = maximize_p_moment(l2, v, one, p);
    CHECK(r.value == doctest::Approx(5.0));
    CHECK(r.witness[0] == doctest::Approx(0.6));
    CHECK(r.witness[1] == doctest::Approx(0.8));
  }
  const std::vector<Vector> basis2{Vector{{1, 0}}, Vector{{0, 1}}};
  const std::vector<double> half{0.5, 0.5};
  const auto r = maximize_p_moment(l2, basis2, half, 2.0);
  CHECK(r.value == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(r.certification == Certification::Exact);
  CHECK(grid_scan(l2, basis2, half, 2.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  const std::vector<Vector> vs{Vector{{1, 2}}, Vector{{3, 1}}};
  const auto polytope = maximize_p_moment(SpaceDescriptor::lq(2, kInf), vs, half, 1.0);
  CHECK(polytope.value == doctest::Approx(2.0));
  CHECK(polytope.certification == Certification::Exact);

  const std::vector<double> bad{0.5};
  CHECK_THROWS_AS(maximize_p_moment(l2, vs, bad, 2.0), Error);
  CHECK_THROWS_AS(maximize_p_moment(l2, vs, half, kInf), Error);
}

TEST_CASE("polytopal maximization agrees with a dense dual-sphere scan") {
  Rng rng(23);
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 2 + rng.index(2);
    const double q = pick(rng, {1.0, kInf});
    const auto s = rng.uniform() < 0.5 ? SpaceDescriptor::lq(d, q) : SpaceDescriptor::weighted_lq(random_weights(rng, d), q);
    const auto vs = random_vectors(rng, 1 + rng.index(5), d);
    std::vector<double> mu(vs.size());
    for (double& m : mu) m = rng.uniform(0.1, 1.0);
    const double p = pick(rng, {1.0, 1.5, 2.0, 3.0});
    const auto r = maximize_p_moment(s, vs, mu, p);
    CHECK(r.certification == Certification::Exact);
    CHECK(r.value == doctest::Approx(grid_scan(s, vs, mu, p)).epsilon(1e-6));
  }
}

TEST_CASE("smooth maximization agrees with a dense circle scan") {
  Rng rng(24);
  for (int k = 0; k < 60; ++k) {
    const double q = pick(rng, {1.5, 2.0, 3.0, 5.0});
    const auto s = rng.uniform() < 0.5 ? SpaceDescriptor::lq(2, q) : SpaceDescriptor::weighted_lq(random_weights(rng, 2), q);
    const auto vs = random_vectors(rng, 2 + rng.index(4), 2);
    std::vector<double> mu(vs.size());
    for (double& m : mu) m = rng.uniform(0.1, 1.0);
    const double p = pick(rng, {1.0, 1.5, 2.0, 3.0});
    const auto r = maximize_p_moment(s, vs, mu, p);
    const double grid = grid_scan(s, vs, mu, p);
    // The grid is a lower bound whose angular error is far below 1e-6.
    CHECK(r.value >= grid * (1 - 1e-6));
    CHECK(r.value <= grid * (1 + 1e-6));
    if (q != 2.0 || p != 2.0) {
      if (r.certification != Certification::Exact) CHECK(r.certification == Certification::HeuristicLowerBound);
    }
  }
}

TEST_CASE("smooth maximization in three dimensions is at least the cube-grid scan") {
  Rng rng(25);
  for (int k = 0; k < 30; ++k) {
    const double q = pick(rng, {1.5, 2.0, 3.0});
    const auto s = SpaceDescriptor::lq(3, q);
    const auto vs = random_vectors(rng, 2 + rng.index(4), 3);
    std::vector<double> mu(vs.size(), 1.0 / static_cast<double>(vs.size()));
    const double p = pick(rng, {1.0, 1.5, 2.0, 3.0});
    const auto r = maximize_p_moment(s, vs, mu, p);
    CHECK(r.value >= grid_scan(s, vs, mu, p) * (1 - 1e-9));
  }
}

TEST_CASE("witnesses attain the value and lie in the dual ball") {
  Rng rng(26);
  for (int k = 0; k < 200; ++k) {
    const std::size_t d = 1 + rng.index(6);
    const double q = pick(rng, {1.0, 1.5, 2.0, 3.0, kInf});
    const auto s = rng.uniform() < 0.5 ? SpaceDescriptor::lq(d, q) : SpaceDescriptor::weighted_lq(random_weights(rng, d), q);
    const auto vs = random_vectors(rng, 1 + rng.index(6), d);
    std::vector<double> mu(vs.size());
    for (double& m : mu) m = rng.uniform(0.1, 1.0);
    const double p = pick(rng, {1.0, 1.5, 2.0, 3.0});
    const auto r = maximize_p_moment(s, vs, mu, p);
    CHECK(dual_norm(s, r.witness) <= 1.0 + 1e-9);
    CHECK(objective(s, vs, mu, p, r.witness.coords) == doctest::Approx(r.value).epsilon(1e-9));
    CHECK(moment_objective(s, vs, mu, p, r.witness) == doctest::Approx(r.value).epsilon(1e-12));
  }
}

TEST_CASE("maximization is homogeneous and monotone in the family") {
  Rng rng(27);
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 2 + rng.index(3);
    const double q = pick(rng, {1.0, 2.0, kInf});
    const double p = q == 2.0 ? 2.0 : pick(rng, {1.0, 1.5, 3.0});
    const auto s = SpaceDescriptor::lq(d, q);
    auto vs = random_vectors(rng, 1 + rng.index(4), d);
    std::vector<double> mu(vs.size(), 0.5);
    const double base = maximize_p_moment(s, vs, mu, p).value;
    const double c = rng.uniform(0.1, 10.0);
    std::vector<Vector> scaled = vs;
    for (auto& v : scaled) {
      for (double& x : v.coords) x *= c;
    }
    CHECK(maximize_p_moment(s, scaled, mu, p).value == doctest::Approx(c * base).epsilon(1e-12));
    vs.push_back(Vector{rng.normal_vector(d)});
    mu.push_back(rng.uniform(0.1, 1.0));
    CHECK(maximize_p_moment(s, vs, mu, p).value >= base * (1 - 1e-12));
  }
}

TEST_CASE("maximization is deterministic for a fixed seed") {
  Rng rng(28);
  const auto s = SpaceDescriptor::lq(4, 3.0);
  const auto vs = random_vectors(rng, 5, 4);
  const std::vector<double> mu(5, 0.2);
  MomentOptions serial;
  MomentOptions threaded;
  threaded.parallel = true;
  const auto a = maximize_p_moment(s, vs, mu, 1.5, serial);
  const auto b = maximize_p_moment(s, vs, mu, 1.5, serial);
  const auto c = maximize_p_moment(s, vs, mu, 1.5, threaded);
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);
  CHECK(a.value == c.value);
  CHECK(a.witness == c.witness);
  CHECK(a.certification == Certification::HeuristicLowerBound);
}

TEST_CASE("sphere point sets") {
  CHECK(euclidean_sphere_points(1, 10).size() == 2);
  CHECK(euclidean_sphere_points(2, 360).size() == 360);
  CHECK(euclidean_sphere_points(3, 1000).size() == 1000);
  CHECK(euclidean_sphere_points(4, 1000).size() == 1000);  // 10^3 grid
  for (std::size_t d = 1; d <= 7; ++d) {
    for (const auto& u : euclidean_sphere_points(d, 200, 5)) {
      double t = 0.0;
      for (double v : u) t += v * v;
      CHECK(t == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  const auto s = SpaceDescriptor::weighted_lq({0.5, 2.0, 1.0}, 3.0);
  for (const auto& xs : dual_sphere(s, 300)) CHECK(dual_norm(s, xs) == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& x : primal_sphere(s, 300)) CHECK(norm(s, x) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(euclidean_sphere_points(6, 50, 1) == euclidean_sphere_points(6, 50, 1));
}

TEST_CASE("certification strings") {
  CHECK(to_string(Certification::Exact) == "exact");
  CHECK(to_string(Certification::HeuristicLowerBound) == "heuristic-lower-bound");
  CHECK(to_string(Certification::LpEstimate) == "lp-estimate");
  CHECK(weakest(Certification::Exact, Certification::LpEstimate) == Certification::LpEstimate);
  CHECK(weakest(Certification::Exact, Certification::Exact) == Certification::Exact);
}
