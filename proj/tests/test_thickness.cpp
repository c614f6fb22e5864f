#include <doctest.h>

#include <numbers>

#include "test_support.hpp"
#include "vmlab/error.hpp"
#include "vmlab/thickness.hpp"

using namespace vmlab;
using namespace vmlab::testing;

namespace {

std::vector<DualVector> signed_basis(std::size_t d, double scale = 1.0) {
  std::vector<DualVector> out;
  for (std::size_t j = 0; j < d; ++j) {
    out.push_back(dual_basis(d, j, scale));
    out.push_back(dual_basis(d, j, -scale));
  }
  return out;
}

ErrorCode code_of(auto&& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidArgument;
}

double ratio_at(const SpaceDescriptor& s, const std::vector<DualVector>& gamma, double t) {
  const Vector x{{std::cos(t), std::sin(t)}};
  double m = 0.0;
  for (const auto& g : gamma) m = std::max(m, std::abs(pairing(s, x, g)));
  return m / norm(s, x);
}

// Planar radius: coarse angle scan over [0, pi), then a ternary search around
// every discrete local minimum (the ratio is unimodal on a small bracket).
double radius_planar(const SpaceDescriptor& s, const std::vector<DualVector>& gamma) {
  const int n = 1 << 12;
  const double h = std::numbers::pi / n;
  std::vector<double> coarse(n);
  for (int k = 0; k < n; ++k) coarse[k] = ratio_at(s, gamma, k * h);
  double best = 1e300;
  for (int k = 0; k < n; ++k) {
    if (coarse[k] > coarse[(k + n - 1) % n] || coarse[k] > coarse[(k + 1) % n]) continue;
    double lo = k * h - h;
    double hi = k * h + h;
    for (int it = 0; it < 200; ++it) {
      const double a = lo + (hi - lo) / 3;
      const double b = hi - (hi - lo) / 3;
      if (ratio_at(s, gamma, a) < ratio_at(s, gamma, b)) hi = b;
      else lo = a;
    }
    best = std::min({best, ratio_at(s, gamma, lo), coarse[k]});
  }
  return best;
}

// min over unit x of max_g |<g, x>|, scanned over a fine set of directions.
double radius_scan(const SpaceDescriptor& s, const std::vector<DualVector>& gamma) {
  const auto dirs = s.dim() == 2 ? euclidean_sphere_points(2, 1 << 16) : euclidean_sphere_points(3, 100000);
  double best = 1e300;
  for (const auto& u : dirs) {
    const Vector x{u};
    const double r = norm(s, x);
    double m = 0.0;
    for (const auto& g : gamma) m = std::max(m, std::abs(pairing(s, x, g)) / r);
    best = std::min(best, m);
  }
  return best;
}

}  // namespace

TEST_CASE("radius examples") {
  const auto l2 = SpaceDescriptor::lq(2, 2.0);
  const ThicknessInstance square{l2, signed_basis(2), std::nullopt};
  const auto r = thickness_radius(square);
  CHECK(r.exact);
  CHECK(std::abs(r.lower - 1.0 / std::sqrt(2.0)) <= 1e-9);
  CHECK(std::abs(r.upper - 1.0 / std::sqrt(2.0)) <= 1e-9);
  CHECK(std::abs(std::abs(r.witness[0]) - std::abs(r.witness[1])) <= 1e-9);

  const ThicknessInstance scaled{l2, signed_basis(2, 0.3), std::nullopt};
  CHECK(thickness_radius(scaled).lower == doctest::Approx(0.3 / std::sqrt(2.0)).epsilon(1e-12));

  const ThicknessInstance line{l2, {DualVector{{1, 0}}}, std::nullopt};
  CHECK(thickness_radius(line).upper == doctest::Approx(0.0));
  CHECK(thickness_radius(line).lower == doctest::Approx(0.0));

  const ThicknessInstance empty{l2, {}, std::nullopt};
  CHECK(thickness_radius(empty).upper == 0.0);

  const ThicknessInstance one_d{SpaceDescriptor::lq(1, 3.0), {DualVector{{-2.0}}}, std::nullopt};
  CHECK(thickness_radius(one_d).lower == doctest::Approx(2.0));
  CHECK(thickness_radius(one_d).exact);
}

TEST_CASE("radius in three and four dimensions brackets the known value") {
  struct Case {
    SpaceDescriptor s;
    double value;
  };
  const std::vector<Case> cases{{SpaceDescriptor::lq(3, 2.0), 1.0 / std::sqrt(3.0)},
                                {SpaceDescriptor::lq(3, 1.0), 1.0 / 3.0},
                                {SpaceDescriptor::lq(3, kInf), 1.0},
                                {SpaceDescriptor::lq(4, 2.0), 0.5}};
  for (const auto& c : cases) {
    const ThicknessInstance inst{c.s, signed_basis(c.s.dim()), std::nullopt};
    const auto r = thickness_radius(inst, 0.02);
    CHECK_FALSE(r.exact);
    CHECK(r.lower <= c.value + 1e-12);
    CHECK(r.upper >= c.value - 1e-12);
    CHECK(r.lower > 0.0);
    CHECK(r.upper - r.lower <= 0.2 * c.value);
  }
}

TEST_CASE("planar radius agrees with a dense scan") {
  Rng rng(71);
  for (int k = 0; k < 40; ++k) {
    const auto s = SpaceDescriptor::lq(2, pick(rng, {1.0, 1.5, 2.0, 3.0, kInf}));
    std::vector<DualVector> gamma;
    for (std::size_t j = 0, m = 2 + rng.index(5); j < m; ++j) gamma.push_back(DualVector{rng.normal_vector(2)});
    const ThicknessInstance inst{s, gamma, std::nullopt};
    const auto r = thickness_radius(inst);
    const double refined = radius_planar(s, gamma);
    CHECK(r.exact);
    CHECK(r.lower == doctest::Approx(refined).epsilon(1e-9));
    CHECK(r.lower <= radius_scan(s, gamma) + 1e-12);
  }
}

TEST_CASE("grid radius brackets a dense scan in three dimensions") {
  Rng rng(72);
  for (int k = 0; k < 10; ++k) {
    const auto s = SpaceDescriptor::lq(3, pick(rng, {1.0, 2.0, 3.0, kInf}));
    std::vector<DualVector> gamma;
    for (std::size_t j = 0, m = 3 + rng.index(4); j < m; ++j) gamma.push_back(DualVector{rng.normal_vector(3)});
    const auto r = thickness_radius({s, gamma, std::nullopt}, 0.02);
    const double scan = radius_scan(s, gamma);
    CHECK(r.lower <= scan + 1e-12);
    CHECK(r.lower <= r.upper);
    CHECK(r.upper >= scan * (1 - 1e-2));
  }
}

TEST_CASE("radius is monotone under inclusion") {
  Rng rng(73);
  for (int k = 0; k < 30; ++k) {
    const auto s = SpaceDescriptor::lq(2, pick(rng, {1.0, 2.0, kInf}));
    std::vector<DualVector> gamma;
    double previous = 0.0;
    std::vector<std::size_t> chain;
    for (int step = 0; step < 6; ++step) {
      gamma.push_back(DualVector{rng.normal_vector(2)});
      chain.push_back(gamma.size());
      const double r = thickness_radius({s, gamma, std::nullopt}).lower;
      CHECK(r >= previous - 1e-12);
      previous = r;
    }
    const ThicknessInstance inst{s, gamma, chain};
    const auto profile = thickness_chain_profile(inst);
    REQUIRE(profile.size() == chain.size());
    for (std::size_t j = 1; j < profile.size(); ++j) CHECK(profile[j].lower >= profile[j - 1].lower - 1e-12);
  }
}

TEST_CASE("chain profiles") {
  const auto l2 = SpaceDescriptor::lq(2, 2.0);
  const ThicknessInstance late{l2, {DualVector{{1, 0}}, DualVector{{-1, 0}}, DualVector{{0, 1}}, DualVector{{0, -1}}},
                               std::vector<std::size_t>{2, 4}};
  const auto profile = thickness_chain_profile(late);
  REQUIRE(profile.size() == 2);
  CHECK(profile[0].upper == doctest::Approx(0.0));
  CHECK(profile[1].lower == doctest::Approx(1.0 / std::sqrt(2.0)));

  const ThicknessInstance early{l2, signed_basis(2), std::vector<std::size_t>{4, 4, 4}};
  for (const auto& stage : thickness_chain_profile(early)) CHECK(stage.lower == doctest::Approx(1.0 / std::sqrt(2.0)));

  const ThicknessInstance none{l2, signed_basis(2), std::nullopt};
  CHECK(code_of([&] { thickness_chain_profile(none); }) == ErrorCode::MissingChain);
  const ThicknessInstance decreasing{l2, signed_basis(2), std::vector<std::size_t>{3, 2, 4}};
  CHECK(code_of([&] { validate(decreasing); }) == ErrorCode::InvalidArgument);
  const ThicknessInstance short_chain{l2, signed_basis(2), std::vector<std::size_t>{2}};
  CHECK(code_of([&] { validate(short_chain); }) == ErrorCode::InvalidArgument);
  const ThicknessInstance too_big{SpaceDescriptor::lq(5, 2.0), signed_basis(5), std::nullopt};
  CHECK(code_of([&] { thickness_radius(too_big); }) == ErrorCode::DimensionTooLarge);
}

TEST_CASE("norm bound") {
  const auto l2 = SpaceDescriptor::lq(2, 2.0);
  const ThicknessInstance square{l2, signed_basis(2), std::nullopt};
  const auto space = uniform_space(3);
  const auto zero = SimpleFunction::constant(space, l2, Vector{{0, 0}});
  const auto report = thickness_norm_bound(zero, square, 2.0);
  CHECK(report.bound == 0.0);
  CHECK(report.holds);

  const ThicknessInstance line{l2, {DualVector{{1, 0}}}, std::nullopt};
  CHECK(code_of([&] { thickness_norm_bound(zero, line, 2.0); }) == ErrorCode::NotNorming);
  const auto other = SimpleFunction::constant(space, SpaceDescriptor::lq(2, 1.0), Vector{{0, 0}});
  CHECK(code_of([&] { thickness_norm_bound(other, square, 2.0); }) == ErrorCode::DescriptorMismatch);

  Rng rng(74);
  for (int k = 0; k < 60; ++k) {
    const std::size_t d = 2 + rng.index(2);
    const auto s = SpaceDescriptor::lq(d, pick(rng, {1.0, 2.0, 3.0, kInf}));
    std::vector<DualVector> gamma = signed_basis(d);
    for (std::size_t j = 0, m = rng.index(4); j < m; ++j) gamma.push_back(DualVector{rng.normal_vector(d)});
    const ThicknessInstance inst{s, gamma, std::nullopt};
    const auto f = random_function(rng, random_space(rng, 1 + rng.index(6)), s);
    const double p = pick(rng, {1.0, 1.5, 2.0, 3.0});
    const auto r = thickness_norm_bound(f, inst, p);
    CHECK(r.holds);
    CHECK(r.dunford.value <= r.bound + 1e-9);

    // Scaling Gamma by c scales n and delta alike and leaves the bound alone.
    const double c = rng.uniform(0.2, 5.0);
    std::vector<DualVector> scaled = gamma;
    for (auto& g : scaled) {
      for (double& v : g.coords) v *= c;
    }
    const auto rs = thickness_norm_bound(f, {s, scaled, std::nullopt}, p);
    CHECK(rs.level == doctest::Approx(c * r.level).epsilon(1e-12));
    CHECK(rs.delta == doctest::Approx(c * r.delta).epsilon(1e-9));
    CHECK(rs.bound == doctest::Approx(r.bound).epsilon(1e-9));
  }
}
