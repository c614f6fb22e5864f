#include "vmlab/thickness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "vmlab/error.hpp"
#include "vmlab/parallel.hpp"

namespace vmlab {

namespace {

double gamma_max(const SpaceDescriptor& space, std::span<const DualVector> gamma, const Vector& x) {
  double best = 0.0;
  for (const auto& g : gamma) best = std::max(best, std::abs(pairing(space, x, g)));
  return best;
}

Vector normalized(const SpaceDescriptor& space, std::vector<double> coords) {
  Vector x{std::move(coords)};
  const double n = norm(space, x);
  for (double& c : x.coords) c /= n;
  return x;
}

ThicknessRadius exact_result(const SpaceDescriptor& space, std::span<const DualVector> gamma, Vector x) {
  const double value = gamma_max(space, gamma, x);
  return ThicknessRadius{value, value, std::move(x), true};
}

using Point = std::array<double, 2>;

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

ThicknessRadius planar_radius(const SpaceDescriptor& space, std::span<const DualVector> gamma) {
  std::vector<Point> pts;
  double scale = 0.0;
  for (const auto& g : gamma) {
    pts.push_back({g[0], g[1]});
    pts.push_back({-g[0], -g[1]});
    scale = std::max({scale, std::abs(g[0]), std::abs(g[1])});
  }
  if (scale == 0.0) return exact_result(space, gamma, normalized(space, {1.0, 0.0}));

  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // Andrew's monotone chain, counterclockwise, collinear points dropped.
  const double tol = 1e-14 * scale * scale;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& pt : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pt) <= tol) --k;
    hull[k++] = pt;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= tol) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 0 ? k - 1 : 0);

  if (hull.size() < 3) {
    // Gamma spans a line through 0: the orthogonal direction annihilates it.
    std::size_t far = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (std::hypot(pts[i][0], pts[i][1]) > std::hypot(pts[far][0], pts[far][1])) far = i;
    }
    const Point v = pts[far];
    Vector x = normalized(space, {-v[1] / space.weight(0), v[0] / space.weight(1)});
    return ThicknessRadius{0.0, 0.0, std::move(x), true};
  }

  ThicknessRadius best{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                       Vector{{1.0, 0.0}}, true};
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point& a = hull[i];
    const Point& b = hull[(i + 1) % hull.size()];
    // Outward normal of a counterclockwise edge, mapped through the pairing
    // weights so that <g, x> = g . normal.
    const double nx = b[1] - a[1];
    const double ny = a[0] - b[0];
    Vector x = normalized(space, {nx / space.weight(0), ny / space.weight(1)});
    const double value = gamma_max(space, gamma, x);
    if (value < best.upper) {
      best.upper = value;
      best.lower = value;
      best.witness = std::move(x);
    }
  }
  return best;
}

// Bounds m <= ||v||_X <= M over the Euclidean unit sphere.
std::pair<double, double> euclidean_norm_bounds(const SpaceDescriptor& space) {
  const double d = static_cast<double>(space.dim());
  const double q = space.q();
  if (std::isinf(q)) return {1.0 / std::sqrt(d), 1.0};
  double wmin = std::numeric_limits<double>::infinity();
  double wmax = 0.0;
  for (std::size_t j = 0; j < space.dim(); ++j) {
    wmin = std::min(wmin, space.weight(j));
    wmax = std::max(wmax, space.weight(j));
  }
  const double e = 1.0 / q - 0.5;
  const double lo = std::pow(wmin, 1.0 / q) * std::pow(d, std::min(0.0, e));
  const double hi = std::pow(wmax, 1.0 / q) * std::pow(d, std::max(0.0, e));
  return {lo, hi};
}

ThicknessRadius grid_radius(const SpaceDescriptor& space, std::span<const DualVector> gamma,
                            double grid_eps) {
  const std::size_t d = space.dim();
  const double spacing = 2.0 * grid_eps / std::sqrt(static_cast<double>(d - 1));
  const auto steps = static_cast<std::size_t>(std::ceil(2.0 / spacing));
  const double q = space.q();

  // <g, x> = sum_j (w_j g_j) x_j.
  std::vector<double> gw;
  for (const auto& g : gamma) {
    for (std::size_t j = 0; j < d; ++j) gw.push_back(space.weight(j) * g[j]);
  }
  auto ratio_at = [&](const double* z) {
    double m = 0.0;
    for (std::size_t k = 0; k < gamma.size(); ++k) {
      double t = 0.0;
      for (std::size_t j = 0; j < d; ++j) t += gw[k * d + j] * z[j];
      m = std::max(m, std::abs(t));
    }
    double nz = 0.0;
    if (std::isinf(q)) {
      for (std::size_t j = 0; j < d; ++j) nz = std::max(nz, std::abs(z[j]));
    } else if (q == 2.0) {
      for (std::size_t j = 0; j < d; ++j) nz += space.weight(j) * z[j] * z[j];
      nz = std::sqrt(nz);
    } else if (q == 1.0) {
      for (std::size_t j = 0; j < d; ++j) nz += space.weight(j) * std::abs(z[j]);
    } else {
      for (std::size_t j = 0; j < d; ++j) nz += space.weight(j) * std::pow(std::abs(z[j]), q);
      nz = std::pow(nz, 1.0 / q);
    }
    return m / nz;
  };

  // One slice per (face, first free coordinate); only the +1 faces are
  // scanned because the ratio is even in x.
  struct SliceBest {
    double value = std::numeric_limits<double>::infinity();
    std::vector<double> z;
  };
  const std::size_t per_face = steps + 1;
  std::vector<SliceBest> slices(d * per_face);
  parallel_for(slices.size(), [&](std::size_t slice) {
    const std::size_t axis = slice / per_face;
    std::vector<std::size_t> counter(d - 1, 0);
    counter[0] = slice % per_face;
    std::vector<double> z(d);
    SliceBest& out = slices[slice];
    while (true) {
      for (std::size_t j = 0, c = 0; j < d; ++j) {
        z[j] = j == axis ? 1.0 : -1.0 + 2.0 * static_cast<double>(counter[c++]) / static_cast<double>(steps);
      }
      const double r = ratio_at(z.data());
      if (r < out.value) {
        out.value = r;
        out.z = z;
      }
      std::size_t c = 1;
      while (c < d - 1 && ++counter[c] > steps) counter[c++] = 0;
      if (c >= d - 1) break;
    }
  });

  ThicknessRadius best{0.0, std::numeric_limits<double>::infinity(), Vector{std::vector<double>(d, 0.0)},
                       false};
  for (const auto& sb : slices) {
    if (sb.value < best.upper) {
      best.upper = sb.value;
      best.witness = Vector{sb.z};
    }
  }
  best.witness = normalized(space, best.witness.coords);

  double lipschitz_gamma = 0.0;
  for (const auto& g : gamma) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += std::pow(space.weight(j) * g[j], 2);
    lipschitz_gamma = std::max(lipschitz_gamma, std::sqrt(s));
  }
  const auto [m, big_m] = euclidean_norm_bounds(space);
  const double lipschitz = lipschitz_gamma / m + lipschitz_gamma * big_m / (m * m);
  best.lower = std::max(0.0, best.upper - lipschitz * grid_eps);
  return best;
}

}  // namespace

void validate(const ThicknessInstance& instance) {
  for (const auto& g : instance.gamma) {
    require(g.dim() == instance.descriptor.dim(), ErrorCode::DimensionMismatch,
            "Gamma element has the wrong dimension");
  }
  if (instance.chain) {
    const auto& chain = *instance.chain;
    require(!chain.empty(), ErrorCode::InvalidArgument, "chain has no stages");
    for (std::size_t k = 0; k < chain.size(); ++k) {
      require(chain[k] <= instance.gamma.size(), ErrorCode::IndexOutOfRange, "chain stage exceeds Gamma");
      require(k == 0 || chain[k] >= chain[k - 1], ErrorCode::InvalidArgument, "chain must be increasing");
    }
    require(chain.back() == instance.gamma.size(), ErrorCode::InvalidArgument,
            "chain must exhaust Gamma");
  }
}

ThicknessRadius norming_radius(const SpaceDescriptor& space, std::span<const DualVector> gamma,
                               double grid_eps) {
  const std::size_t d = space.dim();
  require(d <= kMaxThicknessDim, ErrorCode::DimensionTooLarge,
          "norming radius is certified only for d <= " + std::to_string(kMaxThicknessDim));
  for (const auto& g : gamma) {
    require(g.dim() == d, ErrorCode::DimensionMismatch, "Gamma element has the wrong dimension");
  }
  if (gamma.empty()) {
    std::vector<double> e(d, 0.0);
    e[0] = 1.0;
    return ThicknessRadius{0.0, 0.0, normalized(space, std::move(e)), true};
  }
  if (d == 1) return exact_result(space, gamma, normalized(space, {1.0}));
  if (d == 2) return planar_radius(space, gamma);
  require(grid_eps > 0.0, ErrorCode::InvalidArgument, "grid_eps must be positive");
  return grid_radius(space, gamma, grid_eps);
}

ThicknessRadius thickness_radius(const ThicknessInstance& instance, double grid_eps) {
  validate(instance);
  return norming_radius(instance.descriptor, instance.gamma, grid_eps);
}

std::vector<ThicknessRadius> thickness_chain_profile(const ThicknessInstance& instance, double grid_eps) {
  require(instance.chain.has_value(), ErrorCode::MissingChain, "instance has no chain decomposition");
  validate(instance);
  std::vector<ThicknessRadius> out;
  for (std::size_t stage : *instance.chain) {
    out.push_back(norming_radius(instance.descriptor,
                                 std::span<const DualVector>(instance.gamma).first(stage), grid_eps));
  }
  return out;
}

ThicknessBoundReport thickness_norm_bound(const SimpleFunction& f, const ThicknessInstance& instance,
                                          double p, double grid_eps, const MomentOptions& options) {
  require(f.codomain() == instance.descriptor, ErrorCode::DescriptorMismatch,
          "function codomain differs from the instance space");
  const ThicknessRadius radius = thickness_radius(instance, grid_eps);
  require(radius.lower > 0.0, ErrorCode::NotNorming, "Gamma is not certified norming");
  ThicknessBoundReport report;
  for (const auto& g : instance.gamma) report.level = std::max(report.level, lp_norm(pair(f, g), p));
  report.delta = radius.lower;
  report.bound = report.level / report.delta;
  report.dunford = dunford_norm(f, p, options);
  report.slack = report.bound - report.dunford.value;
  report.holds = report.slack >= -1e-9 * std::max(1.0, report.bound);
  return report;
}

}  // namespace vmlab
