#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "vmlab/dunford.hpp"
#include "vmlab/normed.hpp"

namespace vmlab {

inline constexpr std::size_t kMaxThicknessDim = 4;

/// A finite set Gamma in X* with an optional increasing exhaustion
/// Gamma_1 c Gamma_2 c ... = Gamma. Stage k is the prefix of `gamma` of
/// length chain[k].
struct ThicknessInstance {
  SpaceDescriptor descriptor;
  std::vector<DualVector> gamma;
  std::optional<std::vector<std::size_t>> chain;
};

void validate(const ThicknessInstance& instance);

/// Bounds on r(Gamma) = min_{||x|| = 1} max_{g in Gamma} |<g, x>|, the
/// largest delta with delta B_X* inside the absolutely convex hull of Gamma.
struct ThicknessRadius {
  double lower = 0.0;
  double upper = 0.0;
  Vector witness;  // unit direction attaining `upper`
  bool exact = false;
};

/// d <= 2: exact, by checking the facet normals of the polygon conv(+-Gamma)
/// (every local minimum of x -> max |<g, x>| / ||x|| sits on one).
/// d = 3, 4: minimum over a cube-surface grid whose radial projection covers
/// the Euclidean sphere within grid_eps; the lower bound subtracts a
/// Lipschitz constant of the ratio times grid_eps.
ThicknessRadius norming_radius(const SpaceDescriptor& space, std::span<const DualVector> gamma,
                               double grid_eps = 0.01);
ThicknessRadius thickness_radius(const ThicknessInstance& instance, double grid_eps = 0.01);

/// r(Gamma_k) for every stage of the chain.
std::vector<ThicknessRadius> thickness_chain_profile(const ThicknessInstance& instance,
                                                     double grid_eps = 0.01);

struct ThicknessBoundReport {
  double level = 0.0;  // n = max_{g in Gamma} ||<f, g>||_{L^p}
  double delta = 0.0;  // certified lower bound on r(Gamma)
  double bound = 0.0;  // n / delta
  MomentMaxResult dunford;
  double slack = 0.0;  // bound - ||f||_{D_p}
  bool holds = false;
};

/// ||f||_{D_p} <= n / delta: delta B_X* lies in aco(Gamma), and Gamma lies in
/// the closed absolutely convex set {x* : ||<f, x*>||_p <= n}.
ThicknessBoundReport thickness_norm_bound(const SimpleFunction& f, const ThicknessInstance& instance,
                                          double p, double grid_eps = 0.01,
                                          const MomentOptions& options = {});

}  // namespace vmlab
