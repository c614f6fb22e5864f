#pragma once

#include <cmath>
#include <initializer_list>
#include <limits>
#include <vector>

#include "vmlab/dunford.hpp"
#include "vmlab/random.hpp"
#include "vmlab/space.hpp"

namespace vmlab::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline DiscreteProbabilitySpace random_space(Rng& rng, std::size_t n) {
  std::vector<double> masses(n);
  double total = 0.0;
  for (double& m : masses) total += (m = rng.uniform(0.05, 1.0));
  for (double& m : masses) m /= total;
  return make_space(std::move(masses));
}

inline double pick(Rng& rng, std::initializer_list<double> options) {
  return *(options.begin() + static_cast<std::ptrdiff_t>(rng.index(options.size())));
}

inline std::vector<Vector> random_vectors(Rng& rng, std::size_t count, std::size_t dim) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(Vector{rng.normal_vector(dim)});
  return out;
}

inline SimpleFunction random_function(Rng& rng, const DiscreteProbabilitySpace& space,
                                      const SpaceDescriptor& codomain) {
  return SimpleFunction(space, codomain, random_vectors(rng, space.size(), codomain.dim()));
}

inline ScalarFunction random_scalar(Rng& rng, const DiscreteProbabilitySpace& space) {
  return ScalarFunction(space, rng.normal_vector(space.size()));
}

inline Partition random_partition(Rng& rng, std::size_t n) {
  std::vector<std::size_t> labels(n);
  const std::size_t blocks = 1 + rng.index(n);
  for (auto& l : labels) l = rng.index(blocks);
  return Partition::from_labels(labels);
}

inline Vector basis(std::size_t dim, std::size_t j, double scale = 1.0) {
  Vector e{std::vector<double>(dim, 0.0)};
  e.coords[j] = scale;
  return e;
}

inline DualVector dual_basis(std::size_t dim, std::size_t j, double scale = 1.0) {
  DualVector e{std::vector<double>(dim, 0.0)};
  e.coords[j] = scale;
  return e;
}

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace vmlab::testing
