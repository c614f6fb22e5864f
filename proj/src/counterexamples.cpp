#include "vmlab/counterexamples.hpp"

#include <cmath>
#include <string>

#include "vmlab/error.hpp"

namespace vmlab {

SimpleFunction pettis_example(const PettisExampleConfig& config) {
  const std::size_t n = config.levels;
  require(n >= 1 && n <= kMaxPettisLevels, ErrorCode::TooManyLevels,
          "levels must lie in [1, " + std::to_string(kMaxPettisLevels) + "]");
  std::vector<double> masses;
  double used = 0.0;
  for (std::size_t level = 1; level <= n; ++level) {
    const double mass = std::ldexp(1.0, -2 * static_cast<int>(level));
    masses.push_back(mass);
    used += mass;
  }
  masses.push_back(1.0 - used);

  std::vector<Vector> values;
  for (std::size_t level = 1; level <= n; ++level) {
    std::vector<double> v(n, 0.0);
    v[level - 1] = std::ldexp(1.0, static_cast<int>(level));
    values.push_back(Vector{std::move(v)});
  }
  values.push_back(Vector{std::vector<double>(n, 0.0)});
  return SimpleFunction(make_space(std::move(masses)), SpaceDescriptor::lq(n, 2.0), std::move(values));
}

SimpleFunction kothe_example(const KotheExampleConfig& config) {
  require(config.p > 1.0 && std::isfinite(config.p), ErrorCode::BadExponent, "need 1 < p < infinity");
  const std::size_t k = config.atom_masses.size();
  require(k >= 2, ErrorCode::InvalidArgument, "need at least two atoms");
  DiscreteProbabilitySpace space = make_space(config.atom_masses);
  const double pc = conjugate_exponent(config.p);
  SpaceDescriptor z = SpaceDescriptor::weighted_lq(config.atom_masses, pc);

  std::vector<Vector> values;
  for (std::size_t i = 0; i < k; ++i) {
    const double mass = space.mass(i);
    const double indicator_norm = std::pow(mass, 1.0 / pc);
    std::vector<double> v(k, 0.0);
    v[i] = std::pow(mass, -1.0 / config.p) / indicator_norm;
    values.push_back(Vector{std::move(v)});
  }
  return SimpleFunction(std::move(space), std::move(z), std::move(values));
}

DualVector kothe_dual_witness(const KotheExampleConfig& config, std::size_t atom) {
  require(atom < config.atom_masses.size(), ErrorCode::IndexOutOfRange, "atom out of range");
  std::vector<double> g(config.atom_masses.size(), 0.0);
  g[atom] = std::pow(config.atom_masses[atom], -1.0 / config.p);
  return DualVector{std::move(g)};
}

}  // namespace vmlab
