#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vmlab {

inline constexpr double kMassTolerance = 1e-12;
inline constexpr std::size_t kMaxEnumerationAtoms = 10;
inline constexpr std::size_t kMaxSubsetSearchAtoms = 24;

/// Conjugate exponent p' with 1/p + 1/p' = 1 (1 maps to infinity and back).
double conjugate_exponent(double p);

/// Finite atomic probability space: atom i carries mass masses()[i] > 0 and
/// the masses sum to one within kMassTolerance. Every measurable set is a
/// subset of atoms.
class DiscreteProbabilitySpace {
public:
  explicit DiscreteProbabilitySpace(std::vector<double> masses);

  std::size_t size() const noexcept { return masses_.size(); }
  double mass(std::size_t atom) const { return masses_.at(atom); }
  std::span<const double> masses() const noexcept { return masses_; }
  double mass_of(std::span<const std::size_t> atoms) const;

  bool operator==(const DiscreteProbabilitySpace&) const = default;

private:
  std::vector<double> masses_;
};

DiscreteProbabilitySpace make_space(std::vector<double> masses);
DiscreteProbabilitySpace uniform_space(std::size_t atoms);

/// A set partition of {0, ..., atom_count-1}. Blocks are kept in canonical
/// order: each block sorted, blocks ordered by their smallest atom.
class Partition {
public:
  Partition(std::size_t atom_count, std::vector<std::vector<std::size_t>> blocks);

  static Partition finest(std::size_t atom_count);
  static Partition coarsest(std::size_t atom_count);
  /// labels[i] names the block of atom i; labels need not be contiguous.
  static Partition from_labels(std::span<const std::size_t> labels);

  std::size_t atom_count() const noexcept { return atom_count_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
  /// Block index of each atom.
  std::vector<std::size_t> labels() const;

  bool operator==(const Partition&) const = default;

private:
  std::size_t atom_count_;
  std::vector<std::vector<std::size_t>> blocks_;
};

/// Calls visit once for each set partition of the space's atoms, in
/// restricted-growth-string order.
void for_each_partition(const DiscreteProbabilitySpace& space,
                        const std::function<void(const Partition&)>& visit);
std::vector<Partition> enumerate_partitions(const DiscreteProbabilitySpace& space);

/// True iff every block of `fine` lies inside a block of `coarse`.
bool is_refinement(const Partition& fine, const Partition& coarse);

/// A real function on the atoms of a space.
class ScalarFunction {
public:
  ScalarFunction(DiscreteProbabilitySpace space, std::vector<double> values);

  static ScalarFunction constant(const DiscreteProbabilitySpace& space, double value);
  static ScalarFunction indicator(const DiscreteProbabilitySpace& space,
                                  std::span<const std::size_t> atoms);

  const DiscreteProbabilitySpace& space() const noexcept { return space_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t atom) const { return values_.at(atom); }
  std::size_t size() const noexcept { return values_.size(); }

  ScalarFunction& operator+=(const ScalarFunction& other);
  ScalarFunction& operator-=(const ScalarFunction& other);
  ScalarFunction& operator*=(double factor);

  bool operator==(const ScalarFunction&) const = default;

private:
  DiscreteProbabilitySpace space_;
  std::vector<double> values_;
};

ScalarFunction operator+(ScalarFunction a, const ScalarFunction& b);
ScalarFunction operator-(ScalarFunction a, const ScalarFunction& b);
ScalarFunction operator*(double factor, ScalarFunction a);

/// (sum_i mu_i |h_i|^p)^(1/p); p = infinity gives max_i |h_i|.
double lp_norm(const ScalarFunction& h, double p);

/// The integral of h over the atom set.
double integral(const ScalarFunction& h, std::span<const std::size_t> atoms);
double integral(const ScalarFunction& h);

/// Conditional expectation onto the blocks of a partition:
/// sum_A (1/mu(A)) (integral_A g) chi_A.
ScalarFunction conditional_average(const ScalarFunction& g, const Partition& partition);

struct UiModulusResult {
  double value = 0.0;
  std::size_t function_index = 0;
  std::vector<std::size_t> atoms;  // maximizing subset, sorted
};

/// sup over h in family and atom sets A with mu(A) <= delta of
/// sum_{i in A} mu_i |h_i|. Exact branch and bound.
UiModulusResult ui_modulus_search(std::span<const ScalarFunction> family, double delta);
double ui_modulus(std::span<const ScalarFunction> family, double delta);

/// integral of | |g|^p - |h|^p | dmu.
double power_map_distance(const ScalarFunction& g, const ScalarFunction& h, double p);
/// 2p C^(p/p') ||g - h||_p, which dominates power_map_distance whenever
/// ||g||_p, ||h||_p <= C.
double power_map_bound(const ScalarFunction& g, const ScalarFunction& h, double p, double bound_c);

}  // namespace vmlab
