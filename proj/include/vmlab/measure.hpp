#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "vmlab/normed.hpp"
#include "vmlab/space.hpp"

namespace vmlab {

inline constexpr std::size_t kMaxBruteAtoms = 8;

/// Finitely additive X-valued measure on the atom algebra, determined by
/// its values on single atoms.
class VectorMeasure {
public:
  VectorMeasure(DiscreteProbabilitySpace space, SpaceDescriptor codomain,
                std::vector<Vector> atom_values);

  static VectorMeasure zero(const DiscreteProbabilitySpace& space, const SpaceDescriptor& codomain);

  const DiscreteProbabilitySpace& space() const noexcept { return space_; }
  const SpaceDescriptor& codomain() const noexcept { return codomain_; }
  const std::vector<Vector>& atom_values() const noexcept { return atom_values_; }
  const Vector& atom_value(std::size_t atom) const { return atom_values_.at(atom); }

  VectorMeasure& operator+=(const VectorMeasure& other);
  VectorMeasure& operator*=(double factor);

  bool operator==(const VectorMeasure&) const = default;

private:
  DiscreteProbabilitySpace space_;
  SpaceDescriptor codomain_;
  std::vector<Vector> atom_values_;
};

VectorMeasure operator+(VectorMeasure a, const VectorMeasure& b);
VectorMeasure operator*(double factor, VectorMeasure a);

/// nu(A) = sum of the atom values over A.
Vector evaluate(const VectorMeasure& nu, std::span<const std::size_t> atoms);

/// (sum_{A in P} ||nu(A)||^p / mu(A)^(p-1))^(1/p), with 0/0^(p-1) = 0.
double partition_p_sum(const VectorMeasure& nu, const Partition& partition, double p);

enum class VariationMethod {
  Finest,      // the all-atoms partition (the supremum is attained there)
  Brute,       // maximum over every partition
  HolderDual,  // per partition, the optimal step coefficients in B_{L^p'}
};

std::string_view to_string(VariationMethod method);
VariationMethod parse_variation_method(std::string_view name);

/// Total p-variation |nu|_p(Omega). Brute and HolderDual enumerate all
/// partitions and are limited to kMaxBruteAtoms atoms.
double p_variation(const VectorMeasure& nu, double p, VariationMethod method = VariationMethod::Finest);

/// sum_A |alpha_A| ||nu(A)|| for the coefficients alpha maximizing it over
/// ||sum_A alpha_A chi_A||_{L^p'} <= 1.
double holder_dual_sum(const VectorMeasure& nu, const Partition& partition, double p);

/// Total p-variation of the scalar measure <nu, z*>.
double scalar_p_variation(const VectorMeasure& nu, const DualVector& zs, double p);

/// Total p-semivariation: sup of scalar_p_variation over the dual unit ball.
MomentMaxResult p_semivariation(const VectorMeasure& nu, double p, const MomentOptions& options = {});

/// max of scalar_p_variation over a finite subset of the dual unit ball.
double semivariation_over_subset(const VectorMeasure& nu, double p, std::span<const DualVector> functionals);

}  // namespace vmlab
