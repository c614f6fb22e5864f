#include "vmlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vmlab/error.hpp"

namespace vmlab {

namespace {

void check_exponent(double p) {
  require(p >= 1.0 && std::isfinite(p), ErrorCode::BadExponent, "need 1 <= p < infinity");
}

}  // namespace

VectorMeasure::VectorMeasure(DiscreteProbabilitySpace space, SpaceDescriptor codomain,
                             std::vector<Vector> atom_values)
    : space_(std::move(space)), codomain_(std::move(codomain)), atom_values_(std::move(atom_values)) {
  require(atom_values_.size() == space_.size(), ErrorCode::DimensionMismatch,
          "one atom value per atom");
  for (const auto& v : atom_values_) {
    require(v.dim() == codomain_.dim(), ErrorCode::DimensionMismatch,
            "atom value dimension differs from the codomain");
  }
}

VectorMeasure VectorMeasure::zero(const DiscreteProbabilitySpace& space,
                                  const SpaceDescriptor& codomain) {
  return VectorMeasure(space, codomain,
                       std::vector<Vector>(space.size(), Vector{std::vector<double>(codomain.dim(), 0.0)}));
}

VectorMeasure& VectorMeasure::operator+=(const VectorMeasure& other) {
  require(space_ == other.space_, ErrorCode::SpaceMismatch, "measures on different spaces");
  require(codomain_ == other.codomain_, ErrorCode::DescriptorMismatch, "measures with different codomains");
  for (std::size_t i = 0; i < atom_values_.size(); ++i) {
    for (std::size_t j = 0; j < codomain_.dim(); ++j) {
      atom_values_[i].coords[j] += other.atom_values_[i][j];
    }
  }
  return *this;
}

VectorMeasure& VectorMeasure::operator*=(double factor) {
  for (auto& v : atom_values_) {
    for (double& c : v.coords) c *= factor;
  }
  return *this;
}

VectorMeasure operator+(VectorMeasure a, const VectorMeasure& b) { return a += b; }
VectorMeasure operator*(double factor, VectorMeasure a) { return a *= factor; }

Vector evaluate(const VectorMeasure& nu, std::span<const std::size_t> atoms) {
  Vector out{std::vector<double>(nu.codomain().dim(), 0.0)};
  std::vector<bool> seen(nu.space().size(), false);
  for (std::size_t atom : atoms) {
    require(atom < nu.space().size(), ErrorCode::IndexOutOfRange,
            "atom " + std::to_string(atom) + " out of range");
    require(!seen[atom], ErrorCode::InvalidArgument, "atom listed twice");
    seen[atom] = true;
    for (std::size_t j = 0; j < out.dim(); ++j) out.coords[j] += nu.atom_value(atom)[j];
  }
  return out;
}

double partition_p_sum(const VectorMeasure& nu, const Partition& partition, double p) {
  check_exponent(p);
  require(partition.atom_count() == nu.space().size(), ErrorCode::SpaceMismatch,
          "partition and measure live on different atom sets");
  double sum = 0.0;
  for (const auto& block : partition.blocks()) {
    const double value = norm(nu.codomain(), evaluate(nu, block));
    const double mass = nu.space().mass_of(block);
    if (value == 0.0) continue;
    sum += std::pow(value, p) / std::pow(mass, p - 1.0);
  }
  return std::pow(sum, 1.0 / p);
}

std::string_view to_string(VariationMethod method) {
  switch (method) {
    case VariationMethod::Finest: return "finest";
    case VariationMethod::Brute: return "brute";
    case VariationMethod::HolderDual: return "holder_dual";
  }
  return "unknown";
}

VariationMethod parse_variation_method(std::string_view name) {
  if (name == "finest") return VariationMethod::Finest;
  if (name == "brute") return VariationMethod::Brute;
  if (name == "holder_dual") return VariationMethod::HolderDual;
  fail(ErrorCode::InvalidArgument, "unknown variation method '" + std::string(name) + "'");
}

double holder_dual_sum(const VectorMeasure& nu, const Partition& partition, double p) {
  check_exponent(p);
  require(partition.atom_count() == nu.space().size(), ErrorCode::SpaceMismatch,
          "partition and measure live on different atom sets");
  std::vector<double> size;
  std::vector<double> mass;
  for (const auto& block : partition.blocks()) {
    size.push_back(norm(nu.codomain(), evaluate(nu, block)));
    mass.push_back(nu.space().mass_of(block));
  }
  std::vector<double> alpha(size.size(), 1.0);
  if (p > 1.0) {
    // Maximizer of sum alpha_A c_A over sum mu(A) alpha_A^p' <= 1 is
    // alpha_A proportional to (c_A / mu(A))^(p-1).
    const double pc = conjugate_exponent(p);
    double constraint = 0.0;
    for (std::size_t a = 0; a < size.size(); ++a) {
      alpha[a] = std::pow(size[a] / mass[a], p - 1.0);
      constraint += mass[a] * std::pow(alpha[a], pc);
    }
    if (constraint == 0.0) return 0.0;
    const double scale = std::pow(constraint, 1.0 / pc);
    for (double& a : alpha) a /= scale;
  }
  double sum = 0.0;
  for (std::size_t a = 0; a < size.size(); ++a) sum += alpha[a] * size[a];
  return sum;
}

double p_variation(const VectorMeasure& nu, double p, VariationMethod method) {
  check_exponent(p);
  const std::size_t n = nu.space().size();
  if (method == VariationMethod::Finest) return partition_p_sum(nu, Partition::finest(n), p);
  require(n <= kMaxBruteAtoms, ErrorCode::TooManyAtoms,
          "partition scans are limited to " + std::to_string(kMaxBruteAtoms) + " atoms");
  double best = 0.0;
  for_each_partition(nu.space(), [&](const Partition& partition) {
    const double value = method == VariationMethod::Brute ? partition_p_sum(nu, partition, p)
                                                          : holder_dual_sum(nu, partition, p);
    best = std::max(best, value);
  });
  return best;
}

double scalar_p_variation(const VectorMeasure& nu, const DualVector& zs, double p) {
  check_exponent(p);
  double sum = 0.0;
  for (std::size_t i = 0; i < nu.space().size(); ++i) {
    const double value = std::abs(pairing(nu.codomain(), nu.atom_value(i), zs));
    if (value == 0.0) continue;
    sum += std::pow(value, p) / std::pow(nu.space().mass(i), p - 1.0);
  }
  return std::pow(sum, 1.0 / p);
}

MomentMaxResult p_semivariation(const VectorMeasure& nu, double p, const MomentOptions& options) {
  check_exponent(p);
  // |<nu, z*>|_p = (sum_i mu_i |<nu_i / mu_i, z*>|^p)^(1/p).
  std::vector<Vector> densities;
  densities.reserve(nu.space().size());
  for (std::size_t i = 0; i < nu.space().size(); ++i) {
    Vector v = nu.atom_value(i);
    for (double& c : v.coords) c /= nu.space().mass(i);
    densities.push_back(std::move(v));
  }
  const auto masses = nu.space().masses();
  return maximize_p_moment(nu.codomain(), densities, masses, p, options);
}

double semivariation_over_subset(const VectorMeasure& nu, double p,
                                 std::span<const DualVector> functionals) {
  double best = 0.0;
  for (const auto& zs : functionals) {
    require(dual_norm(nu.codomain(), zs) <= 1.0 + 1e-9, ErrorCode::DualNormViolation,
            "functional lies outside the dual unit ball");
    best = std::max(best, scalar_p_variation(nu, zs, p));
  }
  return best;
}

}  // namespace vmlab
