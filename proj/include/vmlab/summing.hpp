#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vmlab/dunford.hpp"
#include "vmlab/measure.hpp"
#include "vmlab/normed.hpp"

namespace vmlab {

/// u: X -> Y as a codomain-dim x domain-dim matrix in plain coordinates.
class LinearOperator {
public:
  LinearOperator(SpaceDescriptor domain, SpaceDescriptor codomain, Eigen::MatrixXd entries);

  static LinearOperator identity(const SpaceDescriptor& space);
  static LinearOperator zero(const SpaceDescriptor& domain, const SpaceDescriptor& codomain);
  /// x -> <x, a*> y.
  static LinearOperator rank_one(const SpaceDescriptor& domain, const SpaceDescriptor& codomain,
                                 const DualVector& functional, const Vector& image);

  const SpaceDescriptor& domain() const noexcept { return domain_; }
  const SpaceDescriptor& codomain() const noexcept { return codomain_; }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }

  Vector apply(const Vector& x) const;
  LinearOperator scaled(double factor) const;

  bool operator==(const LinearOperator& other) const;

private:
  SpaceDescriptor domain_;
  SpaceDescriptor codomain_;
  Eigen::MatrixXd entries_;
};

struct OperatorNorm {
  double value = 0.0;
  Vector witness;  // unit vector of X attaining value
  Certification certification = Certification::Exact;
};

/// sup_{||x|| <= 1} ||u x||. Exact for polytopal domain balls, polytopal
/// codomain dual balls and the (weighted) Hilbert-Hilbert case.
OperatorNorm operator_norm(const LinearOperator& u, const MomentOptions& options = {});

struct FamilyRatio {
  double value = 0.0;
  Certification certification = Certification::Exact;
};

/// (sum ||u x_i||^p)^(1/p) / sup_{x* in B_X*} (sum |<x_i, x*>|^p)^(1/p).
/// With an exact denominator this is a lower bound for pi_p(u).
FamilyRatio family_ratio(const LinearOperator& u, std::span<const Vector> family, double p,
                         const MomentOptions& options = {});

struct SearchBudget {
  std::uint64_t seed = 0;
  std::size_t restarts = 16;
  std::size_t max_family_size = 0;  // 0 means 2 * dim
  std::size_t ascent_steps = 64;
};

struct SummingLower {
  double value = 0.0;
  std::vector<Vector> witness;
  Certification certification = Certification::Exact;
};

/// Best family ratio over the basis family, the operator-norm singleton,
/// the singular directions and seeded random families refined by local
/// ascent.
SummingLower pi_p_lower(const LinearOperator& u, double p, const SearchBudget& budget = {});

/// Probability measure eta on finitely many dual unit vectors and a constant
/// C with ||u x||^p <= C^p sum_j eta_j |<x, x*_j>|^p for x in test_family.
struct PietschCertificate {
  double p = 2.0;
  std::vector<DualVector> support;
  std::vector<double> weights;
  double constant = 0.0;
  std::vector<Vector> test_family;
};

/// Solves min sum_j t_j s.t. sum_j t_j |<x, x*_j>|^p >= ||u x||^p for x in
/// test_family, t >= 0, through its dual packing program, then rescales t
/// so the domination holds on the test family in floating point.
/// C = (sum t)^(1/p). An estimate of pi_p(u): domination is only enforced on
/// the test family.
PietschCertificate pietsch_lp_upper(const LinearOperator& u, double p, std::span<const DualVector> sphere,
                                    std::span<const Vector> test_family);

/// max over the test family of ||u x||^p - C^p sum_j eta_j |<x, x*_j>|^p
/// (nonpositive for a sound certificate).
double certificate_violation(const LinearOperator& u, const PietschCertificate& cert);

/// FNV-1a digest of the coordinates' bit patterns, as 16 hex digits.
std::string family_hash(std::span<const Vector> family);

SimpleFunction compose_function(const LinearOperator& u, const SimpleFunction& f);
VectorMeasure compose_measure(const LinearOperator& u, const VectorMeasure& nu);

/// {mu_i^(1/p) f_i}: the family whose domination yields the composition bound.
std::vector<Vector> scaled_family(const SimpleFunction& f, double p);
/// {mu_i^(1/p - 1) nu_i}: the analogue for measures.
std::vector<Vector> scaled_family(const VectorMeasure& nu, double p);

struct CompositionReport {
  double lhs = 0.0;            // ||u o f||_{L^p} or |u o nu|_p
  double dual_norm_value = 0.0;  // ||f||_{D_p} or ||nu||_p as computed
  double effective = 0.0;      // max of the above and the values at the certificate support
  double constant = 0.0;
  double rhs = 0.0;            // constant * effective
  double slack = 0.0;          // rhs - lhs
  bool holds = false;
  Certification certification = Certification::Exact;
};

/// ||u o f||_{L^p(mu,Y)} <= C ||f||_{D_p(mu,X)}. Requires the certificate's
/// test family to contain scaled_family(f, p).
CompositionReport verify_composition_bound(const LinearOperator& u, const SimpleFunction& f, double p,
                                           const PietschCertificate& cert,
                                           const MomentOptions& options = {});

/// |u o nu|_p(Omega) <= C ||nu||_p(Omega), same coverage requirement with
/// scaled_family(nu, p).
CompositionReport verify_measure_composition_bound(const LinearOperator& u, const VectorMeasure& nu,
                                                   double p, const PietschCertificate& cert,
                                                   const MomentOptions& options = {});

}  // namespace vmlab
