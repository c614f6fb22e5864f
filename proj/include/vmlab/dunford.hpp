#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vmlab/measure.hpp"
#include "vmlab/normed.hpp"
#include "vmlab/space.hpp"

namespace vmlab {

/// f: Omega -> X, one vector per atom.
class SimpleFunction {
public:
  SimpleFunction(DiscreteProbabilitySpace space, SpaceDescriptor codomain, std::vector<Vector> values);

  static SimpleFunction constant(const DiscreteProbabilitySpace& space, const SpaceDescriptor& codomain,
                                 const Vector& value);

  const DiscreteProbabilitySpace& space() const noexcept { return space_; }
  const SpaceDescriptor& codomain() const noexcept { return codomain_; }
  const std::vector<Vector>& values() const noexcept { return values_; }
  const Vector& value(std::size_t atom) const { return values_.at(atom); }

  SimpleFunction& operator-=(const SimpleFunction& other);
  SimpleFunction& operator*=(double factor);

  bool operator==(const SimpleFunction&) const = default;

private:
  DiscreteProbabilitySpace space_;
  SpaceDescriptor codomain_;
  std::vector<Vector> values_;
};

SimpleFunction operator-(SimpleFunction a, const SimpleFunction& b);
SimpleFunction operator*(double factor, SimpleFunction a);

/// The scalar function <f, x*>.
ScalarFunction pair(const SimpleFunction& f, const DualVector& xs);

/// ||f||_{D_p} = sup_{x* in B_X*} ||<f, x*>||_{L^p}.
MomentMaxResult dunford_norm(const SimpleFunction& f, double p, const MomentOptions& options = {});

/// ||f||_{L^p(mu, X)} = (sum_i mu_i ||f_i||^p)^(1/p).
double bochner_norm(const SimpleFunction& f, double p);

/// nu_f with atom values mu_i f_i.
VectorMeasure indefinite_integral(const SimpleFunction& f);

/// T_f^p: L^p'(mu) -> X, g -> sum_i mu_i g_i f_i, with adjoint
/// S_f^p: X* -> L^p(mu), x* -> <f, x*>.
class DunfordOperator {
public:
  DunfordOperator(SimpleFunction f, double p);

  const SimpleFunction& function() const noexcept { return f_; }
  double p() const noexcept { return p_; }

  Vector apply(const ScalarFunction& g) const;
  ScalarFunction adjoint(const DualVector& xs) const { return pair(f_, xs); }

private:
  SimpleFunction f_;
  double p_;
};

Vector dunford_apply(const DunfordOperator& op, const ScalarFunction& g);

/// Singular values (descending, d of them) of x* -> <f, x*> from X* into
/// L^2(mu). Only the Hilbert regime (codomain (weighted) l_2, p = 2).
std::vector<double> sv_profile(const SimpleFunction& f, double p);

/// Blockwise conditional average h_P = sum_A (nu_f(A) / mu(A)) chi_A.
SimpleFunction averaging(const SimpleFunction& f, const Partition& partition);

/// ||f - h_P||_{D_p}.
MomentMaxResult approximation_defect(const SimpleFunction& f, const Partition& partition, double p,
                                     const MomentOptions& options = {});

struct ModulusEntry {
  double delta = 0.0;
  double eta = 0.0;
  DualVector witness;
  std::vector<std::size_t> atoms;
  Certification certification = Certification::Exact;
};

struct ScalarFamilyReport {
  std::vector<ModulusEntry> entries;
};

/// eta(delta) = sup_{x* in B_X*} sup_{mu(A) <= delta} integral_A |<f, x*>|^p
/// for each requested delta. Branch and bound over atom subsets (only
/// maximal feasible subsets are evaluated; subsets are pruned with the
/// Bochner bound mu_i ||f_i||^p) with an exact dual-ball maximization per
/// subset where one is available.
ScalarFamilyReport zfp_ui_modulus(const SimpleFunction& f, double p, std::span<const double> deltas,
                                  const MomentOptions& options = {});

}  // namespace vmlab
