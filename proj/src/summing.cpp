#include "vmlab/summing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "vmlab/error.hpp"
#include "vmlab/lp.hpp"
#include "vmlab/random.hpp"

namespace vmlab {

namespace {

constexpr double kNegligibleImage = 1e-13;

using Index = Eigen::Index;

void check_exponent(double p) {
  require(p >= 1.0 && std::isfinite(p), ErrorCode::BadExponent, "need 1 <= p < infinity");
}

Index idx(std::size_t i) { return static_cast<Index>(i); }

double euclid(const std::vector<double>& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

// Functional x -> <u x, y*> written in plain coordinates of x:
// g_j = sum_k wY_k U_kj y*_k.
std::vector<double> pullback_gradient(const LinearOperator& u, const std::vector<double>& ys) {
  std::vector<double> g(u.domain().dim(), 0.0);
  for (std::size_t k = 0; k < u.codomain().dim(); ++k) {
    const double coeff = u.codomain().weight(k) * ys[k];
    if (coeff == 0.0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += coeff * u.entries()(idx(k), idx(j));
  }
  return g;
}

Vector unit(const SpaceDescriptor& space, std::vector<double> coords) {
  Vector x{std::move(coords)};
  const double n = norm(space, x);
  if (n > 0.0) {
    for (double& c : x.coords) c /= n;
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// LinearOperator

LinearOperator::LinearOperator(SpaceDescriptor domain, SpaceDescriptor codomain, Eigen::MatrixXd entries)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), entries_(std::move(entries)) {
  require(entries_.rows() == idx(codomain_.dim()) && entries_.cols() == idx(domain_.dim()),
          ErrorCode::DimensionMismatch, "operator matrix shape does not match its descriptors");
}

LinearOperator LinearOperator::identity(const SpaceDescriptor& space) {
  return LinearOperator(space, space, Eigen::MatrixXd::Identity(idx(space.dim()), idx(space.dim())));
}

LinearOperator LinearOperator::zero(const SpaceDescriptor& domain, const SpaceDescriptor& codomain) {
  return LinearOperator(domain, codomain, Eigen::MatrixXd::Zero(idx(codomain.dim()), idx(domain.dim())));
}

LinearOperator LinearOperator::rank_one(const SpaceDescriptor& domain, const SpaceDescriptor& codomain,
                                        const DualVector& functional, const Vector& image) {
  require(functional.dim() == domain.dim() && image.dim() == codomain.dim(), ErrorCode::DimensionMismatch,
          "rank-one factors do not match the descriptors");
  Eigen::MatrixXd m(idx(codomain.dim()), idx(domain.dim()));
  for (std::size_t k = 0; k < codomain.dim(); ++k) {
    for (std::size_t j = 0; j < domain.dim(); ++j) {
      m(idx(k), idx(j)) = image[k] * domain.weight(j) * functional[j];
    }
  }
  return LinearOperator(domain, codomain, std::move(m));
}

Vector LinearOperator::apply(const Vector& x) const {
  require(x.dim() == domain_.dim(), ErrorCode::DimensionMismatch, "vector is not in the operator domain");
  Vector out{std::vector<double>(codomain_.dim(), 0.0)};
  for (std::size_t k = 0; k < codomain_.dim(); ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < domain_.dim(); ++j) s += entries_(idx(k), idx(j)) * x[j];
    out.coords[k] = s;
  }
  return out;
}

LinearOperator LinearOperator::scaled(double factor) const {
  return LinearOperator(domain_, codomain_, factor * entries_);
}

bool LinearOperator::operator==(const LinearOperator& other) const {
  return domain_ == other.domain_ && codomain_ == other.codomain_ && entries_ == other.entries_;
}

// ---------------------------------------------------------------------------
// Operator norm

OperatorNorm operator_norm(const LinearOperator& u, const MomentOptions& options) {
  const SpaceDescriptor& x = u.domain();
  const SpaceDescriptor& y = u.codomain();
  const std::size_t d = x.dim();
  OperatorNorm best{-1.0, Vector{std::vector<double>(d, 0.0)}, Certification::Exact};
  auto consider = [&](Vector candidate) {
    const double value = norm(y, u.apply(candidate));
    if (value > best.value) {
      best.value = value;
      best.witness = std::move(candidate);
    }
  };

  if (x.q() == 1.0 || d == 1) {
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<double> e(d, 0.0);
      e[j] = 1.0;
      consider(unit(x, std::move(e)));
    }
    return best;
  }
  if (std::isinf(x.q()) && d <= 16) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      std::vector<double> s(d);
      for (std::size_t j = 0; j < d; ++j) s[j] = (mask >> j) & 1U ? -1.0 : 1.0;
      consider(Vector{std::move(s)});
    }
    return best;
  }
  if (auto vertices = dual_ball_extreme_points(y)) {
    for (const auto& ys : *vertices) consider(Vector{ball_argmax(x, pullback_gradient(u, ys.coords))});
    return best;
  }
  if (x.is_euclidean() && y.is_euclidean()) {
    Eigen::MatrixXd m(idx(y.dim()), idx(d));
    for (std::size_t k = 0; k < y.dim(); ++k) {
      for (std::size_t j = 0; j < d; ++j) {
        m(idx(k), idx(j)) = std::sqrt(y.weight(k)) * u.entries()(idx(k), idx(j)) / std::sqrt(x.weight(j));
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    std::vector<double> coords(d);
    for (std::size_t j = 0; j < d; ++j) coords[j] = svd.matrixV()(idx(j), 0) / std::sqrt(x.weight(j));
    consider(unit(x, std::move(coords)));
    return best;
  }

  // Convex maximization of ||u x|| over B_X by linearization steps.
  best.certification = Certification::HeuristicLowerBound;
  const SpaceDescriptor y_dual = y.dual();
  Rng rng(options.seed);
  for (std::size_t s = 0; s < options.starts; ++s) {
    std::vector<double> start;
    if (s < d) {
      start.assign(d, 0.0);
      start[s] = 1.0;
    } else {
      start = rng.normal_vector(d);
    }
    Vector current = unit(x, std::move(start));
    double value = norm(y, u.apply(current));
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
      const Vector image = u.apply(current);
      std::vector<double> g(y.dim());
      for (std::size_t k = 0; k < g.size(); ++k) g[k] = y.weight(k) * image[k];
      const std::vector<double> ys = ball_argmax(y_dual, g);
      Vector next{ball_argmax(x, pullback_gradient(u, ys))};
      const double next_value = norm(y, u.apply(next));
      if (!(next_value > value * (1.0 + options.relative_tolerance))) break;
      value = next_value;
      current = std::move(next);
    }
    consider(std::move(current));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Lower bounds

FamilyRatio family_ratio(const LinearOperator& u, std::span<const Vector> family, double p,
                         const MomentOptions& options) {
  check_exponent(p);
  require(!family.empty(), ErrorCode::EmptyFamily, "family_ratio needs a nonempty family");
  double numerator = 0.0;
  bool any_nonzero = false;
  for (const auto& x : family) {
    require(x.dim() == u.domain().dim(), ErrorCode::DimensionMismatch, "family vector not in the domain");
    for (double c : x.coords) any_nonzero = any_nonzero || c != 0.0;
    numerator += std::pow(norm(u.codomain(), u.apply(x)), p);
  }
  require(any_nonzero, ErrorCode::ZeroFamily, "family_ratio needs a nonzero vector");
  const std::vector<double> ones(family.size(), 1.0);
  const MomentMaxResult denominator = maximize_p_moment(u.domain(), family, ones, p, options);
  return FamilyRatio{std::pow(numerator, 1.0 / p) / denominator.value, denominator.certification};
}

SummingLower pi_p_lower(const LinearOperator& u, double p, const SearchBudget& budget) {
  check_exponent(p);
  const std::size_t d = u.domain().dim();
  const std::size_t max_size = budget.max_family_size > 0 ? budget.max_family_size : 2 * d;
  MomentOptions options;
  options.seed = budget.seed;

  SummingLower best{-1.0, {}, Certification::Exact};
  auto consider = [&](std::vector<Vector> family) {
    const FamilyRatio r = family_ratio(u, family, p, options);
    if (r.value > best.value) {
      best.value = r.value;
      best.witness = std::move(family);
      best.certification = r.certification;
    }
    return r.value;
  };

  std::vector<Vector> basis;
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> e(d, 0.0);
    e[j] = 1.0;
    basis.push_back(Vector{std::move(e)});
  }
  consider(basis);

  const OperatorNorm op = operator_norm(u, options);
  if (op.value > 0.0) consider({op.witness});

  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(u.entries(), Eigen::ComputeFullV);
    std::vector<Vector> directions;
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<double> v(d);
      for (std::size_t i = 0; i < d; ++i) v[i] = svd.matrixV()(idx(i), idx(j));
      directions.push_back(Vector{std::move(v)});
    }
    consider(directions);
  }

  Rng rng(budget.seed);
  for (std::size_t r = 0; r < budget.restarts; ++r) {
    const std::size_t size = 1 + r % max_size;
    std::vector<Vector> family;
    for (std::size_t k = 0; k < size; ++k) family.push_back(Vector{rng.normal_vector(d)});
    double value = consider(family);
    double step = 0.5;
    for (std::size_t s = 0; s < budget.ascent_steps; ++s) {
      std::vector<Vector> trial = family;
      auto& member = trial[rng.index(size)];
      double scale = euclid(member.coords);
      if (scale == 0.0) scale = 1.0;
      for (double& c : member.coords) c += step * scale * rng.normal();
      const double trial_value = consider(trial);
      if (trial_value > value) {
        value = trial_value;
        family = std::move(trial);
      } else {
        step *= 0.9;
      }
    }
  }
  if (best.value < 0.0) best.value = 0.0;
  return best;
}

// ---------------------------------------------------------------------------
// Pietsch domination

PietschCertificate pietsch_lp_upper(const LinearOperator& u, double p, std::span<const DualVector> sphere,
                                    std::span<const Vector> test_family) {
  check_exponent(p);
  require(!test_family.empty(), ErrorCode::EmptyFamily, "Pietsch LP needs a test family");
  require(!sphere.empty(), ErrorCode::EmptyFamily, "Pietsch LP needs sphere points");
  const SpaceDescriptor& x = u.domain();
  for (const auto& xs : sphere) {
    require(xs.dim() == x.dim(), ErrorCode::DimensionMismatch, "sphere point not in the dual of the domain");
    require(std::abs(dual_norm(x, xs) - 1.0) <= 1e-9, ErrorCode::DualNormViolation,
            "sphere points must have dual norm 1");
  }

  PietschCertificate cert;
  cert.p = p;
  cert.test_family.assign(test_family.begin(), test_family.end());

  // Rows with ||u x|| = 0, or at rounding level next to the largest image,
  // impose nothing and are dropped.
  std::vector<double> image_norms;
  for (const auto& v : test_family) image_norms.push_back(norm(u.codomain(), u.apply(v)));
  const double largest = *std::max_element(image_norms.begin(), image_norms.end());
  std::vector<std::size_t> active;
  std::vector<double> demand;
  for (std::size_t i = 0; i < test_family.size(); ++i) {
    if (image_norms[i] > kNegligibleImage * largest) {
      active.push_back(i);
      demand.push_back(std::pow(image_norms[i], p));
    }
  }
  if (active.empty()) {
    cert.support = {sphere.front()};
    cert.weights = {1.0};
    cert.constant = 0.0;
    return cert;
  }

  const std::size_t m = active.size();
  const std::size_t n = sphere.size();
  Eigen::MatrixXd cover(idx(m), idx(n));
  for (std::size_t i = 0; i < m; ++i) {
    double row_max = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = std::pow(std::abs(pairing(x, test_family[active[i]], sphere[j])), p);
      cover(idx(i), idx(j)) = a;
      row_max = std::max(row_max, a);
    }
    require(row_max > 0.0, ErrorCode::InfeasibleLP,
            "test vector " + std::to_string(active[i]) + " is annihilated by every sphere point");
  }
  // Rescale rows so each demand is 1; the feasible set of t is unchanged.
  for (std::size_t i = 0; i < m; ++i) cover.row(idx(i)) /= demand[i];

  // Dual packing program: max 1.y s.t. cover^T y <= 1, y >= 0.
  const lp::Solution solution =
      lp::maximize(cover.transpose(), Eigen::VectorXd::Ones(idx(n)), Eigen::VectorXd::Ones(idx(m)));
  require(solution.status != lp::Status::Unbounded, ErrorCode::InfeasibleLP, "domination LP is infeasible");
  require(solution.status == lp::Status::Optimal, ErrorCode::InvalidArgument,
          "domination LP hit its pivot limit");

  Eigen::VectorXd t = solution.dual.cwiseMax(0.0);
  const Eigen::VectorXd coverage = cover * t;
  const double worst = coverage.minCoeff();
  require(worst > 0.0, ErrorCode::InfeasibleLP, "LP multipliers do not cover the test family");
  if (worst < 1.0) t /= worst;

  const double total = t.sum();
  cert.constant = std::pow(total, 1.0 / p);
  for (std::size_t j = 0; j < n; ++j) {
    if (t(idx(j)) > 0.0) {
      cert.support.push_back(sphere[j]);
      cert.weights.push_back(t(idx(j)) / total);
    }
  }
  return cert;
}

double certificate_violation(const LinearOperator& u, const PietschCertificate& cert) {
  const double cp = std::pow(cert.constant, cert.p);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& x : cert.test_family) {
    double integral = 0.0;
    for (std::size_t j = 0; j < cert.support.size(); ++j) {
      integral += cert.weights[j] * std::pow(std::abs(pairing(u.domain(), x, cert.support[j])), cert.p);
    }
    worst = std::max(worst, std::pow(norm(u.codomain(), u.apply(x)), cert.p) - cp * integral);
  }
  return worst;
}

std::string family_hash(std::span<const Vector> family) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(family.size());
  for (const auto& v : family) {
    mix(v.dim());
    for (double c : v.coords) mix(std::bit_cast<std::uint64_t>(c == 0.0 ? 0.0 : c));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Compositions

SimpleFunction compose_function(const LinearOperator& u, const SimpleFunction& f) {
  require(f.codomain() == u.domain(), ErrorCode::DescriptorMismatch,
          "function codomain differs from the operator domain");
  std::vector<Vector> values;
  values.reserve(f.values().size());
  for (const auto& v : f.values()) values.push_back(u.apply(v));
  return SimpleFunction(f.space(), u.codomain(), std::move(values));
}

VectorMeasure compose_measure(const LinearOperator& u, const VectorMeasure& nu) {
  require(nu.codomain() == u.domain(), ErrorCode::DescriptorMismatch,
          "measure codomain differs from the operator domain");
  std::vector<Vector> values;
  values.reserve(nu.atom_values().size());
  for (const auto& v : nu.atom_values()) values.push_back(u.apply(v));
  return VectorMeasure(nu.space(), u.codomain(), std::move(values));
}

std::vector<Vector> scaled_family(const SimpleFunction& f, double p) {
  check_exponent(p);
  std::vector<Vector> out;
  for (std::size_t i = 0; i < f.space().size(); ++i) {
    Vector v = f.value(i);
    const double s = std::pow(f.space().mass(i), 1.0 / p);
    for (double& c : v.coords) c *= s;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vector> scaled_family(const VectorMeasure& nu, double p) {
  check_exponent(p);
  std::vector<Vector> out;
  for (std::size_t i = 0; i < nu.space().size(); ++i) {
    Vector v = nu.atom_value(i);
    const double s = std::pow(nu.space().mass(i), 1.0 / p - 1.0);
    for (double& c : v.coords) c *= s;
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

void require_covered(const PietschCertificate& cert, std::span<const Vector> needed) {
  for (const auto& v : needed) {
    bool zero = std::all_of(v.coords.begin(), v.coords.end(), [](double c) { return c == 0.0; });
    if (zero) continue;
    bool found = false;
    for (const auto& w : cert.test_family) {
      if (w.dim() != v.dim()) continue;
      bool same = true;
      for (std::size_t j = 0; j < v.dim() && same; ++j) {
        same = std::abs(w[j] - v[j]) <= 1e-12 * (1.0 + std::abs(v[j]));
      }
      if (same) {
        found = true;
        break;
      }
    }
    require(found, ErrorCode::FamilyNotCovered, "certificate test family misses a required vector");
  }
}

CompositionReport finish(double lhs, const MomentMaxResult& dual_side, double support_best,
                         const PietschCertificate& cert) {
  CompositionReport r;
  r.lhs = lhs;
  r.dual_norm_value = dual_side.value;
  r.effective = std::max(dual_side.value, support_best);
  r.constant = cert.constant;
  r.rhs = cert.constant * r.effective;
  r.slack = r.rhs - r.lhs;
  r.holds = r.slack >= -1e-9 * std::max(1.0, r.rhs);
  r.certification = weakest(Certification::LpEstimate, dual_side.certification);
  return r;
}

}  // namespace

CompositionReport verify_composition_bound(const LinearOperator& u, const SimpleFunction& f, double p,
                                           const PietschCertificate& cert, const MomentOptions& options) {
  check_exponent(p);
  require(f.codomain() == u.domain(), ErrorCode::DescriptorMismatch,
          "function codomain differs from the operator domain");
  require(cert.p == p, ErrorCode::InvalidArgument, "certificate was built for another exponent");
  require_covered(cert, scaled_family(f, p));
  const double lhs = bochner_norm(compose_function(u, f), p);
  const MomentMaxResult dn = dunford_norm(f, p, options);
  // Each support point gives a lower bound for ||f||_{D_p}; the inequality
  // chain only needs the eta-average of those values.
  double support_best = 0.0;
  for (const auto& xs : cert.support) {
    support_best = std::max(support_best, moment_objective(f.codomain(), f.values(), f.space().masses(), p, xs));
  }
  return finish(lhs, dn, support_best, cert);
}

CompositionReport verify_measure_composition_bound(const LinearOperator& u, const VectorMeasure& nu,
                                                   double p, const PietschCertificate& cert,
                                                   const MomentOptions& options) {
  check_exponent(p);
  require(nu.codomain() == u.domain(), ErrorCode::DescriptorMismatch,
          "measure codomain differs from the operator domain");
  require(cert.p == p, ErrorCode::InvalidArgument, "certificate was built for another exponent");
  require_covered(cert, scaled_family(nu, p));
  const double lhs = p_variation(compose_measure(u, nu), p);
  const MomentMaxResult sv = p_semivariation(nu, p, options);
  double support_best = 0.0;
  for (const auto& xs : cert.support) support_best = std::max(support_best, scalar_p_variation(nu, xs, p));
  return finish(lhs, sv, support_best, cert);
}

}  // namespace vmlab
