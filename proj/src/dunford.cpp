#include "vmlab/dunford.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vmlab/error.hpp"

namespace vmlab {

namespace {

void check_exponent(double p) {
  require(p >= 1.0 && std::isfinite(p), ErrorCode::BadExponent, "need 1 <= p < infinity");
}

}  // namespace

SimpleFunction::SimpleFunction(DiscreteProbabilitySpace space, SpaceDescriptor codomain,
                               std::vector<Vector> values)
    : space_(std::move(space)), codomain_(std::move(codomain)), values_(std::move(values)) {
  require(values_.size() == space_.size(), ErrorCode::DimensionMismatch, "one value per atom");
  for (const auto& v : values_) {
    require(v.dim() == codomain_.dim(), ErrorCode::DimensionMismatch,
            "value dimension differs from the codomain");
  }
}

SimpleFunction SimpleFunction::constant(const DiscreteProbabilitySpace& space,
                                        const SpaceDescriptor& codomain, const Vector& value) {
  return SimpleFunction(space, codomain, std::vector<Vector>(space.size(), value));
}

SimpleFunction& SimpleFunction::operator-=(const SimpleFunction& other) {
  require(space_ == other.space_, ErrorCode::SpaceMismatch, "functions on different spaces");
  require(codomain_ == other.codomain_, ErrorCode::DescriptorMismatch, "functions with different codomains");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    for (std::size_t j = 0; j < codomain_.dim(); ++j) values_[i].coords[j] -= other.values_[i][j];
  }
  return *this;
}

SimpleFunction& SimpleFunction::operator*=(double factor) {
  for (auto& v : values_) {
    for (double& c : v.coords) c *= factor;
  }
  return *this;
}

SimpleFunction operator-(SimpleFunction a, const SimpleFunction& b) { return a -= b; }
SimpleFunction operator*(double factor, SimpleFunction a) { return a *= factor; }

ScalarFunction pair(const SimpleFunction& f, const DualVector& xs) {
  std::vector<double> values(f.space().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = pairing(f.codomain(), f.value(i), xs);
  return ScalarFunction(f.space(), std::move(values));
}

MomentMaxResult dunford_norm(const SimpleFunction& f, double p, const MomentOptions& options) {
  check_exponent(p);
  return maximize_p_moment(f.codomain(), f.values(), f.space().masses(), p, options);
}

double bochner_norm(const SimpleFunction& f, double p) {
  check_exponent(p);
  double sum = 0.0;
  for (std::size_t i = 0; i < f.space().size(); ++i) {
    sum += f.space().mass(i) * std::pow(norm(f.codomain(), f.value(i)), p);
  }
  return std::pow(sum, 1.0 / p);
}

VectorMeasure indefinite_integral(const SimpleFunction& f) {
  std::vector<Vector> atoms = f.values();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (double& c : atoms[i].coords) c *= f.space().mass(i);
  }
  return VectorMeasure(f.space(), f.codomain(), std::move(atoms));
}

DunfordOperator::DunfordOperator(SimpleFunction f, double p) : f_(std::move(f)), p_(p) {
  check_exponent(p_);
}

Vector DunfordOperator::apply(const ScalarFunction& g) const {
  require(g.space() == f_.space(), ErrorCode::SpaceMismatch, "g lives on a different space");
  Vector out{std::vector<double>(f_.codomain().dim(), 0.0)};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double coeff = f_.space().mass(i) * g[i];
    for (std::size_t j = 0; j < out.dim(); ++j) out.coords[j] += coeff * f_.value(i)[j];
  }
  return out;
}

Vector dunford_apply(const DunfordOperator& op, const ScalarFunction& g) { return op.apply(g); }

std::vector<double> sv_profile(const SimpleFunction& f, double p) {
  require(f.codomain().is_euclidean() && p == 2.0, ErrorCode::UnsupportedRegime,
          "singular value profiles need an l_2 codomain and p = 2");
  const std::size_t n = f.space().size();
  const std::size_t d = f.codomain().dim();
  Eigen::MatrixXd m(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::sqrt(f.space().mass(i) * f.codomain().weight(j)) * f.value(i)[j];
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  std::vector<double> out(d, 0.0);
  const auto& sv = svd.singularValues();
  for (Eigen::Index k = 0; k < sv.size(); ++k) out[static_cast<std::size_t>(k)] = sv(k);
  return out;
}

SimpleFunction averaging(const SimpleFunction& f, const Partition& partition) {
  require(partition.atom_count() == f.space().size(), ErrorCode::SpaceMismatch,
          "partition and function live on different atom sets");
  const VectorMeasure nu = indefinite_integral(f);
  std::vector<Vector> values(f.space().size());
  for (const auto& block : partition.blocks()) {
    Vector mean = evaluate(nu, block);
    const double mass = f.space().mass_of(block);
    for (double& c : mean.coords) c /= mass;
    for (std::size_t atom : block) values[atom] = mean;
  }
  return SimpleFunction(f.space(), f.codomain(), std::move(values));
}

MomentMaxResult approximation_defect(const SimpleFunction& f, const Partition& partition, double p,
                                     const MomentOptions& options) {
  return dunford_norm(f - averaging(f, partition), p, options);
}

namespace {

class ModulusSearch {
public:
  ModulusSearch(const SimpleFunction& f, double p, double capacity, const MomentOptions& options)
      : f_(f), p_(p), capacity_(capacity), options_(options) {
    for (std::size_t i = 0; i < f.space().size(); ++i) {
      const double bound = f.space().mass(i) * std::pow(norm(f.codomain(), f.value(i)), p);
      if (bound > 0.0) items_.push_back({i, f.space().mass(i), bound});
    }
    std::sort(items_.begin(), items_.end(), [](const Item& a, const Item& b) {
      const double da = a.bound / a.weight;
      const double db = b.bound / b.weight;
      return da != db ? da > db : a.atom < b.atom;
    });
    best_.witness = DualVector{std::vector<double>(f.codomain().dim(), 0.0)};
  }

  ModulusEntry run() {
    descend(0, 0.0, 0.0);
    std::sort(best_.atoms.begin(), best_.atoms.end());
    best_.certification = certification_;
    return best_;
  }

private:
  struct Item {
    std::size_t atom;
    double weight;
    double bound;
  };

  double fractional_bound(std::size_t from, double weight, double value) const {
    double room = capacity_ - weight;
    for (std::size_t k = from; k < items_.size() && room > 0.0; ++k) {
      if (items_[k].weight <= room) {
        room -= items_[k].weight;
        value += items_[k].bound;
      } else {
        value += items_[k].bound * room / items_[k].weight;
        room = 0.0;
      }
    }
    return value;
  }

  bool maximal(double weight) const {
    for (std::size_t k : excluded_) {
      if (weight + items_[k].weight <= capacity_) return false;
    }
    return true;
  }

  void evaluate_current() {
    std::vector<Vector> vectors;
    std::vector<double> weights;
    for (std::size_t k : chosen_) {
      vectors.push_back(f_.value(items_[k].atom));
      weights.push_back(items_[k].weight);
    }
    const MomentMaxResult inner = maximize_p_moment(f_.codomain(), vectors, weights, p_, options_);
    certification_ = weakest(certification_, inner.certification);
    const double eta = std::pow(inner.value, p_);
    if (eta > best_.eta) {
      best_.eta = eta;
      best_.witness = inner.witness;
      best_.atoms.clear();
      for (std::size_t k : chosen_) best_.atoms.push_back(items_[k].atom);
    }
  }

  void descend(std::size_t k, double weight, double bound_sum) {
    if (fractional_bound(k, weight, bound_sum) <= best_.eta) return;
    if (k == items_.size()) {
      if (!chosen_.empty() && maximal(weight)) evaluate_current();
      return;
    }
    if (weight + items_[k].weight <= capacity_) {
      chosen_.push_back(k);
      descend(k + 1, weight + items_[k].weight, bound_sum + items_[k].bound);
      chosen_.pop_back();
    }
    excluded_.push_back(k);
    descend(k + 1, weight, bound_sum);
    excluded_.pop_back();
  }

  const SimpleFunction& f_;
  double p_;
  double capacity_;
  const MomentOptions& options_;
  std::vector<Item> items_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> excluded_;
  ModulusEntry best_;
  Certification certification_ = Certification::Exact;
};

}  // namespace

ScalarFamilyReport zfp_ui_modulus(const SimpleFunction& f, double p, std::span<const double> deltas,
                                  const MomentOptions& options) {
  check_exponent(p);
  require(f.space().size() <= kMaxSubsetSearchAtoms, ErrorCode::TooManyAtoms,
          "subset search is limited to " + std::to_string(kMaxSubsetSearchAtoms) + " atoms");
  ScalarFamilyReport report;
  for (double delta : deltas) {
    require(delta >= 0.0 && delta <= 1.0, ErrorCode::InvalidArgument, "delta must lie in [0, 1]");
    ModulusSearch search(f, p, delta + kMassTolerance, options);
    ModulusEntry entry = search.run();
    entry.delta = delta;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace vmlab
