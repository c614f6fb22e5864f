#include "vmlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "vmlab/error.hpp"

namespace vmlab {

double conjugate_exponent(double p) {
  require(p >= 1.0, ErrorCode::BadExponent, "exponent must be >= 1, got " + std::to_string(p));
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

DiscreteProbabilitySpace::DiscreteProbabilitySpace(std::vector<double> masses)
    : masses_(std::move(masses)) {
  double total = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    require(std::isfinite(masses_[i]), ErrorCode::InvalidArgument,
            "mass " + std::to_string(i) + " is not finite");
    require(masses_[i] > 0.0, ErrorCode::NonPositiveMass,
            "mass " + std::to_string(i) + " is not positive");
    total += masses_[i];
  }
  require(std::abs(total - 1.0) <= kMassTolerance, ErrorCode::MassNotOne,
          "masses sum to " + std::to_string(total));
}

double DiscreteProbabilitySpace::mass_of(std::span<const std::size_t> atoms) const {
  double total = 0.0;
  for (std::size_t atom : atoms) {
    require(atom < masses_.size(), ErrorCode::IndexOutOfRange,
            "atom " + std::to_string(atom) + " out of range");
    total += masses_[atom];
  }
  return total;
}

DiscreteProbabilitySpace make_space(std::vector<double> masses) {
  return DiscreteProbabilitySpace(std::move(masses));
}

DiscreteProbabilitySpace uniform_space(std::size_t atoms) {
  require(atoms > 0, ErrorCode::InvalidArgument, "a space needs at least one atom");
  return DiscreteProbabilitySpace(std::vector<double>(atoms, 1.0 / static_cast<double>(atoms)));
}

// ---------------------------------------------------------------------------
// Partitions

Partition::Partition(std::size_t atom_count, std::vector<std::vector<std::size_t>> blocks)
    : atom_count_(atom_count), blocks_(std::move(blocks)) {
  std::vector<bool> seen(atom_count_, false);
  std::size_t covered = 0;
  for (auto& block : blocks_) {
    require(!block.empty(), ErrorCode::InvalidArgument, "partition has an empty block");
    for (std::size_t atom : block) {
      require(atom < atom_count_, ErrorCode::IndexOutOfRange,
              "atom " + std::to_string(atom) + " out of range");
      require(!seen[atom], ErrorCode::InvalidArgument,
              "atom " + std::to_string(atom) + " appears twice");
      seen[atom] = true;
      ++covered;
    }
    std::sort(block.begin(), block.end());
  }
  require(covered == atom_count_, ErrorCode::InvalidArgument, "blocks do not cover every atom");
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

Partition Partition::finest(std::size_t atom_count) {
  std::vector<std::vector<std::size_t>> blocks(atom_count);
  for (std::size_t i = 0; i < atom_count; ++i) blocks[i] = {i};
  return Partition(atom_count, std::move(blocks));
}

Partition Partition::coarsest(std::size_t atom_count) {
  std::vector<std::size_t> all(atom_count);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return Partition(atom_count, {std::move(all)});
}

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  std::vector<std::size_t> distinct(labels.begin(), labels.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::vector<std::size_t>> blocks(distinct.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto pos = std::lower_bound(distinct.begin(), distinct.end(), labels[i]) - distinct.begin();
    blocks[static_cast<std::size_t>(pos)].push_back(i);
  }
  return Partition(labels.size(), std::move(blocks));
}

std::vector<std::size_t> Partition::labels() const {
  std::vector<std::size_t> out(atom_count_);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (std::size_t atom : blocks_[b]) out[atom] = b;
  }
  return out;
}

void for_each_partition(const DiscreteProbabilitySpace& space,
                        const std::function<void(const Partition&)>& visit) {
  const std::size_t n = space.size();
  require(n <= kMaxEnumerationAtoms, ErrorCode::TooManyAtoms,
          "partition enumeration is limited to " + std::to_string(kMaxEnumerationAtoms) + " atoms");
  // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<std::size_t> a(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);
  while (true) {
    visit(Partition::from_labels(a));
    std::size_t i = n;
    bool advanced = false;
    while (i > 1) {
      --i;
      if (a[i] <= prefix_max[i - 1]) {
        advanced = true;
        break;
      }
    }
    if (!advanced) return;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

std::vector<Partition> enumerate_partitions(const DiscreteProbabilitySpace& space) {
  std::vector<Partition> out;
  for_each_partition(space, [&](const Partition& p) { out.push_back(p); });
  return out;
}

bool is_refinement(const Partition& fine, const Partition& coarse) {
  require(fine.atom_count() == coarse.atom_count(), ErrorCode::SpaceMismatch,
          "partitions live on different atom sets");
  const auto coarse_label = coarse.labels();
  for (const auto& block : fine.blocks()) {
    const std::size_t label = coarse_label[block.front()];
    for (std::size_t atom : block) {
      if (coarse_label[atom] != label) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Scalar functions

ScalarFunction::ScalarFunction(DiscreteProbabilitySpace space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  require(values_.size() == space_.size(), ErrorCode::DimensionMismatch,
          "scalar function has " + std::to_string(values_.size()) + " values for " +
              std::to_string(space_.size()) + " atoms");
}

ScalarFunction ScalarFunction::constant(const DiscreteProbabilitySpace& space, double value) {
  return ScalarFunction(space, std::vector<double>(space.size(), value));
}

ScalarFunction ScalarFunction::indicator(const DiscreteProbabilitySpace& space,
                                         std::span<const std::size_t> atoms) {
  std::vector<double> values(space.size(), 0.0);
  for (std::size_t atom : atoms) {
    require(atom < space.size(), ErrorCode::IndexOutOfRange,
            "atom " + std::to_string(atom) + " out of range");
    values[atom] = 1.0;
  }
  return ScalarFunction(space, std::move(values));
}

ScalarFunction& ScalarFunction::operator+=(const ScalarFunction& other) {
  require(space_ == other.space_, ErrorCode::SpaceMismatch, "cannot add functions on different spaces");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarFunction& ScalarFunction::operator-=(const ScalarFunction& other) {
  require(space_ == other.space_, ErrorCode::SpaceMismatch,
          "cannot subtract functions on different spaces");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarFunction& ScalarFunction::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

ScalarFunction operator+(ScalarFunction a, const ScalarFunction& b) { return a += b; }
ScalarFunction operator-(ScalarFunction a, const ScalarFunction& b) { return a -= b; }
ScalarFunction operator*(double factor, ScalarFunction a) { return a *= factor; }

double lp_norm(const ScalarFunction& h, double p) {
  require(p >= 1.0, ErrorCode::BadExponent, "lp_norm needs p >= 1");
  const auto values = h.values();
  if (std::isinf(p)) {
    double best = 0.0;
    for (double v : values) best = std::max(best, std::abs(v));
    return best;
  }
  const auto masses = h.space().masses();
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += masses[i] * std::pow(std::abs(values[i]), p);
  }
  return std::pow(sum, 1.0 / p);
}

double integral(const ScalarFunction& h, std::span<const std::size_t> atoms) {
  double sum = 0.0;
  for (std::size_t atom : atoms) {
    require(atom < h.size(), ErrorCode::IndexOutOfRange, "atom out of range");
    sum += h.space().mass(atom) * h[atom];
  }
  return sum;
}

double integral(const ScalarFunction& h) {
  const auto masses = h.space().masses();
  const auto values = h.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += masses[i] * values[i];
  return sum;
}

ScalarFunction conditional_average(const ScalarFunction& g, const Partition& partition) {
  require(partition.atom_count() == g.size(), ErrorCode::SpaceMismatch,
          "partition and function have different atom counts");
  std::vector<double> out(g.size(), 0.0);
  for (const auto& block : partition.blocks()) {
    const double mass = g.space().mass_of(block);
    const double mean = mass > 0.0 ? integral(g, block) / mass : 0.0;
    for (std::size_t atom : block) out[atom] = mean;
  }
  return ScalarFunction(g.space(), std::move(out));
}

// ---------------------------------------------------------------------------
// Uniform integrability modulus

namespace {

struct KnapsackItem {
  std::size_t atom;
  double weight;
  double value;
};

// 0/1 knapsack with real weights; items sorted by value density.
class KnapsackSearch {
public:
  KnapsackSearch(std::vector<KnapsackItem> items, double capacity)
      : items_(std::move(items)), capacity_(capacity) {
    std::sort(items_.begin(), items_.end(), [](const KnapsackItem& a, const KnapsackItem& b) {
      const double da = a.value / a.weight;
      const double db = b.value / b.weight;
      return da != db ? da > db : a.atom < b.atom;
    });
  }

  void run() { descend(0, 0.0, 0.0); }

  double best_value() const { return best_value_; }
  std::vector<std::size_t> best_atoms() const {
    auto out = best_atoms_;
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  double fractional_bound(std::size_t from, double weight, double value) const {
    double room = capacity_ - weight;
    double bound = value;
    for (std::size_t k = from; k < items_.size() && room > 0.0; ++k) {
      if (items_[k].weight <= room) {
        room -= items_[k].weight;
        bound += items_[k].value;
      } else {
        bound += items_[k].value * room / items_[k].weight;
        room = 0.0;
      }
    }
    return bound;
  }

  void descend(std::size_t k, double weight, double value) {
    if (value > best_value_) {
      best_value_ = value;
      best_atoms_ = current_;
    }
    if (k == items_.size()) return;
    if (fractional_bound(k, weight, value) <= best_value_) return;
    const auto& item = items_[k];
    if (weight + item.weight <= capacity_) {
      current_.push_back(item.atom);
      descend(k + 1, weight + item.weight, value + item.value);
      current_.pop_back();
    }
    descend(k + 1, weight, value);
  }

  std::vector<KnapsackItem> items_;
  double capacity_;
  double best_value_ = 0.0;
  std::vector<std::size_t> best_atoms_;
  std::vector<std::size_t> current_;
};

}  // namespace

UiModulusResult ui_modulus_search(std::span<const ScalarFunction> family, double delta) {
  require(delta >= 0.0 && delta <= 1.0, ErrorCode::InvalidArgument, "delta must lie in [0, 1]");
  UiModulusResult result;
  if (family.empty()) return result;
  const auto& space = family.front().space();
  require(space.size() <= kMaxSubsetSearchAtoms, ErrorCode::TooManyAtoms,
          "subset search is limited to " + std::to_string(kMaxSubsetSearchAtoms) + " atoms");
  for (std::size_t f = 0; f < family.size(); ++f) {
    require(family[f].space() == space, ErrorCode::SpaceMismatch,
            "family members live on different spaces");
    std::vector<KnapsackItem> items;
    for (std::size_t i = 0; i < space.size(); ++i) {
      const double value = space.mass(i) * std::abs(family[f][i]);
      if (value > 0.0) items.push_back({i, space.mass(i), value});
    }
    KnapsackSearch search(std::move(items), delta + kMassTolerance);
    search.run();
    if (search.best_value() > result.value) {
      result.value = search.best_value();
      result.function_index = f;
      result.atoms = search.best_atoms();
    }
  }
  return result;
}

double ui_modulus(std::span<const ScalarFunction> family, double delta) {
  return ui_modulus_search(family, delta).value;
}

double power_map_distance(const ScalarFunction& g, const ScalarFunction& h, double p) {
  require(g.space() == h.space(), ErrorCode::SpaceMismatch, "functions live on different spaces");
  require(p >= 1.0 && std::isfinite(p), ErrorCode::BadExponent, "need 1 <= p < infinity");
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    sum += g.space().mass(i) * std::abs(std::pow(std::abs(g[i]), p) - std::pow(std::abs(h[i]), p));
  }
  return sum;
}

double power_map_bound(const ScalarFunction& g, const ScalarFunction& h, double p, double bound_c) {
  require(p >= 1.0 && std::isfinite(p), ErrorCode::BadExponent, "need 1 <= p < infinity");
  const double exponent = p == 1.0 ? 0.0 : p / conjugate_exponent(p);  // p/p' = p - 1
  return 2.0 * p * std::pow(bound_c, exponent) * lp_norm(g - h, p);
}

}  // namespace vmlab
