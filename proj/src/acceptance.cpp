#include "vmlab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <limits>
#include <optional>
#include <numbers>
#include <sstream>

#include "vmlab/counterexamples.hpp"
#include "vmlab/dunford.hpp"
#include "vmlab/error.hpp"
#include "vmlab/measure.hpp"
#include "vmlab/random.hpp"
#include "vmlab/summing.hpp"
#include "vmlab/thickness.hpp"

namespace vmlab::acceptance {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tolerances and limits pinned per criterion.
constexpr double kPettisSvTol = 1e-9;
constexpr double kPettisModulusTol = 1e-9;
constexpr double kPettisDunfordTol = 1e-6;
constexpr double kPettisBochnerTol = 1e-9;
constexpr double kPettisSeconds = 5.0;
constexpr double kVariationTol = 1e-9;
constexpr double kVariationSeconds = 60.0;
constexpr double kSemivariationTol = 1e-6;
constexpr double kPiLowerTol = 1e-9;
constexpr double kPietschFactor = 1.05;
constexpr double kPietschSeconds = 60.0;
constexpr double kCompositionSlack = -1e-9;
constexpr double kDefectTol = 1e-12;
constexpr double kDefectFloor = 0.9;
constexpr double kAveragingTol = 1e-12;
constexpr double kThicknessTol = 1e-9;
constexpr double kKotheNormTol = 1e-6;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (passed) detail << "FAILED: ";
      else detail << "; ";
      detail << what;
      passed = false;
    }
  }
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double close_rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

DiscreteProbabilitySpace random_space(Rng& rng, std::size_t n) {
  std::vector<double> masses(n);
  double total = 0.0;
  for (double& m : masses) {
    m = rng.uniform(0.05, 1.0);
    total += m;
  }
  for (double& m : masses) m /= total;
  return make_space(std::move(masses));
}

double pick(Rng& rng, std::initializer_list<double> options) {
  return *(options.begin() + static_cast<std::ptrdiff_t>(rng.index(options.size())));
}

SimpleFunction random_function(Rng& rng, const DiscreteProbabilitySpace& space, const SpaceDescriptor& codomain) {
  std::vector<Vector> values;
  for (std::size_t i = 0; i < space.size(); ++i) values.push_back(Vector{rng.normal_vector(codomain.dim())});
  return SimpleFunction(space, codomain, std::move(values));
}

struct VariationInstance {
  SimpleFunction f;
  double p;
};

// Shared corpus for the variation criteria: n <= 10, d <= 5, q in {1, 2, inf},
// p in {1, 1.5, 2, 3}.
std::vector<VariationInstance> variation_corpus() {
  Rng rng(20240601);
  std::vector<VariationInstance> out;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + rng.index(10);
    const std::size_t d = 1 + rng.index(5);
    const double q = pick(rng, {1.0, 2.0, kInf});
    const double p = pick(rng, {1.0, 1.5, 2.0, 3.0});
    auto space = random_space(rng, n);
    out.push_back({random_function(rng, space, SpaceDescriptor::lq(d, q)), p});
  }
  return out;
}

Outcome pettis_signature() {
  Outcome o;
  const SimpleFunction f = pettis_example({6, 2.0});
  const auto sv = sv_profile(f, 2.0);
  double sv_err = 0.0;
  for (double s : sv) sv_err = std::max(sv_err, std::abs(s - 1.0));
  o.check(sv.size() == 6, "sv_profile has " + std::to_string(sv.size()) + " values");
  o.check(sv_err <= kPettisSvTol, "sv error " + fmt(sv_err));

  std::vector<double> deltas;
  for (int n = 1; n <= 6; ++n) deltas.push_back(std::ldexp(1.0, -2 * n));
  const auto report = zfp_ui_modulus(f, 2.0, deltas);
  double eta_err = 0.0;
  for (const auto& e : report.entries) eta_err = std::max(eta_err, std::abs(e.eta - 1.0));
  o.check(eta_err <= kPettisModulusTol, "modulus error " + fmt(eta_err));

  const double dn = dunford_norm(f, 2.0).value;
  o.check(std::abs(dn - 1.0) <= kPettisDunfordTol, "dunford norm " + fmt(dn));
  const double bn = bochner_norm(f, 2.0);
  o.check(std::abs(bn - std::sqrt(6.0)) <= kPettisBochnerTol, "bochner norm " + fmt(bn));
  o.detail << "sv err " << fmt(sv_err) << ", eta err " << fmt(eta_err) << ", |D-1| " << fmt(std::abs(dn - 1.0))
           << ", |B-sqrt6| " << fmt(std::abs(bn - std::sqrt(6.0)));
  return o;
}

Outcome variation_identity() {
  Outcome o;
  double identity_err = 0.0;
  double brute_err = 0.0;
  int brute_count = 0;
  for (const auto& inst : variation_corpus()) {
    const VectorMeasure nu = indefinite_integral(inst.f);
    const double finest = p_variation(nu, inst.p, VariationMethod::Finest);
    const double bochner = bochner_norm(inst.f, inst.p);
    identity_err = std::max(identity_err, std::abs(finest - bochner) / std::max(bochner, 1e-300));
    if (nu.space().size() <= kMaxBruteAtoms) {
      const double brute = p_variation(nu, inst.p, VariationMethod::Brute);
      brute_err = std::max(brute_err, close_rel(brute, finest));
      ++brute_count;
    }
  }
  o.check(identity_err <= kVariationTol, "finest vs bochner relative error " + fmt(identity_err));
  o.check(brute_err <= kVariationTol, "brute vs finest error " + fmt(brute_err));
  o.detail << "200 instances, identity rel err " << fmt(identity_err) << ", brute err " << fmt(brute_err) << " over "
           << brute_count << " brute scans";
  return o;
}

Outcome variation_dual_formula() {
  Outcome o;
  double err = 0.0;
  int count = 0;
  for (const auto& inst : variation_corpus()) {
    const VectorMeasure nu = indefinite_integral(inst.f);
    if (nu.space().size() > kMaxBruteAtoms) continue;
    const double finest = p_variation(nu, inst.p, VariationMethod::Finest);
    const double brute = p_variation(nu, inst.p, VariationMethod::Brute);
    const double holder = p_variation(nu, inst.p, VariationMethod::HolderDual);
    err = std::max({err, close_rel(holder, finest), close_rel(holder, brute)});
    ++count;
  }
  o.check(err <= kVariationTol, "holder_dual error " + fmt(err));
  o.detail << count << " instances with n <= " << kMaxBruteAtoms << ", max error " << fmt(err);
  return o;
}

Outcome semivariation_corollary() {
  Outcome o;
  Rng rng(20240602);
  double err = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + rng.index(8);
    const std::size_t d = 1 + rng.index(4);
    const double q = pick(rng, {1.0, 2.0, kInf});
    const double p = q == 2.0 ? 2.0 : pick(rng, {1.0, 1.5, 2.0, 3.0});
    const auto f = random_function(rng, random_space(rng, n), SpaceDescriptor::lq(d, q));
    const auto semi = p_semivariation(indefinite_integral(f), p);
    const auto dn = dunford_norm(f, p);
    o.check(semi.certification == Certification::Exact && dn.certification == Certification::Exact,
            "instance " + std::to_string(k) + " left the certified regime");
    err = std::max(err, close_rel(semi.value, dn.value));
  }
  o.check(err <= kSemivariationTol, "semivariation vs dunford error " + fmt(err));
  o.detail << "100 instances, max error " << fmt(err);
  return o;
}

Outcome pi2_identity() {
  Outcome o;
  for (std::size_t d = 1; d <= 6; ++d) {
    const auto u = LinearOperator::identity(SpaceDescriptor::lq(d, 2.0));
    const auto lower = pi_p_lower(u, 2.0);
    o.check(lower.value >= std::sqrt(static_cast<double>(d)) - kPiLowerTol,
            "pi_2 lower for d=" + std::to_string(d) + " is " + fmt(lower.value));
  }
  for (std::size_t d : {2, 3}) {
    const auto space = SpaceDescriptor::lq(d, 2.0);
    const auto u = LinearOperator::identity(space);
    const auto sphere = dual_sphere(space, 1000);
    auto tests = primal_sphere(space, 64);
    for (std::size_t j = 0; j < d; ++j) {
      Vector e{std::vector<double>(d, 0.0)};
      e.coords[j] = 1.0;
      tests.push_back(e);
    }
    const auto cert = pietsch_lp_upper(u, 2.0, sphere, tests);
    const double root = std::sqrt(static_cast<double>(d));
    o.check(cert.constant <= kPietschFactor * root, "Pietsch constant for d=" + std::to_string(d) + " is " + fmt(cert.constant));
    o.check(certificate_violation(u, cert) <= 1e-9, "certificate violated for d=" + std::to_string(d));
    o.detail << "d=" << d << ": C/sqrt(d)=" << fmt(cert.constant / root) << " (" << sphere.size() << " sphere pts, "
             << tests.size() << " tests); ";
  }
  return o;
}

Outcome composition_bound() {
  Outcome o;
  Rng rng(20240603);
  double worst_function = kInf;
  double worst_measure = kInf;
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 2 + rng.index(2);
    const auto domain = SpaceDescriptor::lq(d, pick(rng, {1.0, 2.0, kInf}));
    const auto codomain = SpaceDescriptor::lq(1 + rng.index(3), pick(rng, {1.0, 2.0, kInf}));
    const double p = pick(rng, {1.0, 1.5, 2.0, 3.0});
    Eigen::MatrixXd m(static_cast<Eigen::Index>(codomain.dim()), static_cast<Eigen::Index>(d));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.normal();
    }
    const LinearOperator u(domain, codomain, m);
    const auto space = random_space(rng, 2 + rng.index(5));
    const auto f = random_function(rng, space, domain);
    const auto nu = indefinite_integral(random_function(rng, space, domain));

    auto tests = primal_sphere(domain, 32);
    for (auto& v : scaled_family(f, p)) tests.push_back(std::move(v));
    for (auto& v : scaled_family(nu, p)) tests.push_back(std::move(v));
    const auto cert = pietsch_lp_upper(u, p, dual_sphere(domain, d == 2 ? 200 : 300), tests);
    o.check(certificate_violation(u, cert) <= 1e-9, "certificate " + std::to_string(k) + " unsound");

    const auto fr = verify_composition_bound(u, f, p, cert);
    const auto mr = verify_measure_composition_bound(u, nu, p, cert);
    worst_function = std::min(worst_function, fr.slack);
    worst_measure = std::min(worst_measure, mr.slack);
  }
  o.check(worst_function >= kCompositionSlack, "function bound slack " + fmt(worst_function));
  o.check(worst_measure >= kCompositionSlack, "measure bound slack " + fmt(worst_measure));
  o.detail << "100 instances, min slack function " << fmt(worst_function) << ", measure " << fmt(worst_measure);
  return o;
}

Outcome averaging_approximation() {
  Outcome o;
  Rng rng(20240604);
  double worst = 0.0;
  std::size_t checked = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 2 + rng.index(6);
    const auto space = random_space(rng, n);
    std::vector<std::size_t> labels(n);
    const std::size_t blocks = 1 + rng.index(n);
    for (auto& l : labels) l = rng.index(blocks);
    const Partition hidden = Partition::from_labels(labels);
    const auto codomain = SpaceDescriptor::lq(1 + rng.index(3), pick(rng, {1.0, 2.0, kInf}));
    const double p = pick(rng, {1.0, 1.5, 2.0, 3.0});
    std::vector<Vector> block_values;
    for (std::size_t b = 0; b < hidden.block_count(); ++b) block_values.push_back(Vector{rng.normal_vector(codomain.dim())});
    std::vector<Vector> values(n);
    const auto hidden_labels = hidden.labels();
    for (std::size_t i = 0; i < n; ++i) values[i] = block_values[hidden_labels[i]];
    const SimpleFunction f(space, codomain, std::move(values));
    for_each_partition(space, [&](const Partition& partition) {
      if (!is_refinement(partition, hidden)) return;
      worst = std::max(worst, approximation_defect(f, partition, p).value);
      ++checked;
    });
  }
  o.check(worst <= kDefectTol, "defect on refinements " + fmt(worst));
  const auto pettis = pettis_example({3, 2.0});
  const double coarse = approximation_defect(pettis, Partition::coarsest(pettis.space().size()), 2.0).value;
  o.check(coarse >= kDefectFloor, "coarsest defect " + fmt(coarse));
  o.detail << checked << " refinements, max defect " << fmt(worst) << "; coarsest defect " << fmt(coarse);
  return o;
}

Outcome averaging_contracts() {
  Outcome o;
  Rng rng(20240605);
  double lin = 0.0, idem = 0.0, contraction = -kInf, commute = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + rng.index(9);
    const auto space = random_space(rng, n);
    std::vector<std::size_t> labels(n);
    const std::size_t blocks = 1 + rng.index(n);
    for (auto& l : labels) l = rng.index(blocks);
    const Partition partition = Partition::from_labels(labels);
    const auto codomain = SpaceDescriptor::lq(1 + rng.index(4), pick(rng, {1.0, 2.0, kInf}));
    const double p = pick(rng, {1.0, 1.5, 2.0, 3.0});
    const auto f = random_function(rng, space, codomain);
    const DualVector xs{rng.normal_vector(codomain.dim())};
    const ScalarFunction g = pair(f, xs);
    const ScalarFunction h(space, rng.normal_vector(n));
    const double a = rng.normal();
    const double b = rng.normal();

    const auto lhs = conditional_average(a * g + b * h, partition);
    const auto rhs = a * conditional_average(g, partition) + b * conditional_average(h, partition);
    const auto once = averaging(f, partition);
    const auto twice = averaging(once, partition);
    const auto paired = pair(once, xs);
    const auto averaged = conditional_average(g, partition);
    for (std::size_t i = 0; i < n; ++i) {
      lin = std::max(lin, std::abs(lhs[i] - rhs[i]));
      commute = std::max(commute, std::abs(paired[i] - averaged[i]));
      for (std::size_t j = 0; j < codomain.dim(); ++j) {
        idem = std::max(idem, std::abs(twice.value(i)[j] - once.value(i)[j]));
      }
    }
    contraction = std::max(contraction, lp_norm(averaged, p) - lp_norm(g, p));
  }
  o.check(lin <= kAveragingTol, "linearity error " + fmt(lin));
  o.check(idem <= kAveragingTol, "idempotence error " + fmt(idem));
  o.check(contraction <= kAveragingTol, "contraction excess " + fmt(contraction));
  o.check(commute <= kAveragingTol, "commutation error " + fmt(commute));
  o.detail << "100 instances: linearity " << fmt(lin) << ", idempotence " << fmt(idem) << ", contraction excess "
           << fmt(contraction) << ", commutation " << fmt(commute);
  return o;
}

Outcome power_map_continuity() {
  Outcome o;
  Rng rng(20240606);
  double worst_ratio = 0.0;
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 1 + rng.index(10);
    const auto space = random_space(rng, n);
    const double p = rng.uniform(1.0, 4.0);
    const ScalarFunction g(space, rng.normal_vector(n));
    auto hv = g.values();
    std::vector<double> h_values(hv.begin(), hv.end());
    const double spread = std::pow(10.0, rng.uniform(-6.0, 0.5));
    for (double& v : h_values) v += spread * rng.normal();
    const ScalarFunction h(space, std::move(h_values));
    const double c = std::max(lp_norm(g, p), lp_norm(h, p));
    const double distance = power_map_distance(g, h, p);
    const double bound = power_map_bound(g, h, p, c);
    o.check(distance <= bound * (1.0 + 1e-12), "pair " + std::to_string(k) + " violates the bound");
    if (bound > 0.0) worst_ratio = std::max(worst_ratio, distance / bound);
  }
  o.detail << "500 pairs, max distance/bound " << fmt(worst_ratio);
  return o;
}

Outcome thickness_bound() {
  Outcome o;
  const auto space = SpaceDescriptor::lq(2, 2.0);
  const ThicknessInstance instance{space, {DualVector{{1, 0}}, DualVector{{-1, 0}}, DualVector{{0, 1}}, DualVector{{0, -1}}},
                                   std::nullopt};
  const auto radius = thickness_radius(instance);
  const double target = 1.0 / std::sqrt(2.0);
  o.check(radius.exact, "d = 2 sweep not exact");
  o.check(std::abs(radius.lower - target) <= kThicknessTol && std::abs(radius.upper - target) <= kThicknessTol,
          "radius " + fmt(radius.lower));
  Rng rng(20240607);
  double worst = kInf;
  for (int k = 0; k < 100; ++k) {
    const double p = pick(rng, {1.0, 1.5, 2.0, 3.0});
    const auto f = random_function(rng, random_space(rng, 1 + rng.index(8)), space);
    double level = 0.0;
    for (const auto& g : instance.gamma) level = std::max(level, lp_norm(pair(f, g), p));
    const double dn = dunford_norm(f, p).value;
    const double slack = std::sqrt(2.0) * level + 1e-9 - dn;
    worst = std::min(worst, slack);
    const auto report = thickness_norm_bound(f, instance, p);
    o.check(report.holds, "thickness_norm_bound failed on instance " + std::to_string(k));
  }
  o.check(worst >= 0.0, "bound violated, slack " + fmt(worst));
  o.detail << "radius " << radius.lower << ", 100 functions, min slack " << fmt(worst);
  return o;
}

Outcome kothe_example_check() {
  Outcome o;
  Rng rng(20240608);
  double norm_err = 0.0;
  double dunford_err = 0.0;
  bool disjoint = true;
  for (double p : {1.5, 2.0, 3.0}) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto space = random_space(rng, 4);
      const KotheExampleConfig config{p, std::vector<double>(space.masses().begin(), space.masses().end())};
      const SimpleFunction phi = kothe_example(config);
      for (std::size_t i = 0; i < 4; ++i) {
        const ScalarFunction image = pair(phi, kothe_dual_witness(config, i));
        norm_err = std::max(norm_err, std::abs(lp_norm(image, p) - 1.0));
        for (std::size_t j = 0; j < 4; ++j) {
          if (j != i && image[j] != 0.0) disjoint = false;
        }
        if (image[i] == 0.0) disjoint = false;
      }
      dunford_err = std::max(dunford_err, std::abs(dunford_norm(phi, p).value - 1.0));
    }
  }
  o.check(norm_err <= 1e-12, "image norm error " + fmt(norm_err));
  o.check(disjoint, "images are not supported on distinct single atoms");
  o.check(dunford_err <= kKotheNormTol, "dunford norm error " + fmt(dunford_err));
  o.detail << "9 instances, image norm err " << fmt(norm_err) << ", |D-1| " << fmt(dunford_err);
  return o;
}

struct Criterion {
  const char* name;
  Outcome (*body)();
  double time_limit;
};

const Criterion& criterion(int id) {
  static const Criterion table[] = {
      {"pettis-signature", pettis_signature, kPettisSeconds},
      {"p-variation-identity", variation_identity, kVariationSeconds},
      {"p-variation-dual-formula", variation_dual_formula, kInf},
      {"semivariation-equals-dunford-norm", semivariation_corollary, kInf},
      {"pi2-euclidean-identity", pi2_identity, kPietschSeconds},
      {"composition-bound", composition_bound, kInf},
      {"averaging-approximation", averaging_approximation, kInf},
      {"averaging-operator", averaging_contracts, kInf},
      {"power-map-continuity", power_map_continuity, kInf},
      {"thickness-bound", thickness_bound, kInf},
      {"kothe-example", kothe_example_check, kInf},
  };
  require(id >= 1 && id <= 11, ErrorCode::InvalidArgument, "criterion id must be in 1..11");
  return table[id - 1];
}

}  // namespace

std::vector<int> all_criteria() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}; }

std::string criterion_name(int id) { return criterion(id).name; }

CriterionResult run_criterion(int id) {
  const Criterion& c = criterion(id);
  CriterionResult result;
  result.id = id;
  result.name = c.name;
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome o = c.body();
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (result.seconds >= c.time_limit) {
      o.check(false, "took " + fmt(result.seconds) + " s, limit " + fmt(c.time_limit) + " s");
    }
    result.passed = o.passed;
    result.detail = o.detail.str();
  } catch (const std::exception& e) {
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.passed = false;
    result.detail = std::string("exception: ") + e.what();
  }
  return result;
}

std::vector<CriterionResult> run(std::span<const int> ids) {
  std::vector<CriterionResult> out;
  for (int id : ids) out.push_back(run_criterion(id));
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[128];
  std::snprintf(head, sizeof head, "[%s] AC%02d %s (%.2f s): ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace vmlab::acceptance
