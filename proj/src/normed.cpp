#include "vmlab/normed.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vmlab/error.hpp"
#include "vmlab/parallel.hpp"
#include "vmlab/random.hpp"
#include "vmlab/space.hpp"

namespace vmlab {

std::string_view to_string(Certification c) {
  switch (c) {
    case Certification::Exact: return "exact";
    case Certification::HeuristicLowerBound: return "heuristic-lower-bound";
    case Certification::LpEstimate: return "lp-estimate";
  }
  return "unknown";
}

Certification weakest(Certification a, Certification b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

namespace {


double weighted_norm(std::span<const double> x, double q, const SpaceDescriptor& space) {
  if (std::isinf(q)) {
    double best = 0.0;
    for (double v : x) best = std::max(best, std::abs(v));
    return best;
  }
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    sum += space.weight(j) * std::pow(std::abs(x[j]) / scale, q);
  }
  return scale * std::pow(sum, 1.0 / q);
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void check_dim(const SpaceDescriptor& space, std::size_t dim) {
  require(dim == space.dim(), ErrorCode::DimensionMismatch,
          "vector of dimension " + std::to_string(dim) + " in a space of dimension " +
              std::to_string(space.dim()));
}

}  // namespace

SpaceDescriptor::SpaceDescriptor(std::size_t dim, double q, std::optional<std::vector<double>> weights)
    : dim_(dim), q_(q), conjugate_q_(0.0), weights_(std::move(weights)) {
  require(dim_ > 0, ErrorCode::InvalidArgument, "dimension must be positive");
  require(q_ >= 1.0, ErrorCode::BadExponent, "norm exponent q must lie in [1, inf]");
  conjugate_q_ = conjugate_exponent(q_);
  if (weights_) {
    require(weights_->size() == dim_, ErrorCode::DimensionMismatch, "one weight per coordinate");
    for (double w : *weights_) {
      require(std::isfinite(w) && w > 0.0, ErrorCode::InvalidArgument,
              "weights must be finite and positive");
    }
  }
}

SpaceDescriptor SpaceDescriptor::weighted_lq(std::vector<double> weights, double q) {
  const std::size_t dim = weights.size();
  return SpaceDescriptor(dim, q, std::move(weights));
}

SpaceDescriptor SpaceDescriptor::dual() const {
  SpaceDescriptor out(dim_, conjugate_q_, weights_);
  out.conjugate_q_ = q_;
  return out;
}

bool SpaceDescriptor::operator==(const SpaceDescriptor& other) const {
  return dim_ == other.dim_ && q_ == other.q_ && weights_ == other.weights_;
}

double norm(const SpaceDescriptor& space, const Vector& x) {
  check_dim(space, x.dim());
  return weighted_norm(x.coords, space.q(), space);
}

double dual_norm(const SpaceDescriptor& space, const DualVector& xs) {
  check_dim(space, xs.dim());
  return weighted_norm(xs.coords, space.conjugate_q(), space);
}

double pairing(const SpaceDescriptor& space, const Vector& x, const DualVector& xs) {
  check_dim(space, x.dim());
  check_dim(space, xs.dim());
  double sum = 0.0;
  for (std::size_t j = 0; j < x.dim(); ++j) sum += space.weight(j) * x[j] * xs[j];
  return sum;
}

std::vector<double> ball_argmax(const SpaceDescriptor& ball, std::span<const double> g) {
  check_dim(ball, g.size());
  const std::size_t d = ball.dim();
  std::vector<double> u(d);
  double scale = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    u[j] = g[j] / ball.weight(j);
    scale = std::max(scale, std::abs(u[j]));
  }
  std::vector<double> y(d, 0.0);
  if (scale == 0.0) return y;
  for (double& v : u) v /= scale;
  const double r = ball.q();
  if (std::isinf(r)) {
    for (std::size_t j = 0; j < d; ++j) y[j] = sign(u[j]);
  } else if (r == 1.0) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < d; ++j) {
      if (std::abs(u[j]) > std::abs(u[best])) best = j;
    }
    y[best] = sign(u[best]) / ball.weight(best);
  } else {
    const double rc = r / (r - 1.0);
    const double unorm = weighted_norm(u, rc, ball);
    for (std::size_t j = 0; j < d; ++j) {
      y[j] = sign(u[j]) * std::pow(std::abs(u[j]) / unorm, rc - 1.0);
    }
  }
  return y;
}

std::optional<std::vector<DualVector>> dual_ball_extreme_points(const SpaceDescriptor& space) {
  const std::size_t d = space.dim();
  if (std::isinf(space.q())) {
    // Dual is weighted l_1: vertices +-e_j / w_j.
    std::vector<DualVector> out;
    for (std::size_t j = 0; j < d; ++j) {
      for (double s : {1.0, -1.0}) {
        DualVector v{std::vector<double>(d, 0.0)};
        v.coords[j] = s / space.weight(j);
        out.push_back(std::move(v));
      }
    }
    return out;
  }
  if (space.q() == 1.0) {
    require(d <= 16, ErrorCode::TooManyVertices, "2^d sign vectors limited to d <= 16");
    std::vector<DualVector> out;
    const std::size_t count = std::size_t{1} << d;
    out.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
      DualVector v{std::vector<double>(d)};
      for (std::size_t j = 0; j < d; ++j) v.coords[j] = (mask >> j) & 1U ? -1.0 : 1.0;
      out.push_back(std::move(v));
    }
    return out;
  }
  return std::nullopt;
}

double moment_objective(const SpaceDescriptor& space, std::span<const Vector> vectors,
                        std::span<const double> weights, double p, const DualVector& xs) {
  double sum = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    sum += weights[i] * std::pow(std::abs(pairing(space, vectors[i], xs)), p);
  }
  return std::pow(sum, 1.0 / p);
}

namespace {

struct MomentProblem {
  const SpaceDescriptor& space;
  SpaceDescriptor dual;
  std::span<const Vector> vectors;
  std::span<const double> weights;
  double p;

  double objective(const DualVector& xs) const {
    return moment_objective(space, vectors, weights, p, xs);
  }

  // Gradient of sum_i mu_i |<v_i, x*>|^p in the coordinates of x* (up to the
  // positive factor p, which does not move the linear maximizer).
  std::vector<double> gradient(const DualVector& xs) const {
    std::vector<double> g(space.dim(), 0.0);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      const double a = pairing(space, vectors[i], xs);
      const double coeff = p == 1.0 ? weights[i] * sign(a)
                                     : weights[i] * sign(a) * std::pow(std::abs(a), p - 1.0);
      if (coeff == 0.0) continue;
      for (std::size_t j = 0; j < g.size(); ++j) g[j] += coeff * space.weight(j) * vectors[i][j];
    }
    return g;
  }

  DualVector normalize(std::vector<double> coords) const {
    DualVector xs{std::move(coords)};
    const double n = dual_norm(space, xs);
    if (n > 0.0) {
      for (double& c : xs.coords) c /= n;
    }
    return xs;
  }

  // Norming functional of the primal vector v: a unit x* with <v, x*> = ||v||.
  DualVector norming(const Vector& v) const {
    std::vector<double> g(space.dim());
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = space.weight(j) * v[j];
    return DualVector{ball_argmax(dual, g)};
  }
};

MomentMaxResult best_of(const MomentProblem& problem, std::span<const DualVector> candidates,
                        Certification cert) {
  MomentMaxResult best{-1.0, DualVector{std::vector<double>(problem.space.dim(), 0.0)}, cert};
  for (const auto& c : candidates) {
    const double value = problem.objective(c);
    if (value > best.value) {
      best.value = value;
      best.witness = c;
    }
  }
  return best;
}

// Rank-one families v_i = c_i v: the sup equals (sum mu_i |c_i|^p)^(1/p) ||v||,
// attained at the norming functional of v.
std::optional<MomentMaxResult> collinear_case(const MomentProblem& problem) {
  std::size_t pivot = 0;
  double pivot_norm = 0.0;
  for (std::size_t i = 0; i < problem.vectors.size(); ++i) {
    double n = 0.0;
    for (double c : problem.vectors[i].coords) n += c * c;
    if (n > pivot_norm) {
      pivot_norm = n;
      pivot = i;
    }
  }
  if (pivot_norm == 0.0) {
    return MomentMaxResult{0.0, DualVector{std::vector<double>(problem.space.dim(), 0.0)},
                           Certification::Exact};
  }
  const Vector& v = problem.vectors[pivot];
  for (const auto& w : problem.vectors) {
    double dot = 0.0;
    for (std::size_t j = 0; j < v.dim(); ++j) dot += w[j] * v[j];
    const double c = dot / pivot_norm;
    double residual = 0.0;
    for (std::size_t j = 0; j < v.dim(); ++j) residual += std::pow(w[j] - c * v[j], 2);
    if (residual > 1e-26 * pivot_norm) return std::nullopt;
  }
  DualVector witness = problem.norming(v);
  return MomentMaxResult{problem.objective(witness), std::move(witness), Certification::Exact};
}

MomentMaxResult euclidean_case(const MomentProblem& problem) {
  const std::size_t n = problem.vectors.size();
  const std::size_t d = problem.space.dim();
  Eigen::MatrixXd m(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::sqrt(problem.weights[i] * problem.space.weight(j)) * problem.vectors[i][j];
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd z = svd.matrixV().col(0);
  std::vector<double> coords(d);
  for (std::size_t j = 0; j < d; ++j) {
    coords[j] = z(static_cast<Eigen::Index>(j)) / std::sqrt(problem.space.weight(j));
  }
  DualVector witness = problem.normalize(std::move(coords));
  return MomentMaxResult{problem.objective(witness), std::move(witness), Certification::Exact};
}

MomentMaxResult ascent_case(const MomentProblem& problem, const MomentOptions& options) {
  const std::size_t d = problem.space.dim();
  std::vector<DualVector> starts;
  starts.reserve(options.starts);
  for (std::size_t j = 0; j < d && starts.size() < options.starts; ++j) {
    std::vector<double> e(d, 0.0);
    e[j] = 1.0;
    starts.push_back(problem.normalize(std::move(e)));
  }
  for (std::size_t i = 0; i < problem.vectors.size() && starts.size() < options.starts / 2; ++i) {
    starts.push_back(problem.norming(problem.vectors[i]));
  }
  Rng rng(options.seed);
  while (starts.size() < options.starts) {
    starts.push_back(problem.normalize(rng.normal_vector(d)));
  }

  std::vector<MomentMaxResult> results(starts.size());
  auto climb = [&](std::size_t s) {
    DualVector current = starts[s];
    double value = problem.objective(current);
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
      DualVector next{ball_argmax(problem.dual, problem.gradient(current))};
      const double next_value = problem.objective(next);
      if (!(next_value > value * (1.0 + options.relative_tolerance))) {
        if (next_value > value) {
          value = next_value;
          current = std::move(next);
        }
        break;
      }
      value = next_value;
      current = std::move(next);
    }
    results[s] = MomentMaxResult{value, std::move(current), Certification::HeuristicLowerBound};
  };
  if (options.parallel) {
    parallel_for(starts.size(), climb);
  } else {
    for (std::size_t s = 0; s < starts.size(); ++s) climb(s);
  }
  std::size_t best = 0;
  for (std::size_t s = 1; s < results.size(); ++s) {
    if (results[s].value > results[best].value) best = s;
  }
  return results[best];
}

}  // namespace

MomentMaxResult maximize_p_moment(const SpaceDescriptor& space, std::span<const Vector> vectors,
                                  std::span<const double> weights, double p,
                                  const MomentOptions& options) {
  require(!vectors.empty(), ErrorCode::EmptyFamily, "maximize_p_moment needs a nonempty family");
  require(weights.size() == vectors.size(), ErrorCode::DimensionMismatch, "one weight per vector");
  require(p >= 1.0 && std::isfinite(p), ErrorCode::BadExponent, "need 1 <= p < infinity");
  for (const auto& v : vectors) check_dim(space, v.dim());
  for (double w : weights) {
    require(std::isfinite(w) && w > 0.0, ErrorCode::InvalidArgument, "weights must be positive");
  }

  const MomentProblem problem{space, space.dual(), vectors, weights, p};

  if (auto collinear = collinear_case(problem)) return *collinear;

  if (space.dim() == 1) {
    const double r = dual_norm(space, DualVector{{1.0}});
    const std::vector<DualVector> ends{DualVector{{1.0 / r}}, DualVector{{-1.0 / r}}};
    return best_of(problem, ends, Certification::Exact);
  }
  if (auto vertices = dual_ball_extreme_points(space)) {
    return best_of(problem, *vertices, Certification::Exact);
  }
  if (space.is_euclidean() && p == 2.0) return euclidean_case(problem);
  return ascent_case(problem, options);
}

// ---------------------------------------------------------------------------
// Sphere point sets

std::vector<std::vector<double>> euclidean_sphere_points(std::size_t dim, std::size_t count,
                                                         std::uint64_t seed) {
  require(dim > 0, ErrorCode::InvalidArgument, "dimension must be positive");
  require(count > 0, ErrorCode::InvalidArgument, "need at least one sphere point");
  std::vector<std::vector<double>> out;
  const double pi = std::numbers::pi;
  if (dim == 1) return {{1.0}, {-1.0}};
  if (dim == 2) {
    for (std::size_t k = 0; k < count; ++k) {
      const double t = 2.0 * pi * static_cast<double>(k) / static_cast<double>(count);
      out.push_back({std::cos(t), std::sin(t)});
    }
    return out;
  }
  if (dim == 3) {
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < count; ++k) {
      const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double t = golden * static_cast<double>(k);
      out.push_back({r * std::cos(t), r * std::sin(t), z});
    }
    return out;
  }
  if (dim <= 5) {
    const std::size_t angles = dim - 1;
    auto steps = static_cast<std::size_t>(
        std::ceil(std::pow(static_cast<double>(count), 1.0 / static_cast<double>(angles)) - 1e-9));
    steps = std::max<std::size_t>(steps, 2);
    std::vector<std::size_t> idx(angles, 0);
    while (true) {
      std::vector<double> point(dim, 1.0);
      double running = 1.0;
      for (std::size_t a = 0; a < angles; ++a) {
        const double frac = (static_cast<double>(idx[a]) + 0.5) / static_cast<double>(steps);
        const double angle = a + 1 == angles ? 2.0 * pi * frac : pi * frac;
        point[a] = running * std::cos(angle);
        running *= std::sin(angle);
      }
      point[dim - 1] = running;
      out.push_back(std::move(point));
      std::size_t a = 0;
      while (a < angles && ++idx[a] == steps) idx[a++] = 0;
      if (a == angles) break;
    }
    return out;
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    auto v = rng.normal_vector(dim);
    double n = 0.0;
    for (double c : v) n += c * c;
    n = std::sqrt(n);
    for (double& c : v) c /= n;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<DualVector> dual_sphere(const SpaceDescriptor& space, std::size_t count,
                                    std::uint64_t seed) {
  std::vector<DualVector> out;
  for (auto& p : euclidean_sphere_points(space.dim(), count, seed)) {
    DualVector xs{std::move(p)};
    const double n = dual_norm(space, xs);
    for (double& c : xs.coords) c /= n;
    out.push_back(std::move(xs));
  }
  return out;
}

std::vector<Vector> primal_sphere(const SpaceDescriptor& space, std::size_t count,
                                  std::uint64_t seed) {
  std::vector<Vector> out;
  for (auto& p : euclidean_sphere_points(space.dim(), count, seed)) {
    Vector x{std::move(p)};
    const double n = norm(space, x);
    for (double& c : x.coords) c /= n;
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace vmlab
