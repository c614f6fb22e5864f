#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace vmlab {

/// Element of a primal space X.
struct Vector {
  std::vector<double> coords;

  std::size_t dim() const noexcept { return coords.size(); }
  double operator[](std::size_t j) const { return coords[j]; }
  bool operator==(const Vector&) const = default;
};

/// Element of the dual space X*.
struct DualVector {
  std::vector<double> coords;

  std::size_t dim() const noexcept { return coords.size(); }
  double operator[](std::size_t j) const { return coords[j]; }
  bool operator==(const DualVector&) const = default;
};

/// How a reported number relates to the exact quantity.
enum class Certification {
  Exact,
  HeuristicLowerBound,
  LpEstimate,
};

std::string_view to_string(Certification c);
/// The weaker of two certifications.
Certification weakest(Certification a, Certification b);

/// R^d with the norm (sum_j w_j |x_j|^q)^(1/q) (max_j |x_j| for q = inf).
/// Unweighted means w = 1. The pairing with the dual is
/// <x, x*> = sum_j w_j x_j x*_j, under which the dual of weighted-L^q is
/// weighted-L^q' with the same weights.
class SpaceDescriptor {
public:
  SpaceDescriptor(std::size_t dim, double q, std::optional<std::vector<double>> weights = {});

  static SpaceDescriptor lq(std::size_t dim, double q) { return SpaceDescriptor(dim, q); }
  static SpaceDescriptor weighted_lq(std::vector<double> weights, double q);

  std::size_t dim() const noexcept { return dim_; }
  double q() const noexcept { return q_; }
  /// q' as stored, so that dual().dual() reproduces q bit for bit.
  double conjugate_q() const noexcept { return conjugate_q_; }
  bool weighted() const noexcept { return weights_.has_value(); }
  const std::optional<std::vector<double>>& weights() const noexcept { return weights_; }
  double weight(std::size_t j) const { return weights_ ? (*weights_)[j] : 1.0; }

  SpaceDescriptor dual() const;
  bool is_euclidean() const noexcept { return q_ == 2.0; }

  bool operator==(const SpaceDescriptor& other) const;

private:
  std::size_t dim_;
  double q_;
  double conjugate_q_;
  std::optional<std::vector<double>> weights_;
};

double norm(const SpaceDescriptor& space, const Vector& x);
/// Norm of x* in the dual of `space`.
double dual_norm(const SpaceDescriptor& space, const DualVector& xs);
double pairing(const SpaceDescriptor& space, const Vector& x, const DualVector& xs);

/// Point of the closed unit ball of `ball` maximizing sum_j g_j y_j, where g
/// is given in plain coordinates. Zero gradient gives the origin.
std::vector<double> ball_argmax(const SpaceDescriptor& ball, std::span<const double> g);

/// Vertices of B_{X*} when it is a polytope: 2d signed (scaled) coordinate
/// vectors for primal l_inf, 2^d sign vectors for primal l_1. nullopt for
/// smooth balls.
std::optional<std::vector<DualVector>> dual_ball_extreme_points(const SpaceDescriptor& space);

struct MomentMaxResult {
  double value = 0.0;
  DualVector witness;
  Certification certification = Certification::Exact;
};

struct MomentOptions {
  std::size_t starts = 32;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 2000;
  double relative_tolerance = 1e-15;
  bool parallel = false;  // run starts on worker threads
};

/// (sum_i mu_i |<v_i, x*>|^p)^(1/p).
double moment_objective(const SpaceDescriptor& space, std::span<const Vector> vectors,
                        std::span<const double> weights, double p, const DualVector& xs);

/// sup over the dual unit ball of moment_objective.
///
/// Exact when the dual ball is a polytope (vertex enumeration; the objective
/// is convex), when d = 1, when the family is collinear, or when the space
/// is (weighted) l_2 with p = 2 (top singular value). Otherwise a multi-start
/// ascent that repeatedly moves to the ball point maximizing the
/// linearization; the result is flagged HeuristicLowerBound and its witness
/// attains the reported value.
MomentMaxResult maximize_p_moment(const SpaceDescriptor& space, std::span<const Vector> vectors,
                                  std::span<const double> weights, double p,
                                  const MomentOptions& options = {});

/// Deterministic point sets on the Euclidean unit sphere of R^dim:
/// d = 1 gives {+1, -1}; d = 2 `count` equally spaced angles; d = 3 a
/// Fibonacci lattice of `count` points; d = 4, 5 a product grid of
/// hyperspherical angles with k = ceil(count^(1/(d-1))) steps per angle
/// (k^(d-1) points); larger d gives `count` seeded Gaussian directions.
std::vector<std::vector<double>> euclidean_sphere_points(std::size_t dim, std::size_t count,
                                                         std::uint64_t seed = 0);
/// Sphere points rescaled onto the unit sphere of X* (resp. X).
std::vector<DualVector> dual_sphere(const SpaceDescriptor& space, std::size_t count,
                                    std::uint64_t seed = 0);
std::vector<Vector> primal_sphere(const SpaceDescriptor& space, std::size_t count,
                                  std::uint64_t seed = 0);

}  // namespace vmlab
