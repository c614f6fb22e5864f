#pragma once

#include <Eigen/Dense>
#include <cstddef>

namespace vmlab::lp {

enum class Status { Optimal, Unbounded, IterationLimit };

struct Solution {
  Status status = Status::Optimal;
  Eigen::VectorXd primal;  // x
  Eigen::VectorXd dual;    // one multiplier per inequality row, >= 0
  double objective = 0.0;
  std::size_t pivots = 0;
};

/// maximize c.x subject to A x <= b, x >= 0, for b >= 0 (the origin is
/// feasible, so no phase one is needed). Dense simplex tableau in exchange
/// form; Dantzig pricing with a switch to Bland's rule after a run of
/// degenerate pivots.
Solution maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  std::size_t max_pivots = 100000);

}  // namespace vmlab::lp
