#include "vmlab/lp.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "vmlab/error.hpp"

namespace vmlab::lp {

Solution maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  std::size_t max_pivots) {
  using Index = Eigen::Index;
  const Index rows = a.rows();
  const Index cols = a.cols();
  require(b.size() == rows && c.size() == cols, ErrorCode::DimensionMismatch,
          "linear program shape mismatch");
  require((b.array() >= 0.0).all(), ErrorCode::InvalidArgument,
          "right-hand side must be nonnegative");

  // Rows 0..rows-1 hold the basic variables, row `rows` is the objective.
  // Column `cols` is the right-hand side.
  Eigen::MatrixXd t(rows + 1, cols + 1);
  t.topLeftCorner(rows, cols) = a;
  t.topRightCorner(rows, 1) = b;
  t.bottomLeftCorner(1, cols) = -c.transpose();
  t(rows, cols) = 0.0;

  // Variable ids: 0..cols-1 are decision variables, cols+i is slack i.
  std::vector<Index> nonbasic(static_cast<std::size_t>(cols));
  std::vector<Index> basic(static_cast<std::size_t>(rows));
  for (Index k = 0; k < cols; ++k) nonbasic[static_cast<std::size_t>(k)] = k;
  for (Index i = 0; i < rows; ++i) basic[static_cast<std::size_t>(i)] = cols + i;

  // Reduced costs are compared against the cost scale, pivot candidates
  // against the magnitude of their own column.
  const double cost_eps = 1e-12 * std::max(1.0, c.size() > 0 ? c.cwiseAbs().maxCoeff() : 0.0);

  Solution out;
  std::size_t degenerate_run = 0;
  bool bland = false;
  while (true) {
    Index enter = -1;
    for (Index k = 0; k < cols; ++k) {
      if (t(rows, k) >= -cost_eps) continue;
      if (enter < 0) {
        enter = k;
      } else if (bland) {
        if (nonbasic[static_cast<std::size_t>(k)] < nonbasic[static_cast<std::size_t>(enter)]) enter = k;
      } else if (t(rows, k) < t(rows, enter)) {
        enter = k;
      }
    }
    if (enter < 0) {
      out.status = Status::Optimal;
      break;
    }
    Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    const double pivot_eps = 1e-12 * t.col(enter).head(rows).cwiseAbs().maxCoeff();
    for (Index i = 0; i < rows; ++i) {
      const double coeff = t(i, enter);
      if (coeff <= pivot_eps) continue;
      const double ratio = t(i, cols) / coeff;
      if (ratio < best_ratio - 1e-15 ||
          (ratio <= best_ratio + 1e-15 && leave >= 0 &&
           basic[static_cast<std::size_t>(i)] < basic[static_cast<std::size_t>(leave)])) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave < 0) {
      out.status = Status::Unbounded;
      break;
    }
    if (out.pivots >= max_pivots) {
      out.status = Status::IterationLimit;
      break;
    }
    degenerate_run = best_ratio <= 1e-15 ? degenerate_run + 1 : 0;
    if (degenerate_run > 50) bland = true;

    // Exchange step on pivot (leave, enter).
    const double pivot = t(leave, enter);
    const Eigen::RowVectorXd pivot_row = t.row(leave) / pivot;
    const Eigen::VectorXd pivot_col = t.col(enter);
    t -= pivot_col * pivot_row;
    t.row(leave) = pivot_row;
    t.col(enter) = -pivot_col / pivot;
    t(leave, enter) = 1.0 / pivot;
    // Clamp round-off on the right-hand side.
    for (Index i = 0; i < rows; ++i) {
      if (t(i, cols) < 0.0 && t(i, cols) > -1e-13) t(i, cols) = 0.0;
    }
    std::swap(basic[static_cast<std::size_t>(leave)], nonbasic[static_cast<std::size_t>(enter)]);
    ++out.pivots;
  }

  out.primal = Eigen::VectorXd::Zero(cols);
  out.dual = Eigen::VectorXd::Zero(rows);
  for (Index i = 0; i < rows; ++i) {
    const Index id = basic[static_cast<std::size_t>(i)];
    if (id < cols) out.primal(id) = t(i, cols);
  }
  for (Index k = 0; k < cols; ++k) {
    const Index id = nonbasic[static_cast<std::size_t>(k)];
    if (id >= cols) out.dual(id - cols) = std::max(0.0, t(rows, k));
  }
  out.objective = t(rows, cols);
  return out;
}

}  // namespace vmlab::lp
