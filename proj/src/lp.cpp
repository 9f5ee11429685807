#include "tgk/lp.hpp"

#include <limits>
#include <vector>

namespace tgk {

namespace {

constexpr double kPivTol = 1e-9;

// Dense tableau simplex in standard form: min cost.y, M y = rhs, y >= 0.
// Bland's rule throughout, so cycling cannot occur; problem sizes are a
// handful of rows, so no revised/sparse machinery.
struct tableau {
  Mat m;                    // rows x (cols + 1); last column is the rhs
  Eigen::RowVectorXd z;     // reduced costs (cols + 1; last entry = -objective)
  std::vector<int> basis;   // basis[r] = column basic in row r

  int rows() const { return static_cast<int>(m.rows()); }
  int cols() const { return static_cast<int>(m.cols()) - 1; }

  void pivot(int r, int j) {
    m.row(r) /= m(r, j);
    for (int i = 0; i < rows(); ++i) {
      if (i != r && std::abs(m(i, j)) > 0.0) m.row(i) -= m(i, j) * m.row(r);
    }
    if (std::abs(z(j)) > 0.0) z -= z(j) * m.row(r);
    basis[r] = j;
  }

  // Rebuild reduced costs for the given cost vector from the current basis.
  void set_costs(const Eigen::RowVectorXd& cost) {
    z.setZero(cols() + 1);
    z.head(cols()) = cost;
    for (int r = 0; r < rows(); ++r) {
      if (std::abs(z(basis[r])) > 0.0) z -= z(basis[r]) * m.row(r);
    }
  }

  // Returns false when the problem is unbounded in the current objective.
  bool iterate(int restrict_cols) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < restrict_cols; ++j) {
        if (z(j) < -kPivTol) { enter = j; break; }  // Bland: first improving column
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows(); ++r) {
        if (m(r, enter) > kPivTol) {
          const double ratio = m(r, cols()) / m(r, enter);
          if (ratio < best - 1e-12 ||
              (ratio < best + 1e-12 && (leave < 0 || basis[r] < basis[leave]))) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

lp_result solve_lp_max(const Mat& A, const Vec& b, const Vec& c) {
  const int mrows = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());

  // Standard form: x = u - v, slack s, columns [u | v | s | artificials].
  const int nstruct = 2 * n + mrows;
  tableau t;
  t.m.setZero(mrows, nstruct + mrows + 1);
  t.basis.assign(mrows, -1);
  std::vector<int> art_cols;
  for (int i = 0; i < mrows; ++i) {
    const double flip = b(i) < 0.0 ? -1.0 : 1.0;
    t.m.block(i, 0, 1, n) = flip * A.row(i);
    t.m.block(i, n, 1, n) = -flip * A.row(i);
    t.m(i, 2 * n + i) = flip;
    t.m(i, t.m.cols() - 1) = flip * b(i);
    if (flip > 0.0) {
      t.basis[i] = 2 * n + i;  // slack starts basic
    } else {
      const int a = nstruct + static_cast<int>(art_cols.size());
      t.m(i, a) = 1.0;
      t.basis[i] = a;
      art_cols.push_back(a);
    }
  }

  // Phase 1: minimize the artificials.
  if (!art_cols.empty()) {
    Eigen::RowVectorXd cost1 = Eigen::RowVectorXd::Zero(nstruct + mrows);
    for (int a : art_cols) cost1(a) = 1.0;
    t.set_costs(cost1);
    t.iterate(nstruct + mrows);
    if (-t.z(t.cols()) > 1e-7) return {lp_result::status_t::infeasible, 0.0, Vec()};
    // Pivot any artificial that is still basic onto a structural column.
    for (int r = 0; r < t.rows(); ++r) {
      if (t.basis[r] >= nstruct) {
        for (int j = 0; j < nstruct; ++j) {
          if (std::abs(t.m(r, j)) > kPivTol) { t.pivot(r, j); break; }
        }
      }
    }
  }

  // Phase 2: maximize c.x  ==  minimize -(c, -c, 0).y over structural columns.
  Eigen::RowVectorXd cost2 = Eigen::RowVectorXd::Zero(nstruct + mrows);
  cost2.segment(0, n) = -c.transpose();
  cost2.segment(n, n) = c.transpose();
  for (int a : art_cols) cost2(a) = 1e30;  // keep leftover degenerate artificials pinned
  t.set_costs(cost2);
  if (!t.iterate(nstruct)) return {lp_result::status_t::unbounded, 0.0, Vec()};

  Vec y = Vec::Zero(nstruct + mrows);
  for (int r = 0; r < t.rows(); ++r) {
    if (t.basis[r] >= 0) y(t.basis[r]) = t.m(r, t.cols());
  }
  Vec x = y.segment(0, n) - y.segment(n, n);
  return {lp_result::status_t::optimal, c.dot(x), x};
}

}  // namespace tgk
