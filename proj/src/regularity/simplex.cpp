#include "lillab/regularity/simplex.hpp"

#include <vector>

#include "lillab/error.hpp"

namespace lillab::regularity {

LpResult solve_lp(const Mat& a, const Vec& b, const Vec& c) {
  const Eigen::Index m = a.rows(), n = a.cols();
  require(b.size() == m && c.size() == n, "solve_lp: dimension mismatch");
  require((b.array() >= 0.0).all(), "solve_lp: origin must be feasible");
  // Tableau [A I b; -c 0 0].
  Mat t = Mat::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = a;
  t.block(0, n, m, m) = Mat::Identity(m, m);
  t.col(n + m).head(m) = b;
  t.row(m).head(n) = -c.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[std::size_t(i)] = n + i;
  const double eps = 1e-12;
  LpResult out;
  for (int iter = 0; iter < 10000; ++iter) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j)
      if (t(m, j) < -eps) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = kInfinity;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) > eps) {
        const double r = t(i, n + m) / t(i, enter);
        if (r < best - eps || (r < best + eps && leave >= 0 && basis[std::size_t(i)] < basis[std::size_t(leave)])) {
          best = r;
          leave = i;
        }
      }
    }
    if (leave < 0) {
      out.status = LpResult::Status::unbounded;
      out.value = kInfinity;
      return out;
    }
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i)
      if (i != leave && t(i, enter) != 0.0) t.row(i) -= t(i, enter) * t.row(leave);
    basis[std::size_t(leave)] = enter;
  }
  out.x = Vec::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[std::size_t(i)] < n) out.x[basis[std::size_t(i)]] = t(i, n + m);
  out.value = c.dot(out.x);
  return out;
}

}  // namespace lillab::regularity
