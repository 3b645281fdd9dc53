#include "lillab/sde/linear_transition.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "lillab/error.hpp"

namespace lillab::sde {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

bool is_nilpotent(const Mat& a) {
  Mat p = Mat::Identity(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) p = p * a;
  return p.cwiseAbs().maxCoeff() == 0.0;
}

Mat psd_factor(const Mat& q) {
  const Eigen::Index d = q.rows();
  Vec s(d);
  for (Eigen::Index i = 0; i < d; ++i) s[i] = q(i, i) > 0.0 ? std::sqrt(q(i, i)) : 0.0;
  Mat c = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (s[i] > 0.0 && s[j] > 0.0) c(i, j) = q(i, j) / (s[i] * s[j]);
  Eigen::LDLT<Mat> ldlt(c);
  Mat l = ldlt.matrixL();
  Vec dvec = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
  Mat pl = ldlt.transpositionsP().transpose() * (l * dvec.asDiagonal());
  return s.asDiagonal() * pl;
}

LinearTransition linear_transition(const LinearStructure& lin, double h) {
  const Mat& a = lin.drift_matrix;
  const Mat& g = lin.diffusion;
  require(h >= 0.0 && std::isfinite(h), "linear_transition: step must be nonnegative");
  const Eigen::Index d = a.rows();
  const Eigen::Index k = g.cols();
  LinearTransition t;
  t.h = h;
  if (is_nilpotent(a)) {
    std::vector<Mat> powers{Mat::Identity(d, d)};
    for (Eigen::Index n = 1; n < d; ++n) powers.push_back(powers.back() * a);
    std::vector<Mat> ag;
    for (const auto& p : powers) ag.push_back(p * g);
    t.mean_map = Mat::Zero(d, d);
    t.noise_gain = Mat::Zero(d, k);
    t.covariance = Mat::Zero(d, d);
    t.residual_covariance = Mat::Zero(d, d);
    for (int n = 0; n < int(d); ++n) {
      t.mean_map += powers[n] * (std::pow(h, n) / factorial(n));
      t.noise_gain += ag[n] * (std::pow(h, n) / factorial(n + 1));
    }
    for (int m = 0; m < int(d); ++m) {
      for (int n = 0; n < int(d); ++n) {
        const Mat term = ag[m] * ag[n].transpose();
        const double hp = std::pow(h, m + n + 1);
        const double full = 1.0 / (factorial(m) * factorial(n) * (m + n + 1));
        const double split = full - 1.0 / (factorial(m + 1) * factorial(n + 1));
        t.covariance += term * (hp * full);
        t.residual_covariance += term * (hp * split);
      }
    }
  } else {
    // Van Loan: exp([[-A, GG^T], [0, A^T]] h) = [[., F12], [0, F22]],
    // e^{Ah} = F22^T, Q = e^{Ah} F12.
    Mat m = Mat::Zero(2 * d, 2 * d);
    m.topLeftCorner(d, d) = -a;
    m.topRightCorner(d, d) = g * g.transpose();
    m.bottomRightCorner(d, d) = a.transpose();
    const Mat e = (m * h).exp();
    t.mean_map = e.bottomRightCorner(d, d).transpose();
    t.covariance = t.mean_map * e.topRightCorner(d, d);
    t.covariance = 0.5 * (t.covariance + t.covariance.transpose());
    // int_0^h e^{As} ds from exp([[A, I], [0, 0]] h).
    Mat m2 = Mat::Zero(2 * d, 2 * d);
    m2.topLeftCorner(d, d) = a;
    m2.topRightCorner(d, d) = Mat::Identity(d, d);
    const Mat e2 = (m2 * h).exp();
    const Mat cross = e2.topRightCorner(d, d) * g;
    t.noise_gain = h > 0.0 ? Mat(cross / h) : Mat(g);
    t.residual_covariance = t.covariance - cross * cross.transpose() / (h > 0.0 ? h : 1.0);
    t.residual_covariance = 0.5 * (t.residual_covariance + t.residual_covariance.transpose());
  }
  t.covariance_factor = psd_factor(t.covariance);
  t.residual_factor = psd_factor(t.residual_covariance);
  return t;
}

}  // namespace lillab::sde
