#pragma once

// Reference values computed without the library's solvers.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= double(i);
  return f;
}

// sup of J1 over the energy ball for the iterated Kolmogorov chain of length d.
inline double ik_max(int d) { return std::sqrt(2.0 / (2.0 * d - 1.0)) / factorial(d - 1); }

// Var x1(1) for IK(2) from the origin: int_0^1 (1-s)^2 ds.
inline constexpr double ik2_terminal_variance = 1.0 / 3.0;

// inf of -int f^2 over the energy ball: -2 / mu_min with -f'' = mu f,
// f(0) = 0, f'(1) = 0. Finite elements on n cells: stiffness K, lumped mass.
inline double quadratic_min_eigen(int n = 4000) {
  const double h = 1.0 / n;
  // Unknowns f_1..f_n (f_0 = 0). Mass weights h, last one h/2.
  Eigen::VectorXd mass = Eigen::VectorXd::Constant(n, h);
  mass[n - 1] = 0.5 * h;
  Eigen::VectorXd diag(n), off(n - 1);
  for (int i = 0; i < n; ++i) diag[i] = (i == n - 1 ? 1.0 : 2.0) / h;
  for (int i = 0; i < n - 1; ++i) off[i] = -1.0 / h;
  // Symmetric similarity transform M^{-1/2} K M^{-1/2}.
  for (int i = 0; i < n; ++i) diag[i] /= mass[i];
  for (int i = 0; i < n - 1; ++i) off[i] /= std::sqrt(mass[i] * mass[i + 1]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  return -2.0 / es.eigenvalues()[0];
}

inline constexpr double quadratic_min_closed_form = -8.0 / (std::numbers::pi * std::numbers::pi);

// J3(f1, f2) = y5(1) for y1 = f1, y2 = f2, y3' = -y1 y2, y4' = -y2 y3, y5' = y1 y4,
// integrated with classical RK4 on n steps (f given in closed form).
inline double j3_by_ode(const std::function<double(double)>& f1, const std::function<double(double)>& f2,
                        int n = 20000) {
  auto rhs = [&](double t, const Eigen::Vector3d& y) {
    const double a = f1(t), b = f2(t);
    return Eigen::Vector3d(-a * b, -b * y[0], a * y[1]);
  };
  Eigen::Vector3d y = Eigen::Vector3d::Zero();
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    const Eigen::Vector3d k1 = rhs(t, y);
    const Eigen::Vector3d k2 = rhs(t + h / 2, y + h / 2 * k1);
    const Eigen::Vector3d k3 = rhs(t + h / 2, y + h / 2 * k2);
    const Eigen::Vector3d k4 = rhs(t + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y[2];
}

// Energy 1/2 int_0^1 (25 cos^2 5t + cos^2 t) dt of (sin 5t, sin t).
inline double lorenz_feasible_energy() {
  const double a = 25.0 * (0.5 + std::sin(10.0) / 20.0);
  const double b = 0.5 + std::sin(2.0) / 4.0;
  return 0.5 * (a + b);
}

// Area of the regular n-gon inscribed in the unit circle.
inline double inscribed_ngon_area(int n) { return 0.5 * n * std::sin(2.0 * std::numbers::pi / n); }

// Blow-up time of x' = x^2 from s > 0.
inline double quadratic_blowup_time(double s) { return 1.0 / s; }

}  // namespace oracle
