#include "lillab/examples/functionals.hpp"

#include <cmath>
#include <regex>

#include "lillab/error.hpp"
#include "lillab/rate/oracle.hpp"

namespace lillab::examples {

FunctionalId parse_functional(const std::string& name, int d) {
  static const std::regex j1_re(R"(J1\((\d+)\))");
  std::smatch m;
  if (name == "J1") return {FunctionalKind::j1, d};
  if (std::regex_match(name, m, j1_re)) return {FunctionalKind::j1, std::stoi(m[1])};
  if (name == "J2") return {FunctionalKind::j2, 0};
  if (name == "J3") return {FunctionalKind::j3, 0};
  if (name == "running_max") return {FunctionalKind::running_max, 0};
  throw UnknownName("unknown functional '" + name + "'");
}

std::size_t functional_dim(const FunctionalId& id) { return id.kind == FunctionalKind::j3 ? 2 : 1; }

double functional_value(const FunctionalId& id, const std::function<Vec(double)>& f, std::size_t n_quad) {
  require(n_quad >= 4, "functional_value: need at least four quadrature nodes");
  if (id.kind == FunctionalKind::j1) require(id.d >= 2, "functional_value: J1 needs d >= 2");
  const std::size_t n = n_quad;
  const double h = 1.0 / double(n - 1);
  const std::size_t dim = functional_dim(id);
  std::vector<double> f1(n), f2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec v = f(double(i) * h);
    require(std::size_t(v.size()) == dim, "functional_value: control has the wrong dimension");
    f1[i] = v[0];
    if (dim == 2) f2[i] = v[1];
  }
  switch (id.kind) {
    case FunctionalKind::j1: {
      double fact = 1.0;
      for (int i = 2; i <= id.d - 2; ++i) fact *= i;
      std::vector<double> g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = std::pow(1.0 - double(i) * h, id.d - 2) / fact * f1[i];
      return rate::simpson(g, h);
    }
    case FunctionalKind::j2: {
      std::vector<double> g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = f1[i] * f1[i];
      return -rate::simpson(g, h);
    }
    case FunctionalKind::j3: {
      std::vector<double> g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = f1[i] * f2[i];
      const auto inner = rate::cumulative_simpson(g, h);
      for (std::size_t i = 0; i < n; ++i) g[i] = f2[i] * inner[i];
      const auto middle = rate::cumulative_simpson(g, h);
      for (std::size_t i = 0; i < n; ++i) g[i] = f1[i] * middle[i];
      return rate::simpson(g, h);
    }
    case FunctionalKind::running_max: {
      const auto c = rate::cumulative_simpson(f1, h);
      double m = 0.0;
      for (double v : c) m = std::max(m, std::abs(v));
      return m;
    }
  }
  return 0.0;
}

double functional_value(const FunctionalId& id, const rate::ControlGrid& control, std::size_t n_quad) {
  require(control.dim() == functional_dim(id), "functional_value: control has the wrong dimension");
  return functional_value(id, [&](double t) { return control.f_at(t); }, n_quad);
}

}  // namespace lillab::examples
