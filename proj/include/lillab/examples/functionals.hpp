#pragma once

#include <functional>
#include <string>

#include "lillab/rate/control_grid.hpp"

namespace lillab::examples {

enum class FunctionalKind { j1, j2, j3, running_max };

struct FunctionalId {
  FunctionalKind kind = FunctionalKind::j1;
  int d = 2;  // J1 only
};

// Accepts "J1" (with d from the argument), "J1(3)", "J2", "J3", "running_max".
FunctionalId parse_functional(const std::string& name, int d = 2);
std::size_t functional_dim(const FunctionalId& id);  // components of f

// Composite-quadrature value on n_quad uniform nodes (n_quad >= 3).
//   J1(d): int_0^1 (1-s)^{d-2}/(d-2)! f(s) ds
//   J2:    -int_0^1 f^2
//   J3:    int_0^1 f1(t) int_0^t f2(s) int_0^s f1 f2 dr ds dt
//   running_max: sup_t |int_0^t f|
double functional_value(const FunctionalId& id, const std::function<Vec(double)>& f, std::size_t n_quad = 10001);
double functional_value(const FunctionalId& id, const rate::ControlGrid& control, std::size_t n_quad = 10001);

}  // namespace lillab::examples
