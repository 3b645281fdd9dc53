#pragma once

#include <Eigen/Dense>
#include <limits>

namespace lillab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace lillab
