#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace fgopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fgopt
