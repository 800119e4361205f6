#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace fdi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Thrown when no disturbance-decoupled, fault-sensitive filter exists for the
// given stacked system (or when normalization hits a zero fault gain).
struct NonIsolableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by the scenario simulation when the plant state leaves |X| <= 1e6.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fdi
