// linalg.hpp — small dense helpers shared across modules

#pragma once

#include <Eigen/Dense>

namespace starnet::linalg {

// Flip v so its largest-magnitude component is positive. Near-ties (within
// 1e-12 relative) resolve to the lowest index so the choice is reproducible.
void canonical_sign(Eigen::Ref<Eigen::VectorXd> v);

// max_ij |a_ij|
double max_abs(const Eigen::MatrixXd& a);

} // namespace starnet::linalg
