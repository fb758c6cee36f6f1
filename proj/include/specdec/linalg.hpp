#pragma once

#include <Eigen/Dense>

namespace specdec {

/// Singular values at or below this fraction of the largest are treated as zero.
inline constexpr double kPinvRelativeCutoff = 1e-10;

/// Minimum-norm least-squares solution of H * beta = T (beta = pinv(H) * T).
///
/// Uses a thin SVD with the rank cutoff above rather than forming
/// (H^T H)^{-1} H^T T. Throws NumericError on non-finite input and
/// ParameterError on an empty or mismatched system.
Eigen::VectorXd pinv_solve(const Eigen::MatrixXd& H, const Eigen::VectorXd& T);

}  // namespace specdec
