#include "specdec/linalg.hpp"

#include "specdec/errors.hpp"

namespace specdec {

Eigen::VectorXd pinv_solve(const Eigen::MatrixXd& H, const Eigen::VectorXd& T) {
  if (H.rows() < 1 || H.cols() < 1) throw ParameterError("pinv_solve: empty matrix");
  if (H.rows() != T.size()) throw ParameterError("pinv_solve: row count differs from target length");
  if (!H.allFinite() || !T.allFinite()) throw NumericError("pinv_solve: non-finite input");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kPinvRelativeCutoff);
  Eigen::VectorXd beta = svd.solve(T);
  if (!beta.allFinite()) throw NumericError("pinv_solve: solution is not finite");
  return beta;
}

}  // namespace specdec
