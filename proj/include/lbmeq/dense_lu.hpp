#ifndef LBMEQ_DENSE_LU_HPP_
#define LBMEQ_DENSE_LU_HPP_

#include <Eigen/Core>
#include <vector>

namespace lbmeq {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// LU factorization with partial (row) pivoting for the small square matrices
// of the moment basis (at most 9x9 in practice).
//
// A pivot whose magnitude falls below `relative_tolerance * max|A|` marks the
// matrix as singular and the constructor throws SingularMomentMatrix.
class DenseLu {
public:
  explicit DenseLu(const RowMatrix& a, double relative_tolerance = 1e-12);

  int size() const { return n_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  RowMatrix inverse() const;

private:
  int n_;
  RowMatrix lu_;
  std::vector<int> perm_;
};

} // namespace lbmeq

#endif // LBMEQ_DENSE_LU_HPP_
