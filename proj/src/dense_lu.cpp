#include "lbmeq/dense_lu.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "lbmeq/error.hpp"

namespace lbmeq {

DenseLu::DenseLu(const RowMatrix& a, double relative_tolerance)
    : n_(static_cast<int>(a.rows())), lu_(a), perm_(a.rows()) {
  if (a.rows() != a.cols())
    throw SingularMomentMatrix("LU factorization needs a square matrix");
  std::iota(perm_.begin(), perm_.end(), 0);

  const double scale = a.cwiseAbs().maxCoeff();
  const double threshold = relative_tolerance * scale;
  if (!(scale > 0.0))
    throw SingularMomentMatrix("matrix is identically zero");

  for (int col = 0; col < n_; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n_; ++r)
      if (std::abs(lu_(r, col)) > std::abs(lu_(pivot, col)))
        pivot = r;
    if (std::abs(lu_(pivot, col)) < threshold) {
      std::ostringstream msg;
      msg << "singular matrix: pivot " << std::abs(lu_(pivot, col)) << " in column " << col
          << " is below " << threshold;
      throw SingularMomentMatrix(msg.str());
    }
    if (pivot != col) {
      lu_.row(pivot).swap(lu_.row(col));
      std::swap(perm_[pivot], perm_[col]);
    }
    for (int r = col + 1; r < n_; ++r) {
      const double factor = lu_(r, col) / lu_(col, col);
      lu_(r, col) = factor;
      for (int c = col + 1; c < n_; ++c)
        lu_(r, c) -= factor * lu_(col, c);
    }
  }
}

Eigen::VectorXd DenseLu::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x(n_);
  for (int i = 0; i < n_; ++i)
    x(i) = rhs(perm_[i]);
  // forward substitution with the unit lower factor
  for (int i = 0; i < n_; ++i)
    for (int c = 0; c < i; ++c)
      x(i) -= lu_(i, c) * x(c);
  for (int i = n_ - 1; i >= 0; --i) {
    for (int c = i + 1; c < n_; ++c)
      x(i) -= lu_(i, c) * x(c);
    x(i) /= lu_(i, i);
  }
  return x;
}

RowMatrix DenseLu::inverse() const {
  RowMatrix inv(n_, n_);
  for (int c = 0; c < n_; ++c)
    inv.col(c) = solve(Eigen::VectorXd::Unit(n_, c));
  return inv;
}

} // namespace lbmeq
