#include "lbmeq/lattice.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "lbmeq/error.hpp"

namespace lbmeq {

namespace {

RowMatrix first_moment_block(int dim, const std::vector<Direction>& e) {
  RowMatrix block(dim + 1, static_cast<int>(e.size()));
  for (int j = 0; j < static_cast<int>(e.size()); ++j) {
    block(0, j) = 1.0;
    for (int a = 0; a < dim; ++a)
      block(1 + a, j) = e[j][a];
  }
  return block;
}

int numeric_rank(const RowMatrix& rows) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

// Lallemand-Luo rows for D2Q9 written as polynomials of v = lambda e:
// energy, energy squared, heat fluxes, diagonal and off-diagonal stress.
void fill_d2q9_basis(RowMatrix& m, const VelocitySet& vs, double lambda) {
  const double l2 = lambda * lambda;
  for (int j = 0; j < vs.size(); ++j) {
    const double ex = vs.e(j)[0];
    const double ey = vs.e(j)[1];
    const double e2 = ex * ex + ey * ey;
    m(3, j) = l2 * (-4.0 + 3.0 * e2);
    m(4, j) = l2 * l2 * (4.0 - 10.5 * e2 + 4.5 * e2 * e2);
    m(5, j) = l2 * lambda * (-5.0 + 3.0 * e2) * ex;
    m(6, j) = l2 * lambda * (-5.0 + 3.0 * e2) * ey;
    m(7, j) = l2 * (ex * ex - ey * ey);
    m(8, j) = l2 * ex * ey;
  }
}

// Rows d+1..J picked greedily among monomials of increasing degree in v.
void fill_monomial_basis(RowMatrix& m, const VelocitySet& vs, double lambda) {
  const int q = vs.size();
  const int dim = vs.dim();
  int filled = dim + 1;
  for (int degree = 2; filled < q && degree <= 2 * q; ++degree) {
    for (int px = degree; px >= 0 && filled < q; --px) {
      const int py = degree - px;
      if (dim == 1 && py != 0)
        continue;
      Eigen::RowVectorXd row(q);
      for (int j = 0; j < q; ++j)
        row(j) = std::pow(lambda * vs.e(j)[0], px) * std::pow(lambda * vs.e(j)[1], py);
      RowMatrix trial(filled + 1, q);
      trial.topRows(filled) = m.topRows(filled);
      trial.row(filled) = row;
      if (numeric_rank(trial) == filled + 1)
        m.row(filled++) = row;
    }
  }
  if (filled < q)
    throw SingularMomentMatrix("no monomial moment basis found for velocity set '" + vs.name() +
                               "'; supply higher_rows explicitly");
}

} // namespace

VelocitySet::VelocitySet(int dim, std::vector<Direction> e, std::string name, bool builtin)
    : dim_(dim), e_(std::move(e)), name_(std::move(name)), builtin_(builtin) {
  for (std::size_t a = 0; a < e_.size(); ++a)
    for (std::size_t b = a + 1; b < e_.size(); ++b)
      if (e_[a] == e_[b])
        throw InvalidVelocitySet("duplicate velocity vectors at indices " + std::to_string(a) +
                                 " and " + std::to_string(b));
  if (numeric_rank(first_moment_block(dim_, e_)) < dim_ + 1)
    throw RankDeficient("first-moment block of velocity set '" + name_ +
                        "' has rank below d+1 = " + std::to_string(dim_ + 1));
}

VelocitySet VelocitySet::builtin(std::string_view name) {
  if (name == "D2Q9") {
    return VelocitySet(2,
                       {{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1}},
                       "D2Q9", true);
  }
  if (name == "D1Q3")
    return VelocitySet(1, {{0, 0}, {1, 0}, {-1, 0}}, "D1Q3", true);
  throw InvalidVelocitySet("unknown velocity set '" + std::string(name) +
                           "' (built-ins: D2Q9, D1Q3)");
}

VelocitySet VelocitySet::custom(int dim, const std::vector<std::vector<int>>& vectors,
                                std::string name) {
  if (dim < 1 || dim > kMaxDim)
    throw InvalidVelocitySet("velocity set dimension must be 1 or 2, got " + std::to_string(dim));
  if (vectors.size() < static_cast<std::size_t>(dim + 1))
    throw RankDeficient("a " + std::to_string(dim) + "-D velocity set needs at least " +
                        std::to_string(dim + 1) + " vectors");
  std::vector<Direction> e;
  e.reserve(vectors.size());
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != static_cast<std::size_t>(dim))
      throw InvalidVelocitySet("velocity vector " + std::to_string(j) + " has " +
                               std::to_string(vectors[j].size()) + " components, expected " +
                               std::to_string(dim));
    Direction d{};
    std::copy(vectors[j].begin(), vectors[j].end(), d.begin());
    e.push_back(d);
  }
  return VelocitySet(dim, std::move(e), std::move(name), false);
}

int VelocitySet::index_of(const Direction& direction) const {
  auto it = std::find(e_.begin(), e_.end(), direction);
  return it == e_.end() ? -1 : static_cast<int>(it - e_.begin());
}

NodeIndex neighbor_index(const NodeIndex& node, int j, const GridShape& shape,
                         const VelocitySet& vs) {
  if (j < 0 || j > vs.max_index())
    throw IndexOutOfRange("velocity index " + std::to_string(j) + " outside [0, " +
                          std::to_string(vs.max_index()) + "]");
  if (shape.dim() != vs.dim())
    throw ShapeError("grid dimension does not match velocity set dimension");
  if (!shape.contains(node))
    throw ShapeError("node outside the grid");
  NodeIndex out{};
  for (int a = 0; a < shape.dim(); ++a)
    out[a] = shape.wrap(a, static_cast<long>(node[a]) + vs.e(j)[a]);
  return out;
}

MomentMatrix build_moment_matrix(const VelocitySet& vs, double lambda,
                                 const std::optional<RowMatrix>& higher_rows) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ConstructionError("velocity scale lambda must be positive and finite");

  const int q = vs.size();
  const int dim = vs.dim();
  MomentMatrix mm;
  mm.dim_ = dim;
  mm.lambda_ = lambda;
  mm.m_ = RowMatrix::Zero(q, q);
  for (int j = 0; j < q; ++j) {
    mm.m_(0, j) = 1.0;
    for (int a = 0; a < dim; ++a)
      mm.m_(1 + a, j) = lambda * vs.e(j)[a];
  }

  if (higher_rows) {
    if (higher_rows->rows() != q - dim - 1 || higher_rows->cols() != q) {
      std::ostringstream msg;
      msg << "higher moment rows must be " << (q - dim - 1) << " x " << q << ", got "
          << higher_rows->rows() << " x " << higher_rows->cols();
      throw ShapeError(msg.str());
    }
    mm.m_.bottomRows(q - dim - 1) = *higher_rows;
  } else if (vs.is_builtin() && vs.name() == "D2Q9") {
    fill_d2q9_basis(mm.m_, vs, lambda);
    mm.default_basis_ = true;
    mm.shear_row_ = 8;
  } else if (vs.is_builtin() && vs.name() == "D1Q3") {
    for (int j = 0; j < q; ++j)
      mm.m_(2, j) = mm.m_(1, j) * mm.m_(1, j);
    mm.default_basis_ = true;
  } else {
    fill_monomial_basis(mm.m_, vs, lambda);
  }

  mm.m_inv_ = DenseLu(mm.m_).inverse();

  // Accept the inverse only if both products reproduce the identity.
  const RowMatrix scale = mm.m_.cwiseAbs() * mm.m_inv_.cwiseAbs();
  const RowMatrix left = mm.m_ * mm.m_inv_;
  const RowMatrix right = mm.m_inv_ * mm.m_;
  const RowMatrix scale_r = mm.m_inv_.cwiseAbs() * mm.m_.cwiseAbs();
  for (int r = 0; r < q; ++r) {
    for (int c = 0; c < q; ++c) {
      const double id = r == c ? 1.0 : 0.0;
      if (std::abs(left(r, c) - id) > 1e-12 * std::max(1.0, scale(r, c)) ||
          std::abs(right(r, c) - id) > 1e-12 * std::max(1.0, scale_r(r, c)))
        throw SingularMomentMatrix("moment matrix is too ill-conditioned to invert accurately");
    }
  }
  return mm;
}

LambdaTensor lambda_tensor(const MomentMatrix& mm, const VelocitySet& vs) {
  if (mm.size() != vs.size() || mm.dim() != vs.dim())
    throw ShapeError("moment matrix was not built from this velocity set");
  return lambda_tensor(mm);
}

LambdaTensor lambda_tensor(const MomentMatrix& mm) {
  LambdaTensor t;
  t.dim_ = mm.dim();
  t.q_ = mm.size();
  t.data_.assign(static_cast<std::size_t>(t.dim_) * t.dim_ * t.q_, 0.0);
  const RowMatrix& inv = mm.inverse();
  for (int a = 0; a < t.dim_; ++a)
    for (int b = 0; b < t.dim_; ++b)
      for (int k = 0; k < t.q_; ++k) {
        double sum = 0.0;
        for (int j = 0; j < t.q_; ++j)
          sum += mm.velocity(j, a) * mm.velocity(j, b) * inv(j, k);
        t.data_[(static_cast<std::size_t>(a) * t.dim_ + b) * t.q_ + k] = sum;
      }
  return t;
}

} // namespace lbmeq
