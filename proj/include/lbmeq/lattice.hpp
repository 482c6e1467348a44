#ifndef LBMEQ_LATTICE_HPP_
#define LBMEQ_LATTICE_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lbmeq/dense_lu.hpp"
#include "lbmeq/grid.hpp"

namespace lbmeq {

// Integer lattice displacement e_j; components beyond the set's dimension are 0.
using Direction = std::array<int, kMaxDim>;

// Discrete velocity set (e_j), 0 <= j <= J, on a regular 1-D or 2-D lattice.
//
// Every instance is validated: the vectors are pairwise distinct and the
// (d+1) x (J+1) first-moment block with rows (1, ..., 1) and (e_j^alpha)_j has
// full rank d+1, so density and momentum are independent moments.
class VelocitySet {
public:
  // "D2Q9" (rest, 4 axis, 4 diagonal vectors) or "D1Q3" (0, +1, -1).
  static VelocitySet builtin(std::string_view name);

  // Throws InvalidVelocitySet for duplicates / malformed vectors and
  // RankDeficient when the first-moment block is not of rank d+1.
  static VelocitySet custom(int dim, const std::vector<std::vector<int>>& vectors,
                            std::string name = "custom");

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(e_.size()); }
  int max_index() const { return size() - 1; }
  const Direction& e(int j) const { return e_[j]; }
  const std::vector<Direction>& directions() const { return e_; }
  const std::string& name() const { return name_; }
  bool is_builtin() const { return builtin_; }

  // Index j with e_j == direction, or -1.
  int index_of(const Direction& direction) const;

  bool operator==(const VelocitySet&) const = default;

private:
  VelocitySet(int dim, std::vector<Direction> e, std::string name, bool builtin);

  int dim_ = 0;
  std::vector<Direction> e_;
  std::string name_;
  bool builtin_ = false;
};

// Node reached from `node` by the displacement e_j, wrapped periodically.
// Throws IndexOutOfRange for j outside [0, J] and ShapeError when the node is
// not inside the grid.
NodeIndex neighbor_index(const NodeIndex& node, int j, const GridShape& shape,
                         const VelocitySet& vs);

// The moment matrix M with M^0_j = 1, M^alpha_j = v_j^alpha = lambda e_j^alpha
// and its inverse.
class MomentMatrix {
public:
  int size() const { return static_cast<int>(m_.rows()); }
  int dim() const { return dim_; }
  int conserved_count() const { return dim_ + 1; }
  double lambda() const { return lambda_; }

  const RowMatrix& matrix() const { return m_; }
  const RowMatrix& inverse() const { return m_inv_; }
  double operator()(int k, int j) const { return m_(k, j); }

  // v_j^alpha, exactly as stored in row 1 + alpha.
  double velocity(int j, int alpha) const { return m_(1 + alpha, j); }

  // True when rows d+1..J come from the built-in basis of a built-in set.
  bool default_basis() const { return default_basis_; }

  // Row of the off-diagonal stress moment v_x v_y in the default D2Q9
  // basis; -1 for every other matrix.
  int off_diagonal_stress_row() const { return shear_row_; }

private:
  friend MomentMatrix build_moment_matrix(const VelocitySet&, double,
                                          const std::optional<RowMatrix>&);
  MomentMatrix() = default;

  int dim_ = 0;
  double lambda_ = 0.0;
  RowMatrix m_;
  RowMatrix m_inv_;
  bool default_basis_ = false;
  int shear_row_ = -1;
};

// Assembles M from the velocity set: rows 0..d are always (1, v^alpha); rows
// d+1..J come from `higher_rows` ((J-d) x (J+1)) when given, otherwise from
// the default basis. Throws SingularMomentMatrix if M cannot be inverted.
MomentMatrix build_moment_matrix(const VelocitySet& vs, double lambda,
                                 const std::optional<RowMatrix>& higher_rows = std::nullopt);

// Lambda^{alpha beta}_k = sum_j v_j^alpha v_j^beta (M^-1)^j_k, the map from
// moment defects to momentum-flux corrections. Units: velocity^2 per unit of
// moment k.
class LambdaTensor {
public:
  int dim() const { return dim_; }
  int size() const { return q_; }
  double operator()(int alpha, int beta, int k) const {
    return data_[(static_cast<std::size_t>(alpha) * dim_ + beta) * q_ + k];
  }

private:
  friend LambdaTensor lambda_tensor(const MomentMatrix&);
  int dim_ = 0;
  int q_ = 0;
  std::vector<double> data_;
};

LambdaTensor lambda_tensor(const MomentMatrix& mm, const VelocitySet& vs);
// Same tensor, taking the velocities from rows 1..d of M.
LambdaTensor lambda_tensor(const MomentMatrix& mm);

} // namespace lbmeq

#endif // LBMEQ_LATTICE_HPP_
