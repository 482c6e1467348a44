#ifndef LBMEQ_EQUILIBRIUM_HPP_
#define LBMEQ_EQUILIBRIUM_HPP_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lbmeq/dense_lu.hpp"
#include "lbmeq/lattice.hpp"

namespace lbmeq {

// Conservative variables W = (rho, q^1, ..., q^d).
struct ConservedState {
  double rho = 1.0;
  std::array<double, kMaxDim> q{};

  double operator[](int i) const { return i == 0 ? rho : q[i - 1]; }
  double& operator[](int i) { return i == 0 ? rho : q[i - 1]; }
  bool operator==(const ConservedState&) const = default;
};

// Symmetric d x d tensor F^{alpha beta} (density * velocity^2).
struct FluxTensor {
  int dim = 0;
  std::array<double, kMaxDim * kMaxDim> f{};

  double operator()(int alpha, int beta) const { return f[alpha * kMaxDim + beta]; }
  double& operator()(int alpha, int beta) { return f[alpha * kMaxDim + beta]; }
};

// Coefficients of the low-Mach polynomial
//   G^j = w_j rho [c0 + c1 (v.u)/cs2 + c2 (v.u)^2/(2 cs2^2) + c3 |u|^2/(2 cs2)],
// u = q / rho. The standard equilibrium is (1, 1, 1, -1).
struct PolynomialCoefficients {
  double constant = 1.0;
  double linear = 1.0;
  double quadratic = 1.0;
  double isotropic = -1.0;

  bool operator==(const PolynomialCoefficients&) const = default;
};

// The equilibrium map W -> f_eq = G(W) bound to a velocity set and a
// velocity scale lambda.
//
// Construction validates the moment constraints sum_j G^j = rho and
// sum_j v_j G^j = q on 100 pseudo-random admissible states (seed 42,
// rho in [0.5, 2], |u| <= 0.1 lambda) to 1e-12 relative, and throws
// InvalidEquilibrium otherwise.
class EquilibriumModel {
public:
  // kind "d2q9-polynomial" (needs D2Q9) or "d1q3-polynomial" (needs D1Q3).
  // cs2 defaults to lambda^2 / 3.
  static EquilibriumModel builtin(const std::string& kind, const VelocitySet& vs, double lambda,
                                  std::optional<double> cs2 = std::nullopt);

  // The kind matching a built-in velocity set ("D2Q9" -> "d2q9-polynomial").
  static std::string default_kind(const VelocitySet& vs);

  // User-defined polynomial equilibrium from a weight table.
  static EquilibriumModel table(const VelocitySet& vs, double lambda, std::vector<double> weights,
                                double cs2, PolynomialCoefficients coefficients = {});

  const std::string& kind() const { return kind_; }
  bool is_builtin() const { return kind_ != "table"; }
  int dim() const { return dim_; }
  int size() const { return q_; }
  double lambda() const { return lambda_; }
  double sound_speed_sq() const { return cs2_; }
  const std::vector<double>& weights() const { return w_; }
  const PolynomialCoefficients& coefficients() const { return coef_; }
  double velocity(int j, int alpha) const { return v_[j * kMaxDim + alpha]; }

  // G(W) into `out` (size J+1). Throws NonPositiveDensity unless rho > 0.
  void distribution(const ConservedState& w, std::span<double> out) const;

  // dG^j/dW^i into `out`, row-major (J+1) x (d+1).
  void jacobian(const ConservedState& w, std::span<double> out) const;

private:
  EquilibriumModel(std::string kind, const VelocitySet& vs, double lambda, std::vector<double> w,
                   double cs2, PolynomialCoefficients coef);
  void validate() const;

  std::string kind_;
  int dim_ = 0;
  int q_ = 0;
  double lambda_ = 0.0;
  double cs2_ = 0.0;
  std::vector<double> w_;
  std::vector<double> v_; // q_ x kMaxDim
  PolynomialCoefficients coef_;
};

std::vector<double> equilibrium_distribution(const EquilibriumModel& model,
                                             const ConservedState& w);

// m_eq = M G(W); the first d+1 entries reproduce W.
std::vector<double> equilibrium_moments(const EquilibriumModel& model, const MomentMatrix& mm,
                                        const ConservedState& w);

// F^{alpha beta} = sum_j v_j^alpha v_j^beta G^j(W).
FluxTensor momentum_flux(const EquilibriumModel& model, const ConservedState& w);

// (J+1) x (d+1) matrix dG^j/dW^i, hand-differentiated.
RowMatrix equilibrium_jacobian(const EquilibriumModel& model, const ConservedState& w);

} // namespace lbmeq

#endif // LBMEQ_EQUILIBRIUM_HPP_
