#ifndef LBMEQ_ANALYSIS_HPP_
#define LBMEQ_ANALYSIS_HPP_

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lbmeq/equilibrium.hpp"
#include "lbmeq/initial_field.hpp"
#include "lbmeq/lattice.hpp"
#include "lbmeq/scheme.hpp"

namespace lbmeq {

// A snapshot W(x) of the conserved variables on a periodic grid of spacing
// dx. Spatial derivatives come from fourth-order centered differences, or
// from closed-form gradients when the field was built from an analytic
// description.
class SmoothField {
public:
  using ValueFn = std::function<ConservedState(const Point&)>;
  using GradientFn = std::function<std::array<ConservedState, kMaxDim>(const Point&)>;

  // Throws NonPositiveDensity if rho <= 0 anywhere.
  SmoothField(GridShape shape, double dx, std::vector<ConservedState> values);

  // Closed-form field sampled at x = i dx; derivatives bypass finite differences.
  static SmoothField analytic(GridShape shape, double dx, const ValueFn& value,
                              const GradientFn& gradient);
  static SmoothField analytic(GridShape shape, double dx, const InitialField& field);

  // W = first d+1 moments of the populations.
  static SmoothField from_state(const SchemeState& state, const MomentMatrix& mm, double dx);

  const GridShape& shape() const { return shape_; }
  int dim() const { return shape_.dim(); }
  double dx() const { return dx_; }
  std::size_t node_count() const { return shape_.node_count(); }
  const std::vector<ConservedState>& values() const { return w_; }
  bool has_analytic_gradient() const { return analytic_; }

  // dW^i/dx_beta at node n is gradient()[n * (d+1) * d + i * d + beta].
  const std::vector<double>& gradient() const;

  // Fourth-order centered derivative along `axis` of the scalar stored at
  // values[n * stride + offset].
  std::vector<double> derivative(std::span<const double> values, std::size_t stride,
                                 std::size_t offset, int axis) const;

  // Divergence sum_beta d/dx_beta of a node-major d x d tensor field (row
  // alpha), i.e. one d-vector per node.
  std::vector<double> tensor_divergence(const std::vector<FluxTensor>& tensors) const;

private:
  SmoothField() = default;

  GridShape shape_;
  double dx_ = 0.0;
  std::vector<ConservedState> w_;
  bool analytic_ = false;
  mutable std::vector<double> gradient_;
};

// theta^k for every node, node-major (J+1 values per node).
struct DefectField {
  GridShape shape;
  int q = 0;
  std::vector<double> theta;

  double at(std::size_t node, int k) const { return theta[node * q + k]; }
};

// theta^k = sum_j M^k_j (d_t f_eq^j + v_j^beta d_beta f_eq^j), with
// d_beta f_eq = (dG/dW) d_beta W and d_t W taken from the first-order Euler
// system. The Euler divergence is formed from the same chain-rule quantities,
// so the conserved rows vanish to rounding.
// Throws GridTooCoarse below 8 nodes per axis, NonPositiveDensity.
DefectField conservation_defect(const SmoothField& field, const EquilibriumModel& model,
                                const MomentMatrix& mm);

// (sum_beta d_beta q^beta, sum_beta d_beta F^{alpha beta}) per node,
// node-major d+1 values. Differences of momentum_flux values on the grid, or
// the exact chain rule for analytic fields.
std::vector<double> euler_flux_divergence(const SmoothField& field, const EquilibriumModel& model);

// Per node: F^{ab} - dt sum_{k>d} (1/s_k - 1/2) Lambda^{ab}_k theta^k.
std::vector<FluxTensor> ns_flux_correction(const SmoothField& field, const EquilibriumModel& model,
                                           const MomentMatrix& mm, const SchemeParams& params);

// Same correction from a precomputed defect field.
std::vector<FluxTensor> ns_flux_correction(const SmoothField& field, const DefectField& defect,
                                           const EquilibriumModel& model, const MomentMatrix& mm,
                                           const SchemeParams& params);

// m_eq^k - (dt / s_k) theta^k for k > d; entries k <= d hold W. Node-major.
std::vector<double> technical_lemma_prediction(const SmoothField& field,
                                               const EquilibriumModel& model,
                                               const MomentMatrix& mm, const SchemeParams& params);

// Equilibrium moments M G(W) at every node, node-major.
std::vector<double> equilibrium_moment_field(const SmoothField& field,
                                             const EquilibriumModel& model,
                                             const MomentMatrix& mm);

struct PdeReportRow {
  int k = 0;
  double s = 0.0;
  double mu = 0.0;
  std::vector<double> lambda; // d x d slice Lambda^{ab}_k, row-major
};

// Coefficients of the second-order equivalent equations.
struct PdeReport {
  std::string lattice;
  std::string equilibrium;
  int dim = 0;
  double dx = 0.0;
  double dt = 0.0;
  double lambda = 0.0;
  double cs2 = 0.0;
  std::vector<PdeReportRow> rows;
  // Built-in D2Q9 model with its default basis only.
  std::optional<double> shear_viscosity;
  int shear_moment = -1;
};

// mu_k = dt (1/s_k - 1/2) for each non-conserved moment, with Lambda slices.
PdeReport pde_report(const VelocitySet& vs, const MomentMatrix& mm, const EquilibriumModel& model,
                     const SchemeParams& params);

// CSV: k,s_k,mu_k,Lambda_11_k[,Lambda_12_k,Lambda_22_k]
void write_report_csv(std::ostream& out, const PdeReport& report);
void write_report_json(std::ostream& out, const PdeReport& report);
void write_report_summary(std::ostream& out, const PdeReport& report);

} // namespace lbmeq

#endif // LBMEQ_ANALYSIS_HPP_
