#ifndef LBMEQ_SCHEME_HPP_
#define LBMEQ_SCHEME_HPP_

#include <functional>
#include <span>
#include <vector>

#include "lbmeq/equilibrium.hpp"
#include "lbmeq/grid.hpp"
#include "lbmeq/lattice.hpp"

namespace lbmeq {

// Space step, time step and the relaxation ratios s_k = dt / tau_k of the
// non-conserved moments k = d+1..J. Every s_k must satisfy 0 < s_k <= 2.
class SchemeParams {
public:
  // `rates` holds s_{d+1}, ..., s_J in moment order. Throws InvalidRelaxation.
  SchemeParams(double dx, double dt, std::vector<double> rates, int dim, int q);

  double dx() const { return dx_; }
  double dt() const { return dt_; }
  double lambda() const { return dx_ / dt_; }
  int dim() const { return dim_; }
  int size() const { return q_; }
  int conserved_count() const { return dim_ + 1; }

  const std::vector<double>& rates() const { return rates_; }
  // s_k for k >= d+1.
  double rate(int k) const { return rates_[k - dim_ - 1]; }
  double tau(int k) const { return dt_ / rate(k); }

  // sigma_j = |v_j| dt / (dx |e_j|), with v_j = lambda e_j; 0 for the rest velocity.
  double cfl(const VelocitySet& vs, int j) const;

private:
  double dx_;
  double dt_;
  std::vector<double> rates_;
  int dim_;
  int q_;
};

// Particle populations f^j on a periodic grid, stored node by node
// (J+1 consecutive values per node), plus an integer step counter.
class SchemeState {
public:
  SchemeState() = default;
  SchemeState(GridShape shape, int q);

  const GridShape& shape() const { return shape_; }
  int q() const { return q_; }
  std::size_t node_count() const { return shape_.node_count(); }

  double& at(std::size_t node, int j) { return f_[node * q_ + j]; }
  double at(std::size_t node, int j) const { return f_[node * q_ + j]; }
  std::span<double> node(std::size_t n) { return {f_.data() + n * q_, static_cast<std::size_t>(q_)}; }
  std::span<const double> node(std::size_t n) const {
    return {f_.data() + n * q_, static_cast<std::size_t>(q_)};
  }

  std::vector<double>& data() { return f_; }
  const std::vector<double>& data() const { return f_; }

  long step_count() const { return steps_; }
  void set_step_count(long steps) { steps_ = steps; }
  double time(double dt) const { return static_cast<double>(steps_) * dt; }

private:
  GridShape shape_;
  int q_ = 0;
  std::vector<double> f_;
  long steps_ = 0;
};

// m = M f at every node, node-major (J+1 values per node).
std::vector<double> moments_of(const SchemeState& state, const MomentMatrix& mm);

// The per-moment relaxation update shared by collide and the explicit Euler
// step of dm/dt = -(m - m_eq)/tau: m - s (m - m_eq).
inline double relax_moment(double m, double m_eq, double s) { return m - s * (m - m_eq); }

// Explicit Euler step of the relaxation ODE over dt, with s = dt / tau.
double relaxation_ode_euler_step(double m, double m_eq, double tau, double dt);

// Moment-space collision of one node: conserved moments are copied, the
// others relaxed towards equilibrium with their ratio s_k.
void collide_moments(std::span<const double> m, std::span<const double> m_eq,
                     const SchemeParams& params, std::span<double> m_star);

// In-place, node-local collision: m = M f, relax, f = M^-1 m*.
void collide(SchemeState& state, const MomentMatrix& mm, const EquilibriumModel& model,
             const SchemeParams& params);

// In-place streaming f^j(x) <- f^j(x - e_j): a pure permutation of storage.
void stream(SchemeState& state, const VelocitySet& vs);

// State initialised at equilibrium, f = G(W(x)).
SchemeState equilibrium_state(const GridShape& shape, const EquilibriumModel& model,
                              const std::function<ConservedState(const NodeIndex&)>& field);

// Conserved variables W at every node.
std::vector<ConservedState> conserved_field(const SchemeState& state, const MomentMatrix& mm);

// Global sums of mass and momentum (compensated summation).
struct ConservedTotals {
  double mass = 0.0;
  std::array<double, kMaxDim> momentum{};
};
ConservedTotals conserved_totals(const SchemeState& state, const MomentMatrix& mm);

// The complete lattice Boltzmann scheme: collide then stream.
class Scheme {
public:
  // Throws ConstructionError if the pieces do not belong together.
  Scheme(VelocitySet vs, MomentMatrix mm, EquilibriumModel model, SchemeParams params);

  const VelocitySet& velocity_set() const { return vs_; }
  const MomentMatrix& moments() const { return mm_; }
  const EquilibriumModel& model() const { return model_; }
  const SchemeParams& params() const { return params_; }

  SchemeState equilibrium_state(const GridShape& shape,
                                const std::function<ConservedState(const NodeIndex&)>& field) const;

  void collide(SchemeState& state) const;
  void stream(SchemeState& state);
  void step(SchemeState& state);
  // n steps; a non-positive or non-finite density raises SimulationDiverged.
  void run(SchemeState& state, long n);

private:
  VelocitySet vs_;
  MomentMatrix mm_;
  EquilibriumModel model_;
  SchemeParams params_;
  std::vector<double> scratch_;
};

} // namespace lbmeq

#endif // LBMEQ_SCHEME_HPP_
