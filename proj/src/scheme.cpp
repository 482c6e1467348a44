#include "lbmeq/scheme.hpp"

#include <cmath>
#include <sstream>

#include "lbmeq/error.hpp"

namespace lbmeq {

namespace {

void stream_into(const std::vector<double>& src, std::vector<double>& dst, const GridShape& shape,
                 const VelocitySet& vs) {
  const int q = vs.size();
  const int dim = shape.dim();
  // upstream[a][j][i]: coordinate i - e_j^a wrapped on axis a
  std::array<std::vector<int>, kMaxDim> upstream;
  for (int a = 0; a < dim; ++a) {
    const int n = shape.extent(a);
    upstream[a].resize(static_cast<std::size_t>(q) * n);
    for (int j = 0; j < q; ++j)
      for (int i = 0; i < n; ++i)
        upstream[a][j * n + i] = shape.wrap(a, static_cast<long>(i) - vs.e(j)[a]);
  }

  if (dim == 1) {
    const int nx = shape.extent(0);
    for (int x = 0; x < nx; ++x)
      for (int j = 0; j < q; ++j)
        dst[static_cast<std::size_t>(x) * q + j] =
            src[static_cast<std::size_t>(upstream[0][j * nx + x]) * q + j];
    return;
  }
  const int nx = shape.extent(0);
  const int ny = shape.extent(1);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      const std::size_t out = (static_cast<std::size_t>(x) * ny + y) * q;
      for (int j = 0; j < q; ++j) {
        const std::size_t from =
            static_cast<std::size_t>(upstream[0][j * nx + x]) * ny + upstream[1][j * ny + y];
        dst[out + j] = src[from * q + j];
      }
    }
}

void require_same_lattice(const SchemeState& state, int q) {
  if (state.q() != q)
    throw ShapeError("state carries " + std::to_string(state.q()) + " populations per node, expected " +
                     std::to_string(q));
}

} // namespace

SchemeParams::SchemeParams(double dx, double dt, std::vector<double> rates, int dim, int q)
    : dx_(dx), dt_(dt), rates_(std::move(rates)), dim_(dim), q_(q) {
  if (!(dx > 0.0) || !(dt > 0.0) || !std::isfinite(dx) || !std::isfinite(dt))
    throw InvalidRelaxation("space and time steps must be positive");
  if (static_cast<int>(rates_.size()) != q - dim - 1) {
    std::ostringstream msg;
    msg << "expected " << (q - dim - 1) << " relaxation rates (moments " << dim + 1 << ".." << q - 1
        << "), got " << rates_.size();
    throw InvalidRelaxation(msg.str());
  }
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    const double s = rates_[i];
    if (!(s > 0.0 && s <= 2.0)) {
      std::ostringstream msg;
      msg << "relaxation rate s_" << (dim + 1 + static_cast<int>(i)) << " = " << s
          << " violates the stability bound 0 < s <= 2";
      throw InvalidRelaxation(msg.str());
    }
  }
}

double SchemeParams::cfl(const VelocitySet& vs, int j) const {
  const Direction& e = vs.e(j);
  double e2 = 0.0;
  for (int a = 0; a < vs.dim(); ++a)
    e2 += static_cast<double>(e[a]) * e[a];
  if (e2 == 0.0)
    return 0.0;
  const double norm_e = std::sqrt(e2);
  const double norm_v = lambda() * norm_e;
  return norm_v * dt_ / (dx_ * norm_e);
}

SchemeState::SchemeState(GridShape shape, int q)
    : shape_(std::move(shape)), q_(q), f_(shape_.node_count() * static_cast<std::size_t>(q), 0.0) {}

std::vector<double> moments_of(const SchemeState& state, const MomentMatrix& mm) {
  require_same_lattice(state, mm.size());
  const int q = mm.size();
  std::vector<double> m(state.data().size(), 0.0);
  const double* mat = mm.matrix().data();
  for (std::size_t n = 0; n < state.node_count(); ++n) {
    const double* f = state.data().data() + n * q;
    double* out = m.data() + n * q;
    for (int k = 0; k < q; ++k) {
      double sum = 0.0;
      for (int j = 0; j < q; ++j)
        sum += mat[k * q + j] * f[j];
      out[k] = sum;
    }
  }
  return m;
}

double relaxation_ode_euler_step(double m, double m_eq, double tau, double dt) {
  return relax_moment(m, m_eq, dt / tau);
}

void collide_moments(std::span<const double> m, std::span<const double> m_eq,
                     const SchemeParams& params, std::span<double> m_star) {
  const int nc = params.conserved_count();
  for (int i = 0; i < nc; ++i)
    m_star[i] = m[i];
  for (int k = nc; k < params.size(); ++k)
    m_star[k] = relax_moment(m[k], m_eq[k], params.rate(k));
}

void collide(SchemeState& state, const MomentMatrix& mm, const EquilibriumModel& model,
             const SchemeParams& params) {
  const int q = mm.size();
  require_same_lattice(state, q);
  if (model.size() != q || params.size() != q)
    throw ShapeError("moment matrix, equilibrium and parameters disagree on J");
  const int nc = mm.conserved_count();
  const double* mat = mm.matrix().data();
  const double* inv = mm.inverse().data();
  std::vector<double> m(q), m_eq(q), m_star(q), g(q);
  ConservedState w;

  for (std::size_t n = 0; n < state.node_count(); ++n) {
    double* f = state.data().data() + n * q;
    for (int k = 0; k < q; ++k) {
      double sum = 0.0;
      for (int j = 0; j < q; ++j)
        sum += mat[k * q + j] * f[j];
      m[k] = sum;
    }
    for (int i = 0; i < nc; ++i)
      w[i] = m[i];
    model.distribution(w, g);
    for (int k = nc; k < q; ++k) {
      double sum = 0.0;
      for (int j = 0; j < q; ++j)
        sum += mat[k * q + j] * g[j];
      m_eq[k] = sum;
    }
    collide_moments(m, m_eq, params, m_star);
    for (int j = 0; j < q; ++j) {
      double sum = 0.0;
      for (int k = 0; k < q; ++k)
        sum += inv[j * q + k] * m_star[k];
      f[j] = sum;
    }
  }
}

void stream(SchemeState& state, const VelocitySet& vs) {
  require_same_lattice(state, vs.size());
  if (state.shape().dim() != vs.dim())
    throw ShapeError("grid dimension does not match the velocity set");
  std::vector<double> next(state.data().size());
  stream_into(state.data(), next, state.shape(), vs);
  state.data().swap(next);
}

SchemeState equilibrium_state(const GridShape& shape, const EquilibriumModel& model,
                              const std::function<ConservedState(const NodeIndex&)>& field) {
  if (shape.dim() != model.dim())
    throw ShapeError("grid dimension does not match the equilibrium model");
  SchemeState state(shape, model.size());
  for (std::size_t n = 0; n < state.node_count(); ++n)
    model.distribution(field(shape.multi(n)), state.node(n));
  return state;
}

std::vector<ConservedState> conserved_field(const SchemeState& state, const MomentMatrix& mm) {
  require_same_lattice(state, mm.size());
  const int q = mm.size();
  std::vector<ConservedState> out(state.node_count());
  for (std::size_t n = 0; n < state.node_count(); ++n) {
    const double* f = state.data().data() + n * q;
    for (int i = 0; i < mm.conserved_count(); ++i) {
      double sum = 0.0;
      for (int j = 0; j < q; ++j)
        sum += mm(i, j) * f[j];
      out[n][i] = sum;
    }
  }
  return out;
}

ConservedTotals conserved_totals(const SchemeState& state, const MomentMatrix& mm) {
  require_same_lattice(state, mm.size());
  const int nc = mm.conserved_count();
  std::array<double, kMaxDim + 1> sum{}, carry{};
  for (std::size_t n = 0; n < state.node_count(); ++n) {
    const double* f = state.data().data() + n * state.q();
    for (int j = 0; j < state.q(); ++j)
      for (int i = 0; i < nc; ++i) {
        // Kahan-Babuska-Neumaier summation
        const double x = mm(i, j) * f[j];
        const double t = sum[i] + x;
        if (std::abs(sum[i]) >= std::abs(x))
          carry[i] += (sum[i] - t) + x;
        else
          carry[i] += (x - t) + sum[i];
        sum[i] = t;
      }
  }
  ConservedTotals totals;
  totals.mass = sum[0] + carry[0];
  for (int a = 0; a + 1 < nc; ++a)
    totals.momentum[a] = sum[a + 1] + carry[a + 1];
  return totals;
}

Scheme::Scheme(VelocitySet vs, MomentMatrix mm, EquilibriumModel model, SchemeParams params)
    : vs_(std::move(vs)), mm_(std::move(mm)), model_(std::move(model)), params_(std::move(params)) {
  const int q = vs_.size();
  if (mm_.size() != q || model_.size() != q || params_.size() != q || mm_.dim() != vs_.dim() ||
      params_.dim() != vs_.dim())
    throw ConstructionError("velocity set, moment matrix, equilibrium and parameters disagree on J or d");
  const double lambda = params_.lambda();
  if (std::abs(mm_.lambda() - lambda) > 1e-12 * lambda ||
      std::abs(model_.lambda() - lambda) > 1e-12 * lambda)
    throw ConstructionError("velocity scale of the moment matrix or equilibrium differs from dx/dt");
}

SchemeState Scheme::equilibrium_state(
    const GridShape& shape, const std::function<ConservedState(const NodeIndex&)>& field) const {
  return lbmeq::equilibrium_state(shape, model_, field);
}

void Scheme::collide(SchemeState& state) const { lbmeq::collide(state, mm_, model_, params_); }

void Scheme::stream(SchemeState& state) {
  require_same_lattice(state, vs_.size());
  if (state.shape().dim() != vs_.dim())
    throw ShapeError("grid dimension does not match the velocity set");
  scratch_.resize(state.data().size());
  stream_into(state.data(), scratch_, state.shape(), vs_);
  state.data().swap(scratch_);
}

void Scheme::step(SchemeState& state) {
  collide(state);
  stream(state);
  state.set_step_count(state.step_count() + 1);
}

void Scheme::run(SchemeState& state, long n) {
  for (long i = 0; i < n; ++i) {
    try {
      step(state);
    } catch (const NonPositiveDensity& e) {
      throw SimulationDiverged("simulation diverged at step " + std::to_string(state.step_count()) +
                               ": " + e.what());
    }
  }
}

} // namespace lbmeq
