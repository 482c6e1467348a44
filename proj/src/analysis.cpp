#include "lbmeq/analysis.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "json.hpp"
#include "lbmeq/error.hpp"
#include "lbmeq/finite_difference.hpp"

namespace lbmeq {

namespace {

constexpr int kMinNodesPerAxis = 8;

void require_resolved(const GridShape& shape) {
  for (int a = 0; a < shape.dim(); ++a)
    if (shape.extent(a) < kMinNodesPerAxis)
      throw GridTooCoarse("axis " + std::to_string(a) + " has " + std::to_string(shape.extent(a)) +
                          " nodes; the equivalent-equation analysis needs at least " +
                          std::to_string(kMinNodesPerAxis));
}

void require_matching(const SmoothField& field, const EquilibriumModel& model) {
  if (field.dim() != model.dim())
    throw ShapeError("field dimension does not match the equilibrium model");
}

} // namespace

SmoothField::SmoothField(GridShape shape, double dx, std::vector<ConservedState> values)
    : shape_(std::move(shape)), dx_(dx), w_(std::move(values)) {
  if (w_.size() != shape_.node_count())
    throw ShapeError("field has " + std::to_string(w_.size()) + " values for " +
                     std::to_string(shape_.node_count()) + " nodes");
  if (!(dx_ > 0.0))
    throw ShapeError("grid spacing must be positive");
  for (const ConservedState& w : w_)
    if (!(w.rho > 0.0))
      throw NonPositiveDensity("smooth field has a non-positive density");
}

SmoothField SmoothField::analytic(GridShape shape, double dx, const ValueFn& value,
                                  const GradientFn& gradient) {
  std::vector<ConservedState> w(shape.node_count());
  const int d = shape.dim();
  std::vector<double> grad(shape.node_count() * static_cast<std::size_t>((d + 1) * d));
  for (std::size_t n = 0; n < shape.node_count(); ++n) {
    const Point x = node_position(shape.multi(n), dx);
    w[n] = value(x);
    const auto g = gradient(x);
    for (int i = 0; i <= d; ++i)
      for (int b = 0; b < d; ++b)
        grad[n * (d + 1) * d + i * d + b] = g[b][i];
  }
  SmoothField field(std::move(shape), dx, std::move(w));
  field.analytic_ = true;
  field.gradient_ = std::move(grad);
  return field;
}

SmoothField SmoothField::analytic(GridShape shape, double dx, const InitialField& init) {
  const Point lengths = box_lengths(shape, dx);
  return analytic(
      std::move(shape), dx, [&](const Point& x) { return init.value(x, lengths); },
      [&](const Point& x) { return init.gradient(x, lengths); });
}

SmoothField SmoothField::from_state(const SchemeState& state, const MomentMatrix& mm, double dx) {
  return SmoothField(state.shape(), dx, conserved_field(state, mm));
}

std::vector<double> SmoothField::derivative(std::span<const double> values, std::size_t stride,
                                            std::size_t offset, int axis) const {
  std::vector<double> out(node_count());
  centered_derivative(values, stride, offset, shape_, axis, dx_, out);
  return out;
}

const std::vector<double>& SmoothField::gradient() const {
  if (!gradient_.empty())
    return gradient_;
  const int d = dim();
  const std::size_t nc = static_cast<std::size_t>(d + 1);
  std::vector<double> flat(node_count() * nc);
  for (std::size_t n = 0; n < node_count(); ++n)
    for (int i = 0; i <= d; ++i)
      flat[n * nc + i] = w_[n][i];
  gradient_.assign(node_count() * nc * d, 0.0);
  for (int i = 0; i <= d; ++i)
    for (int b = 0; b < d; ++b) {
      const auto deriv = derivative(flat, nc, static_cast<std::size_t>(i), b);
      for (std::size_t n = 0; n < node_count(); ++n)
        gradient_[n * nc * d + i * d + b] = deriv[n];
    }
  return gradient_;
}

std::vector<double> SmoothField::tensor_divergence(const std::vector<FluxTensor>& tensors) const {
  if (tensors.size() != node_count())
    throw ShapeError("tensor field does not match the grid");
  const int d = dim();
  const std::size_t dd = static_cast<std::size_t>(d * d);
  std::vector<double> flat(node_count() * dd);
  for (std::size_t n = 0; n < node_count(); ++n)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        flat[n * dd + a * d + b] = tensors[n](a, b);
  std::vector<double> div(node_count() * d, 0.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const auto deriv = derivative(flat, dd, static_cast<std::size_t>(a * d + b), b);
      for (std::size_t n = 0; n < node_count(); ++n)
        div[n * d + a] += deriv[n];
    }
  return div;
}

DefectField conservation_defect(const SmoothField& field, const EquilibriumModel& model,
                                const MomentMatrix& mm) {
  require_matching(field, model);
  require_resolved(field.shape());
  if (mm.size() != model.size())
    throw ShapeError("moment matrix and equilibrium model sizes differ");

  const int q = model.size();
  const int d = field.dim();
  const int nc = d + 1;
  const auto& grad = field.gradient();

  DefectField out{field.shape(), q, std::vector<double>(field.node_count() * q, 0.0)};
  std::vector<double> jac(static_cast<std::size_t>(q) * nc), transport(q), dtf(q);
  std::array<double, kMaxDim + 1> dtw{};

  for (std::size_t n = 0; n < field.node_count(); ++n) {
    model.jacobian(field.values()[n], jac);
    const double* g = grad.data() + n * nc * d;

    // v_j . grad f_eq^j
    for (int j = 0; j < q; ++j) {
      double sum = 0.0;
      for (int b = 0; b < d; ++b) {
        double dfb = 0.0;
        for (int i = 0; i < nc; ++i)
          dfb += jac[j * nc + i] * g[i * d + b];
        sum += model.velocity(j, b) * dfb;
      }
      transport[j] = sum;
    }
    // first-order Euler system: d_t W^i = -sum_j M^i_j v_j . grad f_eq^j
    for (int i = 0; i < nc; ++i) {
      double sum = 0.0;
      for (int j = 0; j < q; ++j)
        sum += mm(i, j) * transport[j];
      dtw[i] = -sum;
    }
    for (int j = 0; j < q; ++j) {
      double sum = 0.0;
      for (int i = 0; i < nc; ++i)
        sum += jac[j * nc + i] * dtw[i];
      dtf[j] = sum;
    }
    double* theta = out.theta.data() + n * q;
    for (int k = 0; k < q; ++k) {
      double sum = 0.0;
      for (int j = 0; j < q; ++j)
        sum += mm(k, j) * (dtf[j] + transport[j]);
      theta[k] = sum;
    }
  }
  return out;
}

std::vector<double> euler_flux_divergence(const SmoothField& field, const EquilibriumModel& model) {
  require_matching(field, model);
  const int d = field.dim();
  const int nc = d + 1;
  std::vector<double> div(field.node_count() * nc, 0.0);

  if (field.has_analytic_gradient()) {
    const int q = model.size();
    const auto& grad = field.gradient();
    std::vector<double> jac(static_cast<std::size_t>(q) * nc);
    for (std::size_t n = 0; n < field.node_count(); ++n) {
      model.jacobian(field.values()[n], jac);
      const double* g = grad.data() + n * nc * d;
      for (int b = 0; b < d; ++b)
        div[n * nc] += g[(1 + b) * d + b];
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          for (int j = 0; j < q; ++j) {
            const double vv = model.velocity(j, a) * model.velocity(j, b);
            for (int i = 0; i < nc; ++i)
              div[n * nc + 1 + a] += vv * jac[j * nc + i] * g[i * d + b];
          }
    }
    return div;
  }

  require_resolved(field.shape());
  const auto& grad = field.gradient();
  std::vector<FluxTensor> flux(field.node_count());
  for (std::size_t n = 0; n < field.node_count(); ++n) {
    flux[n] = momentum_flux(model, field.values()[n]);
    for (int b = 0; b < d; ++b)
      div[n * nc] += grad[n * nc * d + (1 + b) * d + b];
  }
  const auto mom = field.tensor_divergence(flux);
  for (std::size_t n = 0; n < field.node_count(); ++n)
    for (int a = 0; a < d; ++a)
      div[n * nc + 1 + a] = mom[n * d + a];
  return div;
}

std::vector<FluxTensor> ns_flux_correction(const SmoothField& field, const DefectField& defect,
                                           const EquilibriumModel& model, const MomentMatrix& mm,
                                           const SchemeParams& params) {
  require_matching(field, model);
  if (params.size() != mm.size() || defect.q != mm.size() ||
      defect.theta.size() != field.node_count() * static_cast<std::size_t>(defect.q))
    throw ShapeError("defect field, moment matrix and parameters disagree");
  const LambdaTensor lam = lambda_tensor(mm);
  const int d = field.dim();
  const int q = mm.size();
  const double dt = params.dt();

  std::vector<FluxTensor> out(field.node_count());
  for (std::size_t n = 0; n < field.node_count(); ++n) {
    FluxTensor f = momentum_flux(model, field.values()[n]);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double corr = 0.0;
        for (int k = d + 1; k < q; ++k)
          corr += (1.0 / params.rate(k) - 0.5) * lam(a, b, k) * defect.at(n, k);
        f(a, b) -= dt * corr;
      }
    out[n] = f;
  }
  return out;
}

std::vector<FluxTensor> ns_flux_correction(const SmoothField& field, const EquilibriumModel& model,
                                           const MomentMatrix& mm, const SchemeParams& params) {
  return ns_flux_correction(field, conservation_defect(field, model, mm), model, mm, params);
}

std::vector<double> equilibrium_moment_field(const SmoothField& field,
                                             const EquilibriumModel& model,
                                             const MomentMatrix& mm) {
  require_matching(field, model);
  const int q = mm.size();
  std::vector<double> out(field.node_count() * q);
  std::vector<double> g(q);
  for (std::size_t n = 0; n < field.node_count(); ++n) {
    model.distribution(field.values()[n], g);
    for (int k = 0; k < q; ++k) {
      double sum = 0.0;
      for (int j = 0; j < q; ++j)
        sum += mm(k, j) * g[j];
      out[n * q + k] = sum;
    }
  }
  return out;
}

std::vector<double> technical_lemma_prediction(const SmoothField& field,
                                               const EquilibriumModel& model,
                                               const MomentMatrix& mm, const SchemeParams& params) {
  const DefectField defect = conservation_defect(field, model, mm);
  std::vector<double> pred = equilibrium_moment_field(field, model, mm);
  const int q = mm.size();
  const int nc = mm.conserved_count();
  const double dt = params.dt();
  for (std::size_t n = 0; n < field.node_count(); ++n) {
    for (int i = 0; i < nc; ++i)
      pred[n * q + i] = field.values()[n][i];
    for (int k = nc; k < q; ++k)
      pred[n * q + k] -= dt / params.rate(k) * defect.at(n, k);
  }
  return pred;
}

PdeReport pde_report(const VelocitySet& vs, const MomentMatrix& mm, const EquilibriumModel& model,
                     const SchemeParams& params) {
  const LambdaTensor lam = lambda_tensor(mm, vs);
  PdeReport r;
  r.lattice = vs.name();
  r.equilibrium = model.kind();
  r.dim = vs.dim();
  r.dx = params.dx();
  r.dt = params.dt();
  r.lambda = params.lambda();
  r.cs2 = model.sound_speed_sq();
  for (int k = vs.dim() + 1; k < vs.size(); ++k) {
    PdeReportRow row;
    row.k = k;
    row.s = params.rate(k);
    row.mu = params.dt() * (1.0 / row.s - 0.5);
    for (int a = 0; a < vs.dim(); ++a)
      for (int b = 0; b < vs.dim(); ++b)
        row.lambda.push_back(lam(a, b, k));
    r.rows.push_back(std::move(row));
  }
  if (model.is_builtin() && mm.default_basis() && mm.off_diagonal_stress_row() >= 0) {
    r.shear_moment = mm.off_diagonal_stress_row();
    r.shear_viscosity = r.cs2 * params.dt() * (1.0 / params.rate(r.shear_moment) - 0.5);
  }
  return r;
}

void write_report_csv(std::ostream& out, const PdeReport& report) {
  out << "k,s_k,mu_k,Lambda_11_k";
  if (report.dim == 2)
    out << ",Lambda_12_k,Lambda_22_k";
  out << '\n';
  const auto old_precision = out.precision(17);
  for (const PdeReportRow& row : report.rows) {
    out << row.k << ',' << row.s << ',' << row.mu << ',' << row.lambda[0];
    if (report.dim == 2)
      out << ',' << row.lambda[1] << ',' << row.lambda[3];
    out << '\n';
  }
  out.precision(old_precision);
}

void write_report_json(std::ostream& out, const PdeReport& report) {
  nlohmann::ordered_json j;
  j["lattice"] = report.lattice;
  j["equilibrium"] = report.equilibrium;
  j["dimension"] = report.dim;
  j["dx"] = report.dx;
  j["dt"] = report.dt;
  j["lambda"] = report.lambda;
  j["cs2"] = report.cs2;
  j["moments"] = nlohmann::ordered_json::array();
  for (const PdeReportRow& row : report.rows) {
    nlohmann::ordered_json r;
    r["k"] = row.k;
    r["s_k"] = row.s;
    r["mu_k"] = row.mu;
    r["Lambda_k"] = row.lambda;
    j["moments"].push_back(r);
  }
  if (report.shear_viscosity) {
    j["shear_moment"] = report.shear_moment;
    j["shear_viscosity"] = *report.shear_viscosity;
  } else {
    j["shear_viscosity"] = nullptr;
  }
  out << j.dump(2) << '\n';
}

void write_report_summary(std::ostream& out, const PdeReport& report) {
  const auto old_precision = out.precision(6);
  out << "Equivalent equations for " << report.lattice << " (" << report.equilibrium << ")\n";
  out << "  dx = " << report.dx << ", dt = " << report.dt << ", lambda = " << report.lambda
      << ", cs^2 = " << report.cs2 << '\n';
  out << "  order 1: Euler equations, d_t W + div(flux) = O(dt)\n";
  out << "  order 2: momentum flux F - dt * sum_k (1/s_k - 1/2) Lambda_k theta_k\n";
  for (const PdeReportRow& row : report.rows)
    out << "    k = " << row.k << ": s_k = " << row.s << ", mu_k = " << row.mu << '\n';
  if (report.shear_viscosity)
    out << "  shear kinematic viscosity nu = cs^2 dt (1/s_" << report.shear_moment
        << " - 1/2) = " << *report.shear_viscosity << '\n';
  out.precision(old_precision);
}

} // namespace lbmeq
