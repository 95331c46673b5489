#include "dobac/analysis.hpp"

#include <cmath>
#include <future>
#include <limits>

#include "dobac/errors.hpp"

namespace dobac {

double lyapunov_value(const Eigen::VectorXd& e, const Eigen::MatrixXd& P,
                      double lambda_abs, const Eigen::VectorXd& ktil_x, double ktil_r,
                      const Eigen::VectorXd& vtil, const Eigen::VectorXd& wtil,
                      const Eigen::MatrixXd& Gx_inv, double gamma_r,
                      const Eigen::MatrixXd& GV_inv, const Eigen::MatrixXd& GW_inv) {
  double v = e.dot(P * e);
  double par = ktil_x.dot(Gx_inv * ktil_x) + ktil_r * ktil_r / gamma_r;
  if (vtil.size() > 0) par += vtil.dot(GV_inv * vtil);
  if (wtil.size() > 0) par += wtil.dot(GW_inv * wtil);
  return v + lambda_abs * par;
}

double beta_adp(const ParamErrorBounds& pb, const Eigen::VectorXd& x, double r,
                const Eigen::VectorXd& phi_v, const Eigen::VectorXd& phi_w) {
  return pb.b_kx * x.norm() + pb.b_kr * std::abs(r) + pb.b_V * phi_v.norm() +
         pb.b_W * phi_w.norm();
}

double bound_e_d(double beta_adp_value, double eps_du, double eps_eta, double Lambda,
                 double Lambda_r, const Eigen::VectorXd& b) {
  const double btb = b.squaredNorm();
  return beta_adp_value +
         (b.norm() * eps_du + std::abs(Lambda - Lambda_r) * eps_eta) /
             (std::abs(Lambda) * btb);
}

double bound_e_dhat_dot(const ParamErrorBounds& pb, double eps_du,
                        const Eigen::VectorXd& b, const Eigen::VectorXd& k_x_star,
                        const Eigen::VectorXd& V_true, const Eigen::VectorXd& V_r,
                        const Eigen::VectorXd& W_true, double jac_v_norm,
                        double jac_w_norm) {
  const double dv = (V_true.size() > 0 ? (V_true - V_r).norm() : 0.0);
  const double coeff = (k_x_star.norm() + pb.b_kx) + (pb.b_V + dv) * jac_v_norm +
                       (W_true.norm() + pb.b_W) * jac_w_norm;
  return b.norm() / b.squaredNorm() * coeff * eps_du;
}

double epsilon_r(double lambda_min_Q, double b_edd_sup, double k_eta, double b_ed_sup,
                 double Lambda, const Eigen::MatrixXd& P, const Eigen::VectorXd& b) {
  return 2.0 / lambda_min_Q * (b_edd_sup / k_eta + b_ed_sup) * (Lambda * P * b).norm();
}

namespace {

struct Window {
  Eigen::Index first = 0, count = 0;
};

Window window_rows(const RunLog& log, double t0, double t1) {
  if (log.rows() == 0) throw WindowOutOfRange("log holds no rows");
  const Eigen::VectorXd t = log.time();
  const double tol = 1e-9 * std::max(1.0, std::abs(t[t.size() - 1]));
  if (t0 > t1) throw WindowOutOfRange("window start exceeds its end");
  if (t0 < t[0] - tol || t1 > t[t.size() - 1] + tol)
    throw WindowOutOfRange("window [" + std::to_string(t0) + ", " + std::to_string(t1) +
                           "] lies outside the logged range");
  Window w;
  Eigen::Index i = 0;
  while (i < t.size() && t[i] < t0 - tol) ++i;
  w.first = i;
  while (i < t.size() && t[i] <= t1 + tol) ++i;
  w.count = i - w.first;
  if (w.count == 0) throw WindowOutOfRange("window contains no logged rows");
  return w;
}

}  // namespace

RunMetrics run_metrics(const RunLog& log, double t0, double t1) {
  const Window w = window_rows(log, t0, t1);
  RunMetrics m;
  m.t0 = t0;
  m.t1 = t1;
  m.rows = static_cast<long>(w.count);

  auto seg = [&](const std::string& name) -> Eigen::VectorXd {
    return log.series(name).segment(w.first, w.count);
  };
  const Eigen::VectorXd e_norm = log.block_norm("e", log.meta.n).segment(w.first, w.count);
  m.rms_e = std::sqrt(e_norm.squaredNorm() / static_cast<double>(w.count));
  m.sup_e = e_norm.maxCoeff();
  m.sup_u_drj = seg("u_drj").cwiseAbs().maxCoeff();
  m.sup_f_drj = seg("f_drj").cwiseAbs().maxCoeff();
  m.sup_eta = seg("eta").cwiseAbs().maxCoeff();
  m.sup_e_du = log.block_norm("edu", log.meta.n).segment(w.first, w.count).maxCoeff();
  m.sup_e_d = seg("e_d").cwiseAbs().maxCoeff();
  m.sup_d_hat = seg("dhat").cwiseAbs().maxCoeff();
  m.sup_beta_adp = seg("beta_adp").maxCoeff();
  m.final_lyap = seg("lyap")[w.count - 1];

  if (log.meta.decimate == 1) {
    const Eigen::VectorXd u_drj = log.series("u_drj");
    const Eigen::VectorXd mode = log.series("mode");
    double sup = 0.0;
    const Eigen::Index last = std::min(w.first + w.count - 1, log.rows() - 2);
    for (Eigen::Index k = w.first; k <= last; ++k) {
      if (case_from_code(static_cast<int>(mode[k])) != RejectionCase::Integrate)
        continue;
      sup = std::max(sup, std::abs(u_drj[k + 1] - u_drj[k]) / log.meta.h);
    }
    m.sup_rate_fd = sup;
  } else {
    m.sup_rate_fd = std::numeric_limits<double>::quiet_NaN();
  }
  return m;
}

double settling_time(const Eigen::VectorXd& t, const Eigen::VectorXd& vals,
                     double band) {
  if (t.size() != vals.size() || t.size() == 0)
    throw WindowOutOfRange("settling time needs matching, nonempty series");
  Eigen::Index last_out = -1;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (std::abs(vals[i]) > band) last_out = i;
  if (last_out < 0) return t[0];
  if (last_out + 1 >= t.size()) return std::numeric_limits<double>::quiet_NaN();
  return t[last_out + 1];
}

TheoremBounds theorem_bounds(const RunLog& log, const SimModel& M, double t0,
                             double t1) {
  const Window w = window_rows(log, t0, t1);
  const RunMetrics m = run_metrics(log, t0, t1);
  TheoremBounds tb;
  tb.eps_du = m.sup_e_du;
  tb.eps_eta = m.sup_eta;
  tb.sup_e = m.sup_e;

  // Largest singular value of the regressor Jacobians along the trajectory.
  const int n = log.meta.n;
  const int cx = log.col("x1");
  double jv = 0.0, jw = 0.0;
  for (Eigen::Index k = w.first; k < w.first + w.count; ++k) {
    const Eigen::VectorXd x = log.data.row(k).segment(cx, n);
    if (M.sc.plant.basis_V.size() > 0)
      jv = std::max(jv, M.sc.plant.basis_V.jacobian(x).jacobiSvd().singularValues()[0]);
    if (M.sc.plant.basis_W.size() > 0)
      jw = std::max(jw, M.sc.plant.basis_W.jacobian(x).jacobiSvd().singularValues()[0]);
  }
  tb.jac_v_norm = jv;
  tb.jac_w_norm = jw;

  tb.b_ed_sup = bound_e_d(m.sup_beta_adp, tb.eps_du, tb.eps_eta, M.sc.plant.Lambda,
                          M.sc.reference.Lambda_r, M.sc.plant.b);
  tb.b_edd_sup = bound_e_dhat_dot(M.bounds, tb.eps_du, M.sc.plant.b,
                                  M.matched.k_x_star, M.sc.plant.V_true,
                                  M.sc.reference.V_r, M.sc.plant.W_true, jv, jw);
  tb.epsilon_r = epsilon_r(M.lambda_min_Q, tb.b_edd_sup, M.sc.rejection.k_eta,
                           tb.b_ed_sup, M.sc.plant.Lambda, M.sc.gains.P, M.sc.plant.b);
  return tb;
}

std::vector<SweepEntry> sweep_runs(const ScenarioConfig& base, const std::string& key,
                                   const std::vector<std::string>& values) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  // Resolve every configuration up front so bad values fail before any run.
  std::vector<ScenarioConfig> configs;
  configs.reserve(values.size());
  for (const std::string& v : values) configs.push_back(apply_override(base, key, v));

  std::vector<std::future<RunLog>> futs;
  futs.reserve(configs.size());
  for (const ScenarioConfig& sc : configs)
    futs.push_back(std::async(std::launch::async, [sc] { return simulate(sc); }));

  std::vector<SweepEntry> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i].value = values[i];
    try {
      out[i].log = futs[i].get();
      out[i].ok = true;
      out[i].status = "ok";
    } catch (const Diverged& ex) {
      out[i].status = std::string("diverged at t=") + std::to_string(ex.t);
    } catch (const NonFiniteDerivative& ex) {
      out[i].status = std::string("non-finite derivative at t=") + std::to_string(ex.t);
    }
  }
  return out;
}

}  // namespace dobac
