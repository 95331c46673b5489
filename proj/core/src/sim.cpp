#include "dobac/sim.hpp"

#include <cmath>
#include <utility>

#include "dobac/analysis.hpp"
#include "dobac/observer.hpp"
#include "dobac/plant.hpp"

namespace dobac {

StateLayout StateLayout::make(int n, int m_v, int m_w) {
  StateLayout L;
  L.n = n;
  L.m_v = m_v;
  L.m_w = m_w;
  L.x = 0;
  L.x_r = L.x + n;
  L.k_x = L.x_r + n;
  L.k_r = L.k_x + n;
  L.V = L.k_r + 1;
  L.W = L.V + m_v;
  L.z = L.W + m_w;
  L.u_drj = L.z + n;
  L.size = L.u_drj + 1;
  return L;
}

SimModel SimModel::build(const ScenarioConfig& sc_in) {
  validate_scenario(sc_in);
  SimModel M;
  M.sc = sc_in;
  const ScenarioConfig& sc = M.sc;
  M.layout = StateLayout::make(sc.plant.n(), sc.plant.basis_V.size(),
                               sc.plant.basis_W.size());
  M.steps = std::llround(sc.sim.t_end / sc.sim.h);
  M.Q = lyapunov_q(sc.reference.A_r, sc.gains.P);
  M.lambda_min_Q =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M.Q).eigenvalues().minCoeff();
  M.matched = solve_matching(sc.plant.A, sc.reference.A_r, sc.plant.b, sc.plant.Lambda,
                             sc.reference.Lambda_r);
  M.bounds = param_error_bounds(sc.sets);
  M.sign_lambda = sc.plant.Lambda >= 0.0 ? 1 : -1;
  M.bTb = sc.plant.b.squaredNorm();
  auto inv = [](const Eigen::MatrixXd& G) {
    return G.size() > 0 ? Eigen::MatrixXd(G.inverse()) : G;
  };
  M.Gx_inv = inv(sc.gains.Gamma_x);
  M.GV_inv = inv(sc.gains.Gamma_V);
  M.GW_inv = inv(sc.gains.Gamma_W);
  return M;
}

ClosedLoopState initial_state(const SimModel& M) {
  const StateLayout& L = M.layout;
  const ScenarioConfig& sc = M.sc;
  ClosedLoopState s;
  s.t = 0.0;
  s.y = Eigen::VectorXd::Zero(L.size);
  s.y.segment(L.x, L.n) = sc.init.x;
  s.y.segment(L.x_r, L.n) = sc.init.x_r;
  s.y.segment(L.k_x, L.n) = sc.init.k_x ? *sc.init.k_x : sc.sets.k_x.center;
  s.y[L.k_r] = sc.init.k_r ? *sc.init.k_r
                           : (sc.sets.k_r.dim() > 0 ? sc.sets.k_r.center[0] : 0.0);
  s.y.segment(L.V, L.m_v) = sc.init.V ? *sc.init.V : sc.sets.V.center;
  s.y.segment(L.W, L.m_w) = sc.init.W ? *sc.init.W : sc.sets.W.center;
  // z is chosen so that the observer output starts at the requested estimate.
  s.y.segment(L.z, L.n) = sc.init.d_u_hat - sc.observer.gain * sc.init.x;
  s.y[L.u_drj] = sc.init.u_drj;
  return s;
}

StepContext eval_step(const ClosedLoopState& s0, const SimModel& M) {
  const StateLayout& L = M.layout;
  const ScenarioConfig& sc = M.sc;
  const double t = s0.t;

  const Eigen::VectorXd x = s0.y.segment(L.x, L.n);
  const Eigen::VectorXd x_r = s0.y.segment(L.x_r, L.n);
  const Eigen::VectorXd k_x = s0.y.segment(L.k_x, L.n);
  const double k_r = s0.y[L.k_r];
  const Eigen::VectorXd V = s0.y.segment(L.V, L.m_v);
  const Eigen::VectorXd W = s0.y.segment(L.W, L.m_w);
  const Eigen::VectorXd z = s0.y.segment(L.z, L.n);
  const double u_drj_prev = s0.y[L.u_drj];

  const Eigen::VectorXd phi_v = sc.plant.basis_V.eval(x);
  const Eigen::VectorXd phi_w = sc.plant.basis_W.eval(x);
  const Eigen::VectorXd d_u_hat = d_u_hat_from(z, x, sc.observer);
  const double r = r_eval(x_r, t, sc.reference);
  const double r_dot = r_dot_eval(x_r, t, sc.reference);
  const double d_hat =
      recover_d_hat(d_u_hat, x, r, k_x, k_r, V, W, phi_v, phi_w, sc.reference);

  // The branch taken and the post-jump value depend only on magnitudes, so
  // they can be fixed before the rate terms (which need u) are available.
  const RejectionDecision pre = decide(u_drj_prev, d_hat, 0.0, sc.rejection);
  const double u = control_law(k_x, k_r, V, W, x, r, phi_v, phi_w, pre.u_drj);

  const double d = sc.disturbance.eval(t);
  const Eigen::VectorXd x_dot_true = plant_deriv(x, u, d, sc.plant);
  const Eigen::VectorXd d_u = lumped_disturbance_truth(x, u, d, sc.plant, sc.reference);
  const Eigen::VectorXd z_dot = observer_deriv(z, x, u, phi_v, sc.observer, sc.reference);
  const Eigen::VectorXd d_u_hat_dot =
      observer_output_derivative(z_dot, x_dot_true, sc.observer);
  const Eigen::VectorXd xds = x_dot_star(x, u, d_u_hat, phi_v, sc.reference);

  const Eigen::VectorXd e = tracking_error(x, x_r);
  const AdaptationDerivs ad = adaptation_deriv(x, e, r, k_x, k_r, V, W, phi_v, phi_w,
                                               sc.gains, sc.sets, sc.plant.b,
                                               M.sign_lambda);
  const Eigen::MatrixXd jac_v = sc.plant.basis_V.jacobian(x);
  const Eigen::MatrixXd jac_w = sc.plant.basis_W.jacobian(x);
  const double dds =
      d_hat_dot_star(d_u_hat_dot, x, r, r_dot, xds, k_x, k_r, V, W, ad.k_x_dot,
                     ad.k_r_dot, ad.V_dot, ad.W_dot, phi_v, phi_w, jac_v, jac_w,
                     sc.reference);
  const RejectionDecision dec = decide(u_drj_prev, d_hat, dds, sc.rejection);

  StepContext ctx;
  ctx.start = s0;
  ctx.start.y[L.u_drj] = dec.u_drj;
  ctx.mode = dec.case_taken;
  ctx.f_drj = dec.f_drj;
  ctx.direct_zero = sc.rejection.mode == RejectionMode::Direct &&
                    !(std::abs(d_hat) < sc.rejection.u_bar);

  StepDiagnostics& dg = ctx.diag;
  dg.r = r;
  dg.r_dot = r_dot;
  dg.u = u;
  dg.d = d;
  dg.d_hat = d_hat;
  dg.e_d = d_hat - d;
  dg.eta = dec.eta;
  dg.phi_drj = dec.phi_drj;
  dg.f_drj = dec.f_drj;
  dg.d_hat_dot_star = dds;
  dg.mode = dec.case_taken;
  dg.d_u = d_u;
  dg.d_u_hat = d_u_hat;
  dg.e_du = d_u_hat - d_u;
  dg.lyap = lyapunov_value(e, sc.gains.P, std::abs(sc.plant.Lambda),
                           k_x - M.matched.k_x_star, k_r - M.matched.k_r_star,
                           V - sc.plant.V_true, W - sc.plant.W_true, M.Gx_inv,
                           sc.gains.gamma_r, M.GV_inv, M.GW_inv);
  dg.beta_adp = beta_adp(M.bounds, x, r, phi_v, phi_w);
  return ctx;
}

void closed_loop_deriv(const SimModel& M, const StepContext& ctx, double t,
                       const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
  const StateLayout& L = M.layout;
  const ScenarioConfig& sc = M.sc;
  dy.resize(L.size);

  const Eigen::VectorXd x = y.segment(L.x, L.n);
  const Eigen::VectorXd x_r = y.segment(L.x_r, L.n);
  const Eigen::VectorXd k_x = y.segment(L.k_x, L.n);
  const double k_r = y[L.k_r];
  const Eigen::VectorXd V = y.segment(L.V, L.m_v);
  const Eigen::VectorXd W = y.segment(L.W, L.m_w);
  const Eigen::VectorXd z = y.segment(L.z, L.n);

  const Eigen::VectorXd phi_v = sc.plant.basis_V.eval(x);
  const Eigen::VectorXd phi_w = sc.plant.basis_W.eval(x);
  const double r = r_eval(x_r, t, sc.reference);

  double u_drj = 0.0;
  switch (sc.rejection.mode) {
    case RejectionMode::Off:
      break;
    case RejectionMode::Direct:
      if (!ctx.direct_zero) {
        const Eigen::VectorXd d_u_hat = d_u_hat_from(z, x, sc.observer);
        u_drj = -recover_d_hat(d_u_hat, x, r, k_x, k_r, V, W, phi_v, phi_w,
                               sc.reference);
      }
      break;
    case RejectionMode::Integrating:
      u_drj = y[L.u_drj];
      break;
  }
  const double u = control_law(k_x, k_r, V, W, x, r, phi_v, phi_w, u_drj);
  const double d = sc.disturbance.eval(t);

  dy.segment(L.x, L.n) = plant_deriv(x, u, d, sc.plant);
  dy.segment(L.x_r, L.n) = reference_deriv(x_r, t, sc.reference);
  const Eigen::VectorXd e = tracking_error(x, x_r);
  const AdaptationDerivs ad = adaptation_deriv(x, e, r, k_x, k_r, V, W, phi_v, phi_w,
                                               sc.gains, sc.sets, sc.plant.b,
                                               M.sign_lambda);
  dy.segment(L.k_x, L.n) = ad.k_x_dot;
  dy[L.k_r] = ad.k_r_dot;
  dy.segment(L.V, L.m_v) = ad.V_dot;
  dy.segment(L.W, L.m_w) = ad.W_dot;
  dy.segment(L.z, L.n) = observer_deriv(z, x, u, phi_v, sc.observer, sc.reference);
  dy[L.u_drj] = ctx.mode == RejectionCase::Integrate ? ctx.f_drj : 0.0;
}

StepResult advance(const ClosedLoopState& s, const SimModel& M, double h) {
  StepContext ctx = eval_step(s, M);
  StepResult out;
  out.next = rk4_step(
      ctx.start,
      [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        closed_loop_deriv(M, ctx, t, y, dy);
      },
      h);
  out.start = std::move(ctx.start);
  out.mode = ctx.mode;
  out.diag = std::move(ctx.diag);
  return out;
}

std::vector<std::string> log_columns(int n, int m_v, int m_w) {
  std::vector<std::string> cols;
  cols.push_back("t");
  auto block = [&](const std::string& stem, int count) {
    for (int i = 1; i <= count; ++i) cols.push_back(stem + std::to_string(i));
  };
  block("x", n);
  block("xr", n);
  block("e", n);
  block("khx", n);
  cols.push_back("khr");
  block("vh", m_v);
  block("wh", m_w);
  cols.push_back("u");
  cols.push_back("u_drj");
  cols.push_back("mode");
  cols.push_back("d");
  block("du", n);
  block("duh", n);
  block("edu", n);
  cols.push_back("dhat");
  cols.push_back("e_d");
  cols.push_back("eta");
  cols.push_back("phi_drj");
  cols.push_back("f_drj");
  cols.push_back("lyap");
  cols.push_back("beta_adp");
  cols.push_back("dhat_dot_star");
  return cols;
}

int RunLog::col(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  throw ConfigError("log has no column \"" + name + "\"");
}

Eigen::VectorXd RunLog::series(const std::string& name) const {
  return data.col(col(name));
}

Eigen::VectorXd RunLog::block_norm(const std::string& first, int width) const {
  const int c0 = col(first + "1");
  return data.middleCols(c0, width).rowwise().norm();
}

namespace {

Eigen::RowVectorXd make_row(const StepContext& ctx, const SimModel& M, int ncols) {
  Eigen::RowVectorXd row(ncols);
  const StateLayout& L = M.layout;
  const Eigen::VectorXd& y = ctx.start.y;
  const StepDiagnostics& dg = ctx.diag;
  int c = 0;
  auto put = [&](double v) { row[c++] = v; };
  auto put_vec = [&](const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) row[c++] = v[i];
  };
  put(ctx.start.t);
  put_vec(y.segment(L.x, L.n));
  put_vec(y.segment(L.x_r, L.n));
  put_vec(y.segment(L.x, L.n) - y.segment(L.x_r, L.n));
  put_vec(y.segment(L.k_x, L.n));
  put(y[L.k_r]);
  put_vec(y.segment(L.V, L.m_v));
  put_vec(y.segment(L.W, L.m_w));
  put(dg.u);
  put(y[L.u_drj]);
  put(static_cast<double>(case_code(dg.mode)));
  put(dg.d);
  put_vec(dg.d_u);
  put_vec(dg.d_u_hat);
  put_vec(dg.e_du);
  put(dg.d_hat);
  put(dg.e_d);
  put(dg.eta);
  put(dg.phi_drj);
  put(dg.f_drj);
  put(dg.lyap);
  put(dg.beta_adp);
  put(dg.d_hat_dot_star);
  return row;
}

}  // namespace

RunLog simulate(const ScenarioConfig& sc) {
  const SimModel M = SimModel::build(sc);
  const StateLayout& L = M.layout;
  const double h = sc.sim.h;
  const long long N = M.steps;
  const long long dec = sc.sim.decimate;

  RunLog log;
  log.meta.name = sc.name;
  log.meta.mode = to_string(sc.rejection.mode);
  log.meta.k_eta = sc.rejection.k_eta;
  log.meta.u_bar = sc.rejection.u_bar;
  log.meta.f_bar = sc.rejection.f_bar;
  log.meta.observer_gain = sc.observer.gain;
  log.meta.h = h;
  log.meta.t_end = sc.sim.t_end;
  log.meta.decimate = sc.sim.decimate;
  log.meta.n = L.n;
  log.meta.m_v = L.m_v;
  log.meta.m_w = L.m_w;
  log.columns = log_columns(L.n, L.m_v, L.m_w);

  const long long logged_starts = (N - 1) / dec + 1;
  log.data.resize(logged_starts + 1, static_cast<Eigen::Index>(log.columns.size()));

  ClosedLoopState s = initial_state(M);
  Eigen::Index row = 0;
  for (long long k = 0; k < N; ++k) {
    s.t = static_cast<double>(k) * h;
    StepContext ctx = eval_step(s, M);
    if (k % dec == 0) log.data.row(row++) = make_row(ctx, M, static_cast<int>(log.columns.size()));
    ClosedLoopState next = rk4_step(
        ctx.start,
        [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
          closed_loop_deriv(M, ctx, t, y, dy);
        },
        h);
    if (next.y.lpNorm<Eigen::Infinity>() > sc.sim.divergence_guard)
      throw Diverged("state sup-norm exceeded the divergence guard", next.t);
    s = std::move(next);
  }
  s.t = static_cast<double>(N) * h;
  StepContext ctx = eval_step(s, M);
  log.data.row(row++) = make_row(ctx, M, static_cast<int>(log.columns.size()));
  return log;
}

}  // namespace dobac
