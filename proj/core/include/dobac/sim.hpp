#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dobac/errors.hpp"
#include "dobac/rejection.hpp"
#include "dobac/scenario.hpp"

namespace dobac {

// Offsets of the blocks of the flat closed-loop state vector
//   y = [x, x_r, k_x, k_r, V, W, z, u_drj],
// where z is the observer internal state (d_u_hat = z + l x).
struct StateLayout {
  int n = 0, m_v = 0, m_w = 0;
  int x = 0, x_r = 0, k_x = 0, k_r = 0, V = 0, W = 0, z = 0, u_drj = 0;
  int size = 0;

  static StateLayout make(int n, int m_v, int m_w);
};

struct ClosedLoopState {
  double t = 0.0;
  Eigen::VectorXd y;
};

// Scenario plus everything derived from it that every step needs: layout,
// matched gains, the certified Q, inverted adaptation gains, error bounds.
struct SimModel {
  ScenarioConfig sc;
  StateLayout layout;
  long long steps = 0;
  Eigen::MatrixXd Q;
  double lambda_min_Q = 0.0;
  MatchedGains matched;
  ParamErrorBounds bounds;
  int sign_lambda = 1;
  double bTb = 0.0;
  Eigen::MatrixXd Gx_inv, GV_inv, GW_inv;

  // Validates the scenario, then caches the derived quantities.
  static SimModel build(const ScenarioConfig& sc);
};

// Signals evaluated at the step start, before the step is taken.
struct StepDiagnostics {
  double r = 0.0, r_dot = 0.0, u = 0.0, d = 0.0;
  double d_hat = 0.0, e_d = 0.0;
  double eta = 0.0, phi_drj = 0.0, f_drj = 0.0, d_hat_dot_star = 0.0;
  double lyap = 0.0, beta_adp = 0.0;
  Eigen::VectorXd d_u, d_u_hat, e_du;
  RejectionCase mode = RejectionCase::Off;
};

// Step-start evaluation: the state with any u_drj jump applied, the frozen
// rejection decision for the coming step, and the diagnostics at that instant.
struct StepContext {
  ClosedLoopState start;
  RejectionCase mode = RejectionCase::Off;
  double f_drj = 0.0;        // integrator rate held across the step
  bool direct_zero = false;  // direct mode clamped to zero this step
  StepDiagnostics diag;
};

struct StepResult {
  ClosedLoopState start;  // post-jump step start
  ClosedLoopState next;
  RejectionCase mode = RejectionCase::Off;
  StepDiagnostics diag;
};

StepContext eval_step(const ClosedLoopState& s, const SimModel& M);

// Stage derivative of the full closed loop under the frozen step decision.
// Adaptation, projection, and (in direct mode) the estimate feedthrough are
// re-evaluated at every stage; the rejection branch and integrator rate stay
// as decided at the step start.
void closed_loop_deriv(const SimModel& M, const StepContext& ctx, double t,
                       const Eigen::VectorXd& y, Eigen::VectorXd& dy);

ClosedLoopState initial_state(const SimModel& M);

// Classic fourth-order Runge-Kutta step. Throws NonFiniteDerivative when any
// stage derivative contains NaN or Inf.
template <typename Field>
ClosedLoopState rk4_step(const ClosedLoopState& s, Field&& field, double h) {
  const Eigen::Index N = s.y.size();
  Eigen::VectorXd k1(N), k2(N), k3(N), k4(N), tmp(N);
  auto check = [](const Eigen::VectorXd& k, double t) {
    if (!k.allFinite())
      throw NonFiniteDerivative("stage derivative is not finite", t);
  };
  field(s.t, s.y, k1);
  check(k1, s.t);
  tmp = s.y + (0.5 * h) * k1;
  field(s.t + 0.5 * h, tmp, k2);
  check(k2, s.t + 0.5 * h);
  tmp = s.y + (0.5 * h) * k2;
  field(s.t + 0.5 * h, tmp, k3);
  check(k3, s.t + 0.5 * h);
  tmp = s.y + h * k3;
  field(s.t + h, tmp, k4);
  check(k4, s.t + h);
  ClosedLoopState out;
  out.t = s.t + h;
  out.y = s.y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return out;
}

// One full step: evaluate, freeze, integrate.
StepResult advance(const ClosedLoopState& s, const SimModel& M, double h);

struct RunMeta {
  std::string name;
  std::string mode;
  double k_eta = 0.0, u_bar = 0.0, f_bar = 0.0, observer_gain = 0.0;
  double h = 0.0, t_end = 0.0;
  int decimate = 1;
  int n = 0, m_v = 0, m_w = 0;
};

// Column-oriented record of one run. Column names follow the state blocks:
// t; x1..; xr1..; e1..; khx1..; khr; vh1..; wh1..; u; u_drj; mode; d; du1..;
// duh1..; edu1..; dhat; e_d; eta; phi_drj; f_drj; lyap; beta_adp;
// dhat_dot_star.
struct RunLog {
  std::string schema = "dobac-log/1";
  RunMeta meta;
  std::vector<std::string> columns;
  Eigen::MatrixXd data;  // one row per logged instant

  Eigen::Index rows() const { return data.rows(); }
  int col(const std::string& name) const;        // ConfigError when missing
  Eigen::VectorXd series(const std::string& name) const;
  Eigen::VectorXd time() const { return series("t"); }
  // Row-wise Euclidean norm over a consecutive column block (e.g. "e", n wide).
  Eigen::VectorXd block_norm(const std::string& first, int width) const;
};

std::vector<std::string> log_columns(int n, int m_v, int m_w);

// Integrate the closed loop over the configured horizon on the exact grid
// t_k = k h, logging every decimate-th step start plus the terminal instant.
// Throws Diverged when the state sup-norm passes the divergence guard.
RunLog simulate(const ScenarioConfig& sc);

}  // namespace dobac
