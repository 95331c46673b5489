#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dobac/adaptive.hpp"
#include "dobac/sim.hpp"

namespace dobac {

// Combined Lyapunov function of the tracking and parameter errors:
//   V = e'Pe + |Lambda| ( k~'Gx^-1 k~ + k_r~^2/gamma_r
//                         + V~'GV^-1 V~ + W~'GW^-1 W~ ).
double lyapunov_value(const Eigen::VectorXd& e, const Eigen::MatrixXd& P,
                      double lambda_abs, const Eigen::VectorXd& ktil_x, double ktil_r,
                      const Eigen::VectorXd& vtil, const Eigen::VectorXd& wtil,
                      const Eigen::MatrixXd& Gx_inv, double gamma_r,
                      const Eigen::MatrixXd& GV_inv, const Eigen::MatrixXd& GW_inv);

// Instantaneous bound on the estimate error contributed by parameter error:
//   beta_adp = b_kx ||x|| + b_kr |r| + b_V ||phi_V|| + b_W ||phi_W||.
double beta_adp(const ParamErrorBounds& pb, const Eigen::VectorXd& x, double r,
                const Eigen::VectorXd& phi_v, const Eigen::VectorXd& phi_w);

// Bound on |d_hat - d| given sup bounds on the observer error and on the
// rejection residual eta:
//   b_ed = beta_adp + (||b|| eps_du + |Lambda - Lambda_r| eps_eta)
//                      / (|Lambda| b'b).
double bound_e_d(double beta_adp_value, double eps_du, double eps_eta, double Lambda,
                 double Lambda_r, const Eigen::VectorXd& b);

// Bound on |d_hat_dot* - d_hat'| in terms of the observer error bound:
//   b_edd = ||b|| / (b'b) * ( (||k_x*|| + b_kx)
//                             + (b_V + ||V - V_r||) jac_v_norm
//                             + (||W|| + b_W) jac_w_norm ) * eps_du.
double bound_e_dhat_dot(const ParamErrorBounds& pb, double eps_du,
                        const Eigen::VectorXd& b, const Eigen::VectorXd& k_x_star,
                        const Eigen::VectorXd& V_true, const Eigen::VectorXd& V_r,
                        const Eigen::VectorXd& W_true, double jac_v_norm,
                        double jac_w_norm);

// Ultimate tracking-error radius guaranteed under magnitude-limited
// integral rejection:
//   eps_r = (2 / lambda_min(Q)) (b_edd / k_eta + b_ed) ||Lambda P b||.
double epsilon_r(double lambda_min_Q, double b_edd_sup, double k_eta, double b_ed_sup,
                 double Lambda, const Eigen::MatrixXd& P, const Eigen::VectorXd& b);

// Summary statistics over a closed time window of a run log. The finite-
// difference rate bound needs adjacent steps and is NaN unless decimate == 1.
struct RunMetrics {
  double t0 = 0.0, t1 = 0.0;
  long rows = 0;
  double rms_e = 0.0;       // root-mean-square of ||e||
  double sup_e = 0.0;       // sup ||e||
  double sup_u_drj = 0.0;   // sup |u_drj|
  double sup_rate_fd = 0.0; // sup |u_drj(k+1)-u_drj(k)|/h over integrate steps
  double sup_f_drj = 0.0;   // sup |f_drj|
  double sup_eta = 0.0;     // sup |eta|
  double sup_e_du = 0.0;    // sup ||e_du||
  double sup_e_d = 0.0;     // sup |d_hat - d|
  double sup_d_hat = 0.0;   // sup |d_hat|
  double sup_beta_adp = 0.0;
  double final_lyap = 0.0;
};

// Throws WindowOutOfRange unless [t0, t1] lies inside the logged range.
RunMetrics run_metrics(const RunLog& log, double t0, double t1);

// Earliest logged instant from which |vals| stays within the band. NaN when
// the series never settles inside the log.
double settling_time(const Eigen::VectorXd& t, const Eigen::VectorXd& vals,
                     double band);

// Everything the ultimate-bound certificate needs, evaluated over a window
// of a finished run: measured sups and the resulting guarantee radius.
struct TheoremBounds {
  double eps_du = 0.0;        // sup ||e_du||
  double eps_eta = 0.0;       // sup |eta|
  double jac_v_norm = 0.0;    // sup sigma_max(J_V(x))
  double jac_w_norm = 0.0;
  double b_ed_sup = 0.0;
  double b_edd_sup = 0.0;
  double epsilon_r = 0.0;
  double sup_e = 0.0;         // measured sup ||e|| over the same window
};
TheoremBounds theorem_bounds(const RunLog& log, const SimModel& M, double t0,
                             double t1);

// One run of a parameter sweep: the dotted-path override value it was run
// with, its outcome, and (on success) the full log.
struct SweepEntry {
  std::string value;
  bool ok = false;
  std::string status;  // "ok" or the failure description
  RunLog log;
};

// Run the base scenario once per override value, in parallel. Bad override
// values fail fast with ConfigError before anything runs; runtime failures
// (divergence, non-finite derivatives) are captured per entry.
std::vector<SweepEntry> sweep_runs(const ScenarioConfig& base, const std::string& key,
                                   const std::vector<std::string>& values);

}  // namespace dobac
