// Acceptance gate: twelve numbered end-to-end checks of the closed-loop
// library against its quantitative contract. Each prints exactly one
// PASS/FAIL line with the measured numbers; the exit code is the number of
// failed checks.

#include <Eigen/Dense>
#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dobac/adaptive.hpp"
#include "dobac/analysis.hpp"
#include "dobac/logio.hpp"
#include "dobac/observer.hpp"
#include "dobac/plant.hpp"
#include "dobac/reference.hpp"
#include "dobac/scenario.hpp"
#include "dobac/sim.hpp"
#include "support.hpp"

using dobac::format_double;
using dobac::RunLog;
using dobac::RunMetrics;
using dobac::ScenarioConfig;

namespace {

int g_failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << "\n";
  if (!ok) ++g_failures;
}

std::string fmt(double v) { return format_double(v); }

ScenarioConfig base_cfg() { return dobac::scenario_preset("msd-cubic-paper"); }

ScenarioConfig with_mode(dobac::RejectionMode m) {
  ScenarioConfig sc = base_cfg();
  sc.rejection.mode = m;
  return sc;
}

ScenarioConfig with_k_eta(double k) {
  ScenarioConfig sc = base_cfg();
  sc.rejection.k_eta = k;
  return sc;
}

double window_rms(const RunLog& log) { return dobac::run_metrics(log, 30.0, 50.0).rms_e; }

}  // namespace

int main() {
  const ScenarioConfig sc_base = base_cfg();
  const dobac::SimModel M = dobac::SimModel::build(sc_base);

  // Every full-length run the checks below share.
  const RunLog log_int = dobac::simulate(sc_base);
  const RunLog log_dir = dobac::simulate(with_mode(dobac::RejectionMode::Direct));
  const RunLog log_off = dobac::simulate(with_mode(dobac::RejectionMode::Off));
  const RunLog log_k10 = dobac::simulate(with_k_eta(10.0));
  const RunLog log_k100 = dobac::simulate(with_k_eta(100.0));
  const RunLog log_k1000 = dobac::simulate(with_k_eta(1000.0));
  const RunLog log_ktiny = dobac::simulate(with_k_eta(0.001));
  ScenarioConfig sc_l100 = base_cfg();
  sc_l100.observer.gain = 100.0;
  const RunLog log_l100 = dobac::simulate(sc_l100);

  // 1. The chosen quadratic form certifies the reference dynamics: the
  //    recovered Q is the identity.
  {
    const Eigen::MatrixXd Q = dobac::lyapunov_q(sc_base.reference.A_r, sc_base.gains.P);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
    const double dev = (Q - I).cwiseAbs().maxCoeff();
    const double lmin =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q).eigenvalues().minCoeff();
    verdict(1, dev <= 1e-12 && std::abs(lmin - 1.0) <= 1e-12,
            "max|Q - I| = " + fmt(dev) + ", lambda_min(Q) = " + fmt(lmin));
  }

  // 2. Matched feedback gains and their defining identities.
  {
    const dobac::MatchedGains mg =
        dobac::solve_matching(sc_base.plant.A, sc_base.reference.A_r, sc_base.reference.b,
                              sc_base.plant.Lambda, sc_base.reference.Lambda_r);
    const double want_kx = -5.0 / 12.0, want_kr = 5.0 / 6.0;
    const double dev_kx = std::max(std::abs(mg.k_x_star[0] - want_kx),
                                   std::abs(mg.k_x_star[1] - want_kx));
    const double dev_kr = std::abs(mg.k_r_star - want_kr);
    const double res_a = (sc_base.plant.A +
                          sc_base.reference.b *
                              (sc_base.plant.Lambda * mg.k_x_star.transpose()) -
                          sc_base.reference.A_r)
                             .cwiseAbs()
                             .maxCoeff();
    const double res_r =
        std::abs(sc_base.plant.Lambda * mg.k_r_star - sc_base.reference.Lambda_r);
    verdict(2,
            dev_kx <= 1e-9 && dev_kr <= 1e-9 && res_a <= 1e-10 && res_r <= 1e-10,
            "k_x* = [" + fmt(mg.k_x_star[0]) + ", " + fmt(mg.k_x_star[1]) +
                "], k_r* = " + fmt(mg.k_r_star) + ", identity residuals " + fmt(res_a) +
                ", " + fmt(res_r));
  }

  // 3. Projection keeps every adaptive block inside its set on the full run.
  {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < log_int.rows(); ++i) {
      Eigen::VectorXd k_x(2), k_r(1), V(1);
      k_x << log_int.data(i, log_int.col("khx1")), log_int.data(i, log_int.col("khx2"));
      k_r << log_int.data(i, log_int.col("khr"));
      V << log_int.data(i, log_int.col("vh1"));
      worst = std::max({worst, sc_base.sets.k_x.value(k_x), sc_base.sets.k_r.value(k_r),
                        sc_base.sets.V.value(V)});
    }
    verdict(3, worst <= 1.0 + 1e-3,
            "max membership value over all blocks and samples = " + fmt(worst));
  }

  // 4. With rejection off the loop still stays bounded under the sinusoid.
  {
    const double sup_x = std::max(log_off.series("x1").cwiseAbs().maxCoeff(),
                                  log_off.series("x2").cwiseAbs().maxCoeff());
    const bool finite = log_off.data.allFinite();
    verdict(4, finite && sup_x < 1e6,
            "sup|x| = " + fmt(sup_x) + std::string(finite ? ", all samples finite"
                                                          : ", NON-FINITE SAMPLES"));
  }

  // 5. Steady-state tracking quality ordering across the three modes.
  {
    const double rms_i = window_rms(log_int);
    const double rms_d = window_rms(log_dir);
    const double rms_off = window_rms(log_off);
    const bool ok = rms_i < rms_d && rms_d < rms_off && rms_i < 0.5 * rms_off;
    verdict(5, ok,
            "rms_e over [30,50]: integrating = " + fmt(rms_i) + ", direct = " +
                fmt(rms_d) + ", off = " + fmt(rms_off) +
                "; need integrating < direct < off and integrating < 0.5 off");
  }

  // 6. Magnitude and rate limits hold on every run performed here.
  {
    const std::vector<const RunLog*> all = {&log_int, &log_dir,  &log_off,
                                            &log_k10, &log_k100, &log_k1000,
                                            &log_ktiny, &log_l100};
    double sup_u = 0.0, sup_rate = 0.0;
    for (const RunLog* log : all) {
      const RunMetrics m = dobac::run_metrics(*log, 0.0, log->meta.t_end);
      sup_u = std::max(sup_u, m.sup_u_drj);
      if (!std::isnan(m.sup_rate_fd)) sup_rate = std::max(sup_rate, m.sup_rate_fd);
    }
    const double u_lim = 10.0 + 5.0 * 1e-3;
    const double rate_lim = 5.0 + 1e-6;
    verdict(6, sup_u <= u_lim && sup_rate <= rate_lim,
            "sup|u_drj| = " + fmt(sup_u) + " (limit " + fmt(u_lim) +
                "), sup integrating rate = " + fmt(sup_rate) + " (limit " +
                fmt(rate_lim) + ")");
  }

  // 7. Raising the leak gain shrinks the steady-state residual monotonically,
  //    and at the top gain the residual is far below the estimate scale.
  {
    const std::vector<const RunLog*> runs = {&log_int, &log_k10, &log_k100, &log_k1000};
    std::vector<double> sups;
    for (const RunLog* log : runs)
      sups.push_back(dobac::run_metrics(*log, 30.0, 50.0).sup_eta);
    bool mono = true;
    for (std::size_t i = 0; i + 1 < sups.size(); ++i)
      if (sups[i + 1] > sups[i]) mono = false;
    const double sup_dhat = dobac::run_metrics(log_k1000, 30.0, 50.0).sup_d_hat;
    const bool small = sups.back() < 0.1 * sup_dhat;
    verdict(7, mono && small,
            "sup|eta| over [30,50] = {" + fmt(sups[0]) + ", " + fmt(sups[1]) + ", " +
                fmt(sups[2]) + ", " + fmt(sups[3]) + "}, top-gain estimate scale " +
                fmt(sup_dhat));
  }

  // 8. A near-zero leak gain still respects the limits and tracks worse.
  {
    const RunMetrics m = dobac::run_metrics(log_ktiny, 0.0, 50.0);
    const double rms_tiny = window_rms(log_ktiny);
    const double rms_one = window_rms(log_int);
    const bool ok = log_ktiny.data.allFinite() && m.sup_u_drj <= 10.0 + 5e-3 &&
                    rms_tiny > rms_one;
    verdict(8, ok,
            "k_eta = 0.001: sup|u_drj| = " + fmt(m.sup_u_drj) + ", rms_e window = " +
                fmt(rms_tiny) + " vs " + fmt(rms_one) + " at k_eta = 1");
  }

  // 9. The estimator contracts at its gain on a frozen plant, and doubling
  //    the gain halves the closed-loop error plateau.
  {
    Eigen::VectorXd x(2), e0(2);
    x << 0.3, -0.2;
    e0 << 0.7, -0.4;
    const double u = 0.4;
    const Eigen::VectorXd phi = sc_base.plant.basis_V.eval(x);
    const Eigen::VectorXd g =
        sc_base.reference.A_r * x +
        sc_base.reference.b *
            (sc_base.reference.Lambda_r * (sc_base.reference.V_r.dot(phi) + u));
    const Eigen::VectorXd d_u_truth = -g;
    dobac::ClosedLoopState s;
    s.t = 0.0;
    s.y = d_u_truth + e0 - sc_base.observer.gain * x;
    auto field = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
      dy = dobac::observer_deriv(y, x, u, phi, sc_base.observer, sc_base.reference);
    };
    const double h = 1e-3;
    const int steps = 60;
    for (int k = 0; k < steps; ++k) s = dobac::rk4_step(s, field, h);
    const Eigen::VectorXd e_end =
        dobac::d_u_hat_from(s.y, x, sc_base.observer) - d_u_truth;
    const double rate = std::log(e0.norm() / e_end.norm()) / (steps * h);
    const bool rate_ok = std::abs(rate - sc_base.observer.gain) <=
                         0.05 * sc_base.observer.gain;

    const double plateau_50 = dobac::run_metrics(log_int, 30.0, 50.0).sup_e_du;
    const double plateau_100 = dobac::run_metrics(log_l100, 30.0, 50.0).sup_e_du;
    const double ratio = plateau_100 / plateau_50;
    const bool half_ok = ratio >= 0.35 && ratio <= 0.65;
    verdict(9, rate_ok && half_ok,
            "frozen-plant contraction rate = " + fmt(rate) + " (gain 50), plateau " +
                fmt(plateau_50) + " -> " + fmt(plateau_100) + " at gain 100 (ratio " +
                fmt(ratio) + ")");
  }

  // 10. The three structural identities hold along the logged trajectory:
  //     the lumped-disturbance decomposition, the estimate-error balance,
  //     and the closed form of the rate-surrogate error.
  {
    const Eigen::Index rows = log_int.rows();
    const double Lam = sc_base.plant.Lambda;
    const double Lam_r = sc_base.reference.Lambda_r;
    const Eigen::VectorXd& b = sc_base.reference.b;
    const dobac::MatchedGains& mg = M.matched;

    double r_decomp = 0.0, r_balance = 0.0;
    const Eigen::VectorXd dhat = log_int.series("dhat");
    const Eigen::VectorXd dds = log_int.series("dhat_dot_star");
    double sup_cf = 0.0, worst_rate = 0.0;

    for (Eigen::Index i = 0; i < rows; ++i) {
      Eigen::VectorXd x(2), x_r(2), k_x(2), V(1), e_du(2), d_u(2);
      x << log_int.data(i, log_int.col("x1")), log_int.data(i, log_int.col("x2"));
      x_r << log_int.data(i, log_int.col("xr1")), log_int.data(i, log_int.col("xr2"));
      k_x << log_int.data(i, log_int.col("khx1")), log_int.data(i, log_int.col("khx2"));
      V << log_int.data(i, log_int.col("vh1"));
      e_du << log_int.data(i, log_int.col("edu1")), log_int.data(i, log_int.col("edu2"));
      d_u << log_int.data(i, log_int.col("du1")), log_int.data(i, log_int.col("du2"));
      const double t = log_int.data(i, log_int.col("t"));
      const double uu = log_int.data(i, log_int.col("u"));
      const double d = log_int.data(i, log_int.col("d"));
      const double k_r = log_int.data(i, log_int.col("khr"));
      const double e_d = log_int.data(i, log_int.col("e_d"));
      const double eta = log_int.data(i, log_int.col("eta"));
      const Eigen::VectorXd phi = sc_base.plant.basis_V.eval(x);

      // Decomposition: plant flow = model flow + lumped disturbance.
      const Eigen::VectorXd lhs_flow = dobac::plant_deriv(x, uu, d, sc_base.plant);
      const Eigen::VectorXd rhs_flow =
          sc_base.reference.A_r * x + b * (Lam_r * (sc_base.reference.V_r.dot(phi) + uu)) +
          d_u;
      r_decomp = std::max(r_decomp, (lhs_flow - rhs_flow).cwiseAbs().maxCoeff());

      // Estimate-error balance in the input channel.
      const double r_cmd = dobac::r_eval(x_r, t, sc_base.reference);
      const double u_tilde = (k_x - mg.k_x_star).dot(x) + (k_r - mg.k_r_star) * r_cmd -
                             (V - sc_base.plant.V_true).dot(phi);
      const Eigen::VectorXd resid_bal =
          b * (Lam * e_d) - (b * (Lam * u_tilde) + e_du + b * ((Lam - Lam_r) * eta));
      r_balance = std::max(r_balance, resid_bal.cwiseAbs().maxCoeff());

      // Rate-surrogate error closed form against finite differences.
      if (i >= 2 && i + 2 < rows) {
        const double hh = log_int.meta.h;
        const double fd = (-dhat[i + 2] + 8.0 * dhat[i + 1] - 8.0 * dhat[i - 1] +
                           dhat[i - 2]) /
                          (12.0 * hh);
        const Eigen::MatrixXd jac = sc_base.plant.basis_V.jacobian(x);
        const double cf = dobac::e_dhat_dot_closed_form(
            k_x, V, Eigen::VectorXd(), jac, Eigen::MatrixXd::Zero(0, 2), e_du,
            sc_base.reference);
        sup_cf = std::max(sup_cf, std::abs(cf));
        worst_rate = std::max(worst_rate, std::abs((dds[i] - fd) - cf));
      }
    }
    const double rel_rate = worst_rate / sup_cf;
    verdict(10, r_decomp <= 1e-12 && r_balance <= 1e-9 && rel_rate <= 5e-2,
            "decomposition residual = " + fmt(r_decomp) + ", balance residual = " +
                fmt(r_balance) + ", rate-surrogate relative residual = " + fmt(rel_rate));
  }

  // 11. The ultimate-bound certificate holds after settling, with margin.
  {
    const dobac::TheoremBounds tb = dobac::theorem_bounds(log_int, M, 30.0, 50.0);
    const double sup_u_win = dobac::run_metrics(log_int, 30.0, 50.0).sup_u_drj;
    const bool unsaturated = sup_u_win < sc_base.rejection.u_bar;
    const double ratio = tb.epsilon_r / tb.sup_e;
    verdict(11, unsaturated && tb.sup_e <= tb.epsilon_r,
            "sup||e|| = " + fmt(tb.sup_e) + " <= epsilon_r = " + fmt(tb.epsilon_r) +
                " (looseness ratio " + fmt(ratio) + ", sup|u_drj| = " + fmt(sup_u_win) +
                " < " + fmt(sc_base.rejection.u_bar) + ")");
  }

  // 12. The integrator shows its fourth-order convergence on a linear flow.
  {
    const Eigen::MatrixXd A = sc_base.reference.A_r;
    Eigen::VectorXd y0(2);
    y0 << 1.0, -0.5;
    const Eigen::VectorXd exact = testsup::expm_series(A) * y0;
    auto err_at = [&](double h) {
      dobac::ClosedLoopState s;
      s.t = 0.0;
      s.y = y0;
      auto field = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        dy = A * y;
      };
      const int steps = static_cast<int>(std::llround(1.0 / h));
      for (int k = 0; k < steps; ++k) s = dobac::rk4_step(s, field, h);
      return (s.y - exact).norm();
    };
    const double e1 = err_at(0.1), e2 = err_at(0.05), e3 = err_at(0.025);
    const double r1 = e1 / e2, r2 = e2 / e3;
    const double need = std::pow(2.0, 3.9);
    verdict(12, r1 >= need && r2 >= need,
            "error ratios per halving = " + fmt(r1) + ", " + fmt(r2) +
                " (need >= " + fmt(need) + ")");
  }

  std::cout << (12 - g_failures) << " of 12 criteria passed\n";
  return g_failures;
}
