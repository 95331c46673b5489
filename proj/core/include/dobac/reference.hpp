#pragma once

#include <Eigen/Dense>

#include "dobac/signals.hpp"

namespace dobac {

// Reference command r(t, x_r): either a pure external signal, or state
// feedback on the reference model plus an excitation term,
//   r = c_r' x_r + excitation(t).
enum class RKind { ExternalSignal, FeedbackPlusSignal };

// The design model the controller is built around:
//   x_r' = A_r x_r + b Lambda_r r.
// Also carries the nominal regressor weight V_r used by the rewritten plant
// form and the disturbance estimator.
struct ReferenceConfig {
  Eigen::MatrixXd A_r;      // strictly Hurwitz, n x n
  Eigen::VectorXd b;        // input direction, shared with the plant
  double Lambda_r = 1.0;    // nominal input effectiveness, nonzero
  Eigen::VectorXd V_r;      // nominal weights on the V-basis (may be empty)
  RKind r_kind = RKind::ExternalSignal;
  Eigen::VectorXd c_r;      // feedback row for FeedbackPlusSignal
  SignalSpec excitation;

  int n() const { return static_cast<int>(A_r.rows()); }
};

// Throws ConfigError unless A_r is strictly Hurwitz, b is nonzero and sized,
// Lambda_r != 0, and the closed reference loop A_r + b*Lambda_r*c_r' (when
// feedback is used) has no strictly unstable eigenvalue. A marginally stable
// closed loop is accepted: a neutrally stable loop carrying a pure
// oscillation is a legitimate tracking target.
void validate_reference(const ReferenceConfig& cfg);

double r_eval(const Eigen::VectorXd& x_r, double t, const ReferenceConfig& cfg);

// Total derivative of r along the reference trajectory:
//   r_dot = c_r' x_r' + excitation'(t)   (feedback kind)
//   r_dot = excitation'(t)               (external kind)
double r_dot_eval(const Eigen::VectorXd& x_r, double t, const ReferenceConfig& cfg);

Eigen::VectorXd reference_deriv(const Eigen::VectorXd& x_r, double t,
                                const ReferenceConfig& cfg);

inline Eigen::VectorXd tracking_error(const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& x_r) {
  return x - x_r;
}

}  // namespace dobac
