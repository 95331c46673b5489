#pragma once

#include <Eigen/Dense>

#include "dobac/bases.hpp"
#include "dobac/reference.hpp"

namespace dobac {

// Reduced-order extended-state observer for the lumped disturbance d_u of the
// rewritten dynamics x' = A_r x + b Lambda_r (V_r' phi_V(x) + u) + d_u.
// The estimate is d_u_hat = z + l x with internal state z driven by
//   z' = -l (A_r x + b Lambda_r (V_r' phi_V(x) + u) + d_u_hat),
// which yields the exact error dynamics e_du' = -l e_du - d_u'.
struct ObserverConfig {
  double gain = 50.0;  // l > 0
};

inline Eigen::VectorXd d_u_hat_from(const Eigen::VectorXd& z, const Eigen::VectorXd& x,
                                    const ObserverConfig& obs) {
  return z + obs.gain * x;
}

Eigen::VectorXd observer_deriv(const Eigen::VectorXd& z, const Eigen::VectorXd& x,
                               double u, const Eigen::VectorXd& phi_v,
                               const ObserverConfig& obs, const ReferenceConfig& ref);

// Time derivative of the estimate signal, d_u_hat' = z' + l x'. The state
// derivative x' is whatever the caller can supply; in simulation the true
// derivative is available and makes the value exact.
inline Eigen::VectorXd observer_output_derivative(const Eigen::VectorXd& z_dot,
                                                  const Eigen::VectorXd& x_dot,
                                                  const ObserverConfig& obs) {
  return z_dot + obs.gain * x_dot;
}

// Scalar disturbance estimate recovered from d_u_hat by resolving the
// span(b) relation with the least-squares row b' / (Lambda_r b'b):
//   d_hat = b'd_u_hat / (Lambda_r b'b)
//         + k_x' x + (k_r - 1) r - (V - V_r)' phi_V - W' phi_W.
double recover_d_hat(const Eigen::VectorXd& d_u_hat, const Eigen::VectorXd& x, double r,
                     const Eigen::VectorXd& k_x, double k_r, const Eigen::VectorXd& V,
                     const Eigen::VectorXd& W, const Eigen::VectorXd& phi_v,
                     const Eigen::VectorXd& phi_w, const ReferenceConfig& ref);

// Estimated state derivative with d_u_hat standing in for d_u:
//   x*' = A_r x + b Lambda_r (V_r' phi_V(x) + u) + d_u_hat.
Eigen::VectorXd x_dot_star(const Eigen::VectorXd& x, double u,
                           const Eigen::VectorXd& d_u_hat, const Eigen::VectorXd& phi_v,
                           const ReferenceConfig& ref);

// Estimated derivative of d_hat, resolved in the b direction:
//   d_hat_dot* = b'(d_u_hat') / (Lambda_r b'b)
//              + k_x'' x + k_r' r - V'' phi_V - W'' phi_W          (parameter rates)
//              + k_x' x*' + (k_r - 1) r' - (V - V_r)' J_V x*' - W' J_W x*'.
double d_hat_dot_star(const Eigen::VectorXd& d_u_hat_dot, const Eigen::VectorXd& x,
                      double r, double r_dot, const Eigen::VectorXd& xds,
                      const Eigen::VectorXd& k_x, double k_r, const Eigen::VectorXd& V,
                      const Eigen::VectorXd& W, const Eigen::VectorXd& k_x_dot,
                      double k_r_dot, const Eigen::VectorXd& V_dot,
                      const Eigen::VectorXd& W_dot, const Eigen::VectorXd& phi_v,
                      const Eigen::VectorXd& phi_w, const Eigen::MatrixXd& jac_v,
                      const Eigen::MatrixXd& jac_w, const ReferenceConfig& ref);

// Closed-form error of the estimated derivative as a function of the
// observer error e_du = d_u_hat - d_u:
//   d_hat_dot* - d_hat' = (k_x' - (V - V_r)' J_V - W' J_W) e_du.
double e_dhat_dot_closed_form(const Eigen::VectorXd& k_x, const Eigen::VectorXd& V,
                              const Eigen::VectorXd& W, const Eigen::MatrixXd& jac_v,
                              const Eigen::MatrixXd& jac_w, const Eigen::VectorXd& e_du,
                              const ReferenceConfig& ref);

}  // namespace dobac
