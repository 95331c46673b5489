#include "dobac/observer.hpp"

#include "dobac/errors.hpp"

namespace dobac {

Eigen::VectorXd observer_deriv(const Eigen::VectorXd& z, const Eigen::VectorXd& x,
                               double u, const Eigen::VectorXd& phi_v,
                               const ObserverConfig& obs, const ReferenceConfig& ref) {
  const Eigen::VectorXd d_u_hat = d_u_hat_from(z, x, obs);
  const Eigen::VectorXd model =
      ref.A_r * x + ref.b * (ref.Lambda_r * (ref.V_r.dot(phi_v) + u));
  return -obs.gain * (model + d_u_hat);
}

double recover_d_hat(const Eigen::VectorXd& d_u_hat, const Eigen::VectorXd& x, double r,
                     const Eigen::VectorXd& k_x, double k_r, const Eigen::VectorXd& V,
                     const Eigen::VectorXd& W, const Eigen::VectorXd& phi_v,
                     const Eigen::VectorXd& phi_w, const ReferenceConfig& ref) {
  const double resolved = ref.b.dot(d_u_hat) / (ref.Lambda_r * ref.b.squaredNorm());
  return resolved + k_x.dot(x) + (k_r - 1.0) * r - (V - ref.V_r).dot(phi_v) -
         W.dot(phi_w);
}

Eigen::VectorXd x_dot_star(const Eigen::VectorXd& x, double u,
                           const Eigen::VectorXd& d_u_hat, const Eigen::VectorXd& phi_v,
                           const ReferenceConfig& ref) {
  return ref.A_r * x + ref.b * (ref.Lambda_r * (ref.V_r.dot(phi_v) + u)) + d_u_hat;
}

double d_hat_dot_star(const Eigen::VectorXd& d_u_hat_dot, const Eigen::VectorXd& x,
                      double r, double r_dot, const Eigen::VectorXd& xds,
                      const Eigen::VectorXd& k_x, double k_r, const Eigen::VectorXd& V,
                      const Eigen::VectorXd& W, const Eigen::VectorXd& k_x_dot,
                      double k_r_dot, const Eigen::VectorXd& V_dot,
                      const Eigen::VectorXd& W_dot, const Eigen::VectorXd& phi_v,
                      const Eigen::VectorXd& phi_w, const Eigen::MatrixXd& jac_v,
                      const Eigen::MatrixXd& jac_w, const ReferenceConfig& ref) {
  const double term_obs =
      ref.b.dot(d_u_hat_dot) / (ref.Lambda_r * ref.b.squaredNorm());
  const double term_rates =
      k_x_dot.dot(x) + k_r_dot * r - V_dot.dot(phi_v) - W_dot.dot(phi_w);
  const double term_state = k_x.dot(xds) + (k_r - 1.0) * r_dot -
                            (V - ref.V_r).dot(jac_v * xds) - W.dot(jac_w * xds);
  return term_obs + term_rates + term_state;
}

double e_dhat_dot_closed_form(const Eigen::VectorXd& k_x, const Eigen::VectorXd& V,
                              const Eigen::VectorXd& W, const Eigen::MatrixXd& jac_v,
                              const Eigen::MatrixXd& jac_w, const Eigen::VectorXd& e_du,
                              const ReferenceConfig& ref) {
  Eigen::RowVectorXd row = k_x.transpose();
  if (V.size() > 0) row -= (V - ref.V_r).transpose() * jac_v;
  if (W.size() > 0) row -= W.transpose() * jac_w;
  return row.dot(e_du);
}

}  // namespace dobac
