#include "dobac/reference.hpp"

#include <Eigen/Eigenvalues>

#include "dobac/errors.hpp"

namespace dobac {
namespace {

double max_real_eig(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
  return es.eigenvalues().real().maxCoeff();
}

}  // namespace

void validate_reference(const ReferenceConfig& cfg) {
  const int n = cfg.n();
  if (n == 0 || cfg.A_r.cols() != n)
    throw DimensionMismatch("reference: A_r must be square and nonempty");
  if (cfg.b.size() != n)
    throw DimensionMismatch("reference: b must have length n");
  if (cfg.b.norm() == 0.0) throw ConfigError("reference: b must be nonzero");
  if (cfg.Lambda_r == 0.0) throw ConfigError("reference: Lambda_r must be nonzero");
  if (max_real_eig(cfg.A_r) >= -1e-9)
    throw ConfigError("reference: A_r is not strictly Hurwitz");
  if (cfg.r_kind == RKind::FeedbackPlusSignal) {
    if (cfg.c_r.size() != n)
      throw DimensionMismatch("reference: c_r must have length n");
    const Eigen::MatrixXd closed =
        cfg.A_r + cfg.b * (cfg.Lambda_r * cfg.c_r.transpose());
    if (max_real_eig(closed) > 1e-6)
      throw ConfigError("reference: closed reference loop A_r + b*Lambda_r*c_r' is unstable");
  }
  cfg.excitation.validate();
}

double r_eval(const Eigen::VectorXd& x_r, double t, const ReferenceConfig& cfg) {
  double r = cfg.excitation.eval(t);
  if (cfg.r_kind == RKind::FeedbackPlusSignal) r += cfg.c_r.dot(x_r);
  return r;
}

double r_dot_eval(const Eigen::VectorXd& x_r, double t, const ReferenceConfig& cfg) {
  double rd = cfg.excitation.deriv(t);
  if (cfg.r_kind == RKind::FeedbackPlusSignal)
    rd += cfg.c_r.dot(reference_deriv(x_r, t, cfg));
  return rd;
}

Eigen::VectorXd reference_deriv(const Eigen::VectorXd& x_r, double t,
                                const ReferenceConfig& cfg) {
  return cfg.A_r * x_r + cfg.b * (cfg.Lambda_r * r_eval(x_r, t, cfg));
}

}  // namespace dobac
