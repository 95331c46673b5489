#include "dobac/adaptive.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "dobac/errors.hpp"

namespace dobac {
namespace {

void check_spd(const Eigen::MatrixXd& M, int dim, const char* name) {
  if (M.rows() != dim || M.cols() != dim) {
    std::ostringstream os;
    os << "gains: " << name << " must be " << dim << "x" << dim;
    throw DimensionMismatch(os.str());
  }
  if (dim == 0) return;
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw ConfigError(std::string("gains: ") + name + " is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ConfigError(std::string("gains: ") + name + " is not positive definite");
}

}  // namespace

ProjectionSet ProjectionSet::from_interval(const Eigen::VectorXd& center,
                                           const Eigen::VectorXd& half_width,
                                           double margin) {
  if (center.size() != half_width.size())
    throw DimensionMismatch("projection set: center/half_width lengths differ");
  ProjectionSet s;
  s.center = center;
  s.half_width = half_width;
  s.margin = margin;
  s.alpha.resize(center.size());
  for (int i = 0; i < center.size(); ++i) {
    const double a = half_width[i] + margin;
    if (a <= 0.0) throw ConfigError("projection set: half_width + margin must be positive");
    s.alpha[i] = 2.0 / (a * a);
  }
  s.validate();
  return s;
}

void ProjectionSet::validate() const {
  if (alpha.size() != center.size())
    throw DimensionMismatch("projection set: alpha/center lengths differ");
  if ((alpha.array() <= 0.0).any())
    throw ConfigError("projection set: alpha must be positive");
  if (offset >= 0.0)
    throw ConfigError("projection set: offset must be negative");
}

double ProjectionSet::value(const Eigen::VectorXd& theta) const {
  if (theta.size() != dim())
    throw DimensionMismatch("projection set: theta dimension mismatch");
  if (dim() == 0) return offset;
  const Eigen::VectorXd d = theta - center;
  return (alpha.array() * d.array().square()).sum() + offset;
}

Eigen::VectorXd ProjectionSet::grad(const Eigen::VectorXd& theta) const {
  return 2.0 * (alpha.array() * (theta - center).array()).matrix();
}

ParamErrorBounds param_error_bounds(const ProjectionSets& sets) {
  auto block_bound = [](const ProjectionSet& s) {
    if (s.dim() == 0) return 0.0;
    return (2.0 * s.half_width.array() + s.margin).matrix().norm();
  };
  ParamErrorBounds b;
  b.b_kx = block_bound(sets.k_x);
  b.b_kr = block_bound(sets.k_r);
  b.b_V = block_bound(sets.V);
  b.b_W = block_bound(sets.W);
  return b;
}

double control_law(const Eigen::VectorXd& k_x, double k_r, const Eigen::VectorXd& V,
                   const Eigen::VectorXd& W, const Eigen::VectorXd& x, double r,
                   const Eigen::VectorXd& phi_v, const Eigen::VectorXd& phi_w,
                   double u_drj) {
  return k_x.dot(x) + k_r * r - V.dot(phi_v) - W.dot(phi_w) + u_drj;
}

Eigen::VectorXd projection(const Eigen::VectorXd& theta, const Eigen::VectorXd& y,
                           const ProjectionSet& set, double tol) {
  const double f = set.value(theta);
  if (f > 1.0 + tol) {
    std::ostringstream os;
    os << "projection: parameter outside admissible region (f = " << f << ")";
    throw OutsideSet(os.str());
  }
  if (f <= 0.0) return y;
  const Eigen::VectorXd g = set.grad(theta);
  const double gy = g.dot(y);
  if (gy <= 0.0) return y;
  return y - g * (gy * f / g.squaredNorm());
}

AdaptationDerivs adaptation_deriv(const Eigen::VectorXd& x, const Eigen::VectorXd& e,
                                  double r, const Eigen::VectorXd& k_x, double k_r,
                                  const Eigen::VectorXd& V, const Eigen::VectorXd& W,
                                  const Eigen::VectorXd& phi_v,
                                  const Eigen::VectorXd& phi_w,
                                  const AdaptationGains& gains,
                                  const ProjectionSets& sets,
                                  const Eigen::VectorXd& b, int sign_lambda) {
  const double s = e.dot(gains.P * b) * static_cast<double>(sign_lambda);
  AdaptationDerivs d;
  d.k_x_dot = gains.Gamma_x * projection(k_x, (-s) * x, sets.k_x);
  Eigen::VectorXd kr_vec(1), vr_y(1);
  kr_vec << k_r;
  vr_y << -s * r;
  d.k_r_dot = gains.gamma_r * projection(kr_vec, vr_y, sets.k_r)[0];
  d.V_dot = gains.Gamma_V * projection(V, s * phi_v, sets.V);
  d.W_dot = gains.Gamma_W * projection(W, s * phi_w, sets.W);
  return d;
}

MatchedGains solve_matching(const Eigen::MatrixXd& A, const Eigen::MatrixXd& A_r,
                            const Eigen::VectorXd& b, double Lambda, double Lambda_r) {
  if (Lambda == 0.0) throw ConfigError("matching: Lambda must be nonzero");
  const double b2 = b.squaredNorm();
  if (b2 == 0.0) throw ConfigError("matching: b must be nonzero");
  const Eigen::MatrixXd D = A_r - A;
  MatchedGains g;
  g.k_x_star = D.transpose() * b / (Lambda * b2);
  g.k_r_star = Lambda_r / Lambda;
  const double resid = (b * (Lambda * g.k_x_star.transpose()) - D).norm();
  if (resid > 1e-8 * std::max(1.0, D.norm())) {
    std::ostringstream os;
    os << "matching: (A_r - A) is not spanned by b (residual " << resid << ")";
    throw Unmatchable(os.str());
  }
  return g;
}

Eigen::MatrixXd lyapunov_q(const Eigen::MatrixXd& A_r, const Eigen::MatrixXd& P) {
  Eigen::MatrixXd Q = -(A_r.transpose() * P + P * A_r);
  Q = 0.5 * (Q + Q.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw NotLyapunov("lyapunov_q: -(A_r' P + P A_r) is not positive definite");
  return Q;
}

void validate_gains(const AdaptationGains& gains, int n, int m_v, int m_w) {
  check_spd(gains.Gamma_x, n, "Gamma_x");
  check_spd(gains.Gamma_V, m_v, "Gamma_V");
  check_spd(gains.Gamma_W, m_w, "Gamma_W");
  check_spd(gains.P, n, "P");
  if (gains.gamma_r <= 0.0) throw ConfigError("gains: gamma_r must be positive");
}

}  // namespace dobac
