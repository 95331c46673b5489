#pragma once

#include <Eigen/Dense>

#include "dobac/bases.hpp"

namespace dobac {

// Admissible region for one adaptive parameter block, described by the convex
// scalar function
//   f(theta) = (theta - center)' diag(alpha) (theta - center) + offset,
// with offset = -1 so that f <= 0 well inside and f = 1 on the boundary of
// the admissible region {f <= 1}.
//
// Sets are built from a per-component half width s and an inflation margin m:
// alpha_i = 2 / (s_i + m)^2 places f = 1 exactly at center_i +- (s_i + m)
// along each axis. An empty block (zero-length center) is always interior.
struct ProjectionSet {
  Eigen::VectorXd center;
  Eigen::VectorXd alpha;       // positive weights
  double offset = -1.0;
  Eigen::VectorXd half_width;  // design half widths s (before inflation)
  double margin = 0.1;

  static ProjectionSet from_interval(const Eigen::VectorXd& center,
                                     const Eigen::VectorXd& half_width,
                                     double margin = 0.1);

  int dim() const { return static_cast<int>(center.size()); }
  double value(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd grad(const Eigen::VectorXd& theta) const;
  void validate() const;
};

struct ProjectionSets {
  ProjectionSet k_x;  // dim n
  ProjectionSet k_r;  // dim 1
  ProjectionSet V;    // dim m_V
  ProjectionSet W;    // dim m_W
};

struct AdaptationGains {
  Eigen::MatrixXd Gamma_x;  // SPD, n x n
  double gamma_r = 1.0;     // positive
  Eigen::MatrixXd Gamma_V;  // SPD, m_V x m_V
  Eigen::MatrixXd Gamma_W;  // SPD, m_W x m_W
  Eigen::MatrixXd P;        // SPD, n x n; certifies A_r through lyapunov_q
};

struct MatchedGains {
  Eigen::VectorXd k_x_star;
  double k_r_star = 0.0;
};

struct AdaptationDerivs {
  Eigen::VectorXd k_x_dot;
  double k_r_dot = 0.0;
  Eigen::VectorXd V_dot;
  Eigen::VectorXd W_dot;
};

// Worst-case per-component distance between a point of the admissible region
// and a point of the design interval: 2 s_i + margin. Vector blocks report
// the Euclidean norm of the per-component bounds.
struct ParamErrorBounds {
  double b_kx = 0.0;
  double b_kr = 0.0;
  double b_V = 0.0;
  double b_W = 0.0;
};
ParamErrorBounds param_error_bounds(const ProjectionSets& sets);

// u = k_x' x + k_r r - V' phi_V - W' phi_W + u_drj
double control_law(const Eigen::VectorXd& k_x, double k_r, const Eigen::VectorXd& V,
                   const Eigen::VectorXd& W, const Eigen::VectorXd& x, double r,
                   const Eigen::VectorXd& phi_v, const Eigen::VectorXd& phi_w,
                   double u_drj);

// Radial projection: returns y unchanged when f(theta) <= 0 or grad'y <= 0;
// otherwise removes the outward radial component scaled by f(theta):
//   y - grad (grad' y) f(theta) / |grad|^2.
// Throws OutsideSet when f(theta) > 1 + tol.
Eigen::VectorXd projection(const Eigen::VectorXd& theta, const Eigen::VectorXd& y,
                           const ProjectionSet& set, double tol = 1e-2);

// Projected gradient adaptation driven by the tracking error:
//   s = e' P b sgn(Lambda),
//   k_x' = Gamma_x proj(k_x, -x s), k_r' = gamma_r proj(k_r, -r s),
//   V'   = Gamma_V proj(V, +phi_V s), W' = Gamma_W proj(W, +phi_W s).
AdaptationDerivs adaptation_deriv(const Eigen::VectorXd& x, const Eigen::VectorXd& e,
                                  double r, const Eigen::VectorXd& k_x, double k_r,
                                  const Eigen::VectorXd& V, const Eigen::VectorXd& W,
                                  const Eigen::VectorXd& phi_v,
                                  const Eigen::VectorXd& phi_w,
                                  const AdaptationGains& gains,
                                  const ProjectionSets& sets,
                                  const Eigen::VectorXd& b, int sign_lambda);

// Ideal gains satisfying A_r = A + b Lambda k_x*' and b Lambda_r = b Lambda k_r*.
// Throws Unmatchable when (A_r - A) is not spanned by b.
MatchedGains solve_matching(const Eigen::MatrixXd& A, const Eigen::MatrixXd& A_r,
                            const Eigen::VectorXd& b, double Lambda, double Lambda_r);

// Q = -(A_r' P + P A_r), symmetrized; throws NotLyapunov unless SPD.
Eigen::MatrixXd lyapunov_q(const Eigen::MatrixXd& A_r, const Eigen::MatrixXd& P);

void validate_gains(const AdaptationGains& gains, int n, int m_v, int m_w);

}  // namespace dobac
