#pragma once

#include <Eigen/Dense>
#include <string>

#include "dobac/bases.hpp"
#include "dobac/reference.hpp"
#include "dobac/signals.hpp"

namespace dobac {

// Ground-truth plant
//   x' = A x + b Lambda (V_true' phi_V(x) + W_true' phi_W(x) + u + d(t)).
// A, Lambda, V_true, W_true are unknown to the controller; b and the sign of
// Lambda are known. phi_W collects regressors with no nominal counterpart.
struct PlantParams {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double Lambda = 1.0;  // nonzero; controller knows only its sign
  Eigen::VectorXd V_true;
  Eigen::VectorXd W_true;
  MonomialBasis basis_V;
  MonomialBasis basis_W;

  int n() const { return static_cast<int>(A.rows()); }
  void validate() const;
};

Eigen::VectorXd plant_deriv(const Eigen::VectorXd& x, double u, double d,
                            const PlantParams& p);

// The lumped input disturbance d_u of the rewritten dynamics
//   x' = A_r x + b Lambda_r (V_r' phi_V(x) + u) + d_u,
// evaluated from truth:
//   d_u = (A - A_r) x
//       + b [ (Lambda V - Lambda_r V_r)' phi_V + (Lambda - Lambda_r) u
//             + Lambda W' phi_W + Lambda d ].
Eigen::VectorXd lumped_disturbance_truth(const Eigen::VectorXd& x, double u, double d,
                                         const PlantParams& p,
                                         const ReferenceConfig& ref);

// Registered plant preset names: "msd-cubic" (mass-spring-damper with a cubic
// stiffness term folded into the V-basis).
PlantParams plant_preset(const std::string& name);

}  // namespace dobac
