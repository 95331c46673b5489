#include "dobac/plant.hpp"

#include "dobac/errors.hpp"

namespace dobac {

void PlantParams::validate() const {
  const int nn = n();
  if (nn == 0 || A.cols() != nn)
    throw DimensionMismatch("plant: A must be square and nonempty");
  if (b.size() != nn) throw DimensionMismatch("plant: b must have length n");
  if (b.norm() == 0.0) throw ConfigError("plant: b must be nonzero");
  if (Lambda == 0.0) throw ConfigError("plant: Lambda must be nonzero");
  basis_V.validate();
  basis_W.validate();
  if (basis_V.size() > 0 && basis_V.dim() != nn)
    throw DimensionMismatch("plant: basis_V dimension mismatch");
  if (basis_W.size() > 0 && basis_W.dim() != nn)
    throw DimensionMismatch("plant: basis_W dimension mismatch");
  if (V_true.size() != basis_V.size())
    throw DimensionMismatch("plant: V_true length must match basis_V size");
  if (W_true.size() != basis_W.size())
    throw DimensionMismatch("plant: W_true length must match basis_W size");
}

Eigen::VectorXd plant_deriv(const Eigen::VectorXd& x, double u, double d,
                            const PlantParams& p) {
  const double matched = p.V_true.dot(p.basis_V.eval(x)) +
                         p.W_true.dot(p.basis_W.eval(x)) + u + d;
  return p.A * x + p.b * (p.Lambda * matched);
}

Eigen::VectorXd lumped_disturbance_truth(const Eigen::VectorXd& x, double u, double d,
                                         const PlantParams& p,
                                         const ReferenceConfig& ref) {
  const Eigen::VectorXd phi_v = p.basis_V.eval(x);
  const double scalar_part =
      (p.Lambda * p.V_true - ref.Lambda_r * ref.V_r).dot(phi_v) +
      (p.Lambda - ref.Lambda_r) * u + p.Lambda * p.W_true.dot(p.basis_W.eval(x)) +
      p.Lambda * d;
  return (p.A - ref.A_r) * x + p.b * scalar_part;
}

PlantParams plant_preset(const std::string& name) {
  if (name == "msd-cubic") {
    // Unit mass with linear spring/damper coefficients 0.5, cubic stiffness
    // 0.5, and input effectiveness 1.2. The cubic term rides on the x1^3
    // regressor, so its effective weight is -0.5 / 1.2.
    PlantParams p;
    p.A.resize(2, 2);
    p.A << 0.0, 1.0, -0.5, -0.5;
    p.b.resize(2);
    p.b << 0.0, 1.0;
    p.Lambda = 1.2;
    p.basis_V = MonomialBasis::named("x1-cubed", 2);
    p.basis_W = MonomialBasis::zero(2);
    p.V_true.resize(1);
    p.V_true << -0.5 / 1.2;
    p.W_true.resize(0);
    return p;
  }
  throw ConfigError("plant: unknown preset '" + name + "'");
}

}  // namespace dobac
