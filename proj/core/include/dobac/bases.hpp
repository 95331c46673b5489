#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace dobac {

// Vector of monomial regressors phi(x): each row of `exponents` holds the
// nonnegative powers of one term, phi_j(x) = prod_i x_i^{e_ji}.
// An empty basis (zero rows) stands for "no regressor of this kind".
struct MonomialBasis {
  Eigen::MatrixXi exponents;  // size x dim

  int dim() const { return static_cast<int>(exponents.cols()); }
  int size() const { return static_cast<int>(exponents.rows()); }

  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
  // J(j,i) = d phi_j / d x_i, size() x dim().
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

  static MonomialBasis zero(int state_dim);
  static MonomialBasis single(const std::vector<int>& exps);
  // Registered names: "zero", "x1-cubed" (first-component cubic).
  static MonomialBasis named(const std::string& name, int state_dim);

  void validate() const;  // exponents must be nonnegative
};

}  // namespace dobac
