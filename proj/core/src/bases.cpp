#include "dobac/bases.hpp"

#include <cmath>

#include "dobac/errors.hpp"

namespace dobac {
namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

}  // namespace

void MonomialBasis::validate() const {
  if ((exponents.array() < 0).any())
    throw ConfigError("basis: exponents must be nonnegative");
}

Eigen::VectorXd MonomialBasis::eval(const Eigen::VectorXd& x) const {
  if (x.size() != dim())
    throw DimensionMismatch("basis: state dimension mismatch");
  Eigen::VectorXd phi(size());
  for (int j = 0; j < size(); ++j) {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= ipow(x[i], exponents(j, i));
    phi[j] = v;
  }
  return phi;
}

Eigen::MatrixXd MonomialBasis::jacobian(const Eigen::VectorXd& x) const {
  if (x.size() != dim())
    throw DimensionMismatch("basis: state dimension mismatch");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(size(), dim());
  for (int j = 0; j < size(); ++j) {
    for (int i = 0; i < dim(); ++i) {
      const int e = exponents(j, i);
      if (e == 0) continue;
      double v = e * ipow(x[i], e - 1);
      for (int k = 0; k < dim(); ++k) {
        if (k == i) continue;
        v *= ipow(x[k], exponents(j, k));
      }
      J(j, i) = v;
    }
  }
  return J;
}

MonomialBasis MonomialBasis::zero(int state_dim) {
  MonomialBasis b;
  b.exponents.resize(0, state_dim);
  return b;
}

MonomialBasis MonomialBasis::single(const std::vector<int>& exps) {
  MonomialBasis b;
  b.exponents.resize(1, static_cast<int>(exps.size()));
  for (std::size_t i = 0; i < exps.size(); ++i)
    b.exponents(0, static_cast<int>(i)) = exps[i];
  b.validate();
  return b;
}

MonomialBasis MonomialBasis::named(const std::string& name, int state_dim) {
  if (name == "zero") return zero(state_dim);
  if (name == "x1-cubed") {
    std::vector<int> e(static_cast<std::size_t>(state_dim), 0);
    if (state_dim < 1) throw ConfigError("basis: x1-cubed needs state_dim >= 1");
    e[0] = 3;
    return single(e);
  }
  throw ConfigError("basis: unknown name '" + name + "'");
}

}  // namespace dobac
