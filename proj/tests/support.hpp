#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "dobac/scenario.hpp"

namespace testsup {

// Matrix exponential by scaling-and-squaring over a plain Taylor series.
// Independent of any library routine so it can serve as a reference value.
inline Eigen::MatrixXd expm_series(const Eigen::MatrixXd& M) {
  const int n = static_cast<int>(M.rows());
  int squarings = 0;
  double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  Eigen::MatrixXd S = M / std::pow(2.0, squarings);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = term * S / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-22) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

// Solve A' P + P A = -Q through the Kronecker form; reference for the
// certificate algebra.
inline Eigen::MatrixXd lyap_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n * n, n * n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  // vec(A'P) = (I (x) A') vec(P); vec(PA) = (A' (x) I) vec(P)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          // column-major vec index: (row, col) -> col*n + row
          K(j * n + i, l * n + k) += (j == l ? A(k, i) : 0.0) + (i == k ? A(l, j) : 0.0);
        }
  Eigen::VectorXd q(n * n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) q[c * n + r] = -Q(r, c);
  Eigen::VectorXd p = K.fullPivLu().solve(q);
  Eigen::MatrixXd P(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) P(r, c) = p[c * n + r];
  return 0.5 * (P + P.transpose());
}

inline Eigen::VectorXd random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline dobac::ScenarioConfig paper_scenario() {
  return dobac::scenario_preset("msd-cubic-paper");
}

inline dobac::ScenarioConfig with_overrides(
    dobac::ScenarioConfig sc, const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) sc = dobac::apply_override(sc, k, v);
  return sc;
}

inline std::string tmp_path(const std::string& leaf) {
  return std::string(DOBAC_TEST_TMP) + "/" + leaf;
}

}  // namespace testsup
