#include "tpms/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace tpms {

namespace {

// Golub-Welsch for the Jacobi weight (1-x)^alpha (1+x)^beta on [-1,1], mapped
// to [0,1] with weight s^beta when alpha = 0.
GaussRule golub_welsch(int n, double beta) {
  const double alpha = 0.0;
  const double ab = alpha + beta;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double two_k_ab = 2.0 * k + ab;
    if (k == 0) {
      J(0, 0) = (beta - alpha) / (ab + 2.0);
    } else {
      J(k, k) = (beta * beta - alpha * alpha) / (two_k_ab * (two_k_ab + 2.0));
    }
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double tm = 2.0 * m + ab;
      double b2;
      if (m == 1.0) {
        b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
      } else {
        b2 = 4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (tm * tm * (tm + 1.0) * (tm - 1.0));
      }
      J(k, k + 1) = J(k + 1, k) = std::sqrt(b2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 =
      std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // map x in [-1,1] -> s = (1+x)/2; weight (1+x)^beta dx = 2^{beta+1} s^beta ds
  const double jac = std::exp(-(beta + 1.0) * std::log(2.0));
  for (int i = 0; i < n; ++i) {
    const double x = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.nodes[i] = 0.5 * (1.0 + x);
    rule.weights[i] = mu0 * v0 * v0 * jac;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_jacobi_rule(int n, double beta) {
  if (n < 1 || !(beta > -1.0))
    throw Error(ErrorKind::InvalidArgument, "Gauss-Jacobi rule needs n >= 1 and beta > -1");
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::unique_ptr<GaussRule>> cache;
  // thread-local front cache avoids the lock on the hot path
  thread_local std::map<std::pair<int, double>, const GaussRule*> local;
  const auto key = std::make_pair(n, beta);
  if (auto it = local.find(key); it != local.end()) return *it->second;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key];
  if (!slot) slot = std::make_unique<GaussRule>(golub_welsch(n, beta));
  local[key] = slot.get();
  return *slot;
}

}  // namespace tpms
