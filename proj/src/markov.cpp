#include "qdb/markov.hpp"

#include <cmath>

namespace qdb {

void MarkovChain::validate(const Tolerances& tol) {
  if (d <= 0 || P.rows() != d || P.cols() != d)
    throw DimensionMismatch("markov: bad transition matrix shape");
  for (int i = 0; i < d; ++i) {
    double row = 0.0;
    for (int j = 0; j < d; ++j) {
      if (P(i, j) < -1e-12)
        throw ValidationError("markov: negative transition probability");
      row += P(i, j);
    }
    if (std::abs(row - 1.0) > 1e-10)
      throw ValidationError("markov: row " + std::to_string(i) +
                            " does not sum to 1");
  }
  if (pi.size() == 0) {
    // Left fixed vector of P via the null space of (P^T - I).
    Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(d, d);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    RVec v = svd.matrixV().col(d - 1);
    if (v.sum() < 0) v = -v;
    if (v.minCoeff() < -1e-9)
      throw ValidationError("markov: stationary vector has mixed signs");
    pi = v.cwiseMax(0.0) / v.cwiseMax(0.0).sum();
  }
  if (pi.size() != d)
    throw DimensionMismatch("markov: pi has wrong length");
  if (std::abs(pi.sum() - 1.0) > 1e-10 || pi.minCoeff() < -1e-12)
    throw ValidationError("markov: pi is not a probability vector");
  double res = (pi.transpose() * P - pi.transpose()).norm();
  if (res > 1e-9)
    throw ValidationError("markov: pi is not stationary, residual " +
                          std::to_string(res));
  (void)tol;
}

void PermInvolution::validate(int d) const {
  if ((int)theta.size() != d)
    throw DimensionMismatch("involution: wrong length");
  for (int i = 0; i < d; ++i) {
    if (theta[i] < 0 || theta[i] >= d)
      throw ValidationError("involution: out of range");
    if (theta[theta[i]] != i)
      throw ValidationError("involution: not an involution at " +
                            std::to_string(i));
  }
}

PermInvolution PermInvolution::identity(int d) {
  PermInvolution out;
  out.theta.resize(d);
  for (int i = 0; i < d; ++i) out.theta[i] = i;
  return out;
}

double db_check(const MarkovChain& chain) {
  double worst = 0.0;
  for (int i = 0; i < chain.d; ++i)
    for (int j = 0; j < chain.d; ++j)
      worst = std::max(worst, std::abs(chain.pi(i) * chain.P(i, j) -
                                       chain.pi(j) * chain.P(j, i)));
  return worst;
}

double generalized_db_check(const MarkovChain& chain,
                            const PermInvolution& theta, double tol) {
  theta.validate(chain.d);
  for (int i = 0; i < chain.d; ++i)
    if (std::abs(chain.pi(theta.theta[i]) - chain.pi(i)) > tol)
      throw ThetaNotPiInvariant("generalized_db_check: pi not theta-invariant");
  double worst = 0.0;
  for (int i = 0; i < chain.d; ++i)
    for (int j = 0; j < chain.d; ++j) {
      int ti = theta.theta[i], tj = theta.theta[j];
      worst = std::max(worst, std::abs(chain.pi(tj) * chain.P(tj, ti) -
                                       chain.pi(i) * chain.P(i, j)));
    }
  return worst;
}

EmbeddedChain embed(const MarkovChain& chain) {
  for (int i = 0; i < chain.d; ++i)
    if (chain.pi(i) <= 0)
      throw NotFaithful("embed: pi has a zero entry");
  EmbeddedChain out;
  out.instrument.dim = chain.d;
  for (int a = 0; a < chain.d; ++a) {
    // One rank-one Kraus per source state keeps the total channel unital
    // while the posterior state of outcome a is still the pure e_a e_a^*.
    std::vector<Mat> ks;
    for (int i = 0; i < chain.d; ++i) {
      if (chain.P(i, a) <= 0) continue;
      Mat K = Mat::Zero(chain.d, chain.d);
      K(a, i) = std::sqrt(chain.P(i, a));
      ks.push_back(K);
    }
    std::string label = std::to_string(a);
    out.instrument.alphabet.push_back(label);
    out.instrument.maps[label] = std::move(ks);
  }
  out.rho.rho = Mat::Zero(chain.d, chain.d);
  for (int i = 0; i < chain.d; ++i) out.rho.rho(i, i) = chain.pi(i);
  return out;
}

}  // namespace qdb
