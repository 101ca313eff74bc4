#pragma once

#include "qdb/statistics.hpp"

namespace qdb {

// Row-stochastic chain on d states with stationary distribution pi.
struct MarkovChain {
  int d = 0;
  Eigen::MatrixXd P;
  RVec pi;

  // Checks stochasticity and stationarity; solves for pi when it is empty.
  void validate(const Tolerances& tol = default_tol());
};

// Involutive permutation of the state space, theta[theta[i]] == i.
struct PermInvolution {
  std::vector<int> theta;

  void validate(int d) const;
  static PermInvolution identity(int d);
};

// max_{ij} |pi_i P_ij - pi_j P_ji|
double db_check(const MarkovChain& chain);

// max_{ij} |pi_{theta(j)} P_{theta(j)theta(i)} - pi_i P_ij|; requires pi to
// be theta-invariant (finite-window time reversal is otherwise undefined).
double generalized_db_check(const MarkovChain& chain,
                            const PermInvolution& theta, double tol = 1e-9);

// Commutative embedding: K_a = sum_i sqrt(P_ia) e_a e_i^*, rho = diag(pi),
// outcome labels "0".."d-1".  Word probabilities reproduce the chain's path
// probabilities.
struct EmbeddedChain {
  Instrument instrument;
  DensityMatrix rho;
};

EmbeddedChain embed(const MarkovChain& chain);

}  // namespace qdb
