#pragma once

#include "qdb/linalg.hpp"

namespace qdb {

struct ChannelReport {
  double unital_residual = 0.0;
  double cp_min_choi_eigenvalue = 0.0;
  bool pass = false;
};

// Kraus operators act in the Heisenberg picture: Phi(X) = sum_i K_i^* X K_i.
struct QuantumChannel {
  int dim = 0;
  std::vector<Mat> kraus;

  ChannelReport report(const Tolerances& tol = default_tol()) const;
  void validate(const Tolerances& tol = default_tol()) const;  // throws
  Mat apply(const Mat& X) const;               // Heisenberg
  Mat schrodinger_apply(const Mat& T) const;   // predual: sum_i K_i T K_i^*
};

struct DensityMatrix {
  Mat rho;

  void validate(bool require_faithful = false,
                const Tolerances& tol = default_tol()) const;
  double min_eigenvalue() const;
};

// Period p with peripheral projections P[a] onto eigenspaces of
// eigenvalue exp(2*pi*i*a/p), resolved so that sum_a P[a] = projection
// onto the peripheral subspace (identity when the channel is irreducible
// with trivial transient part).
struct MaximalCycle {
  int period = 1;
  std::vector<Mat> projections;  // projections[a] for eigenvalue xi_p^a
  Mat cycle_unitary;             // U = sum_a xi_p^a P_a, Phi(U) = xi_p U
};

// Isometry V : H -> H (x) E with Phi(X) = V^* (X (x) 1_E) V.
struct StinespringDilation {
  int dimH = 0;
  int dimE = 0;
  Mat V;  // (dimH*dimE) x dimH, H major index on the range
};

// Row-major-vec superoperator of X -> A X B.
Mat sandwich_superop(const Mat& A, const Mat& B);

Mat heisenberg_superop(const QuantumChannel& Phi);
Mat schrodinger_superop(const QuantumChannel& Phi);
Mat choi_matrix(const QuantumChannel& Phi);
// Recover a Kraus family from a (near-)PSD Choi matrix; eigenvalues below
// `cut` (absolute) are dropped.
std::vector<Mat> kraus_from_choi(const Mat& C, int dim, double cut = 1e-11);
QuantumChannel channel_from_superop(const Mat& S_heis, int dim,
                                    double cut = 1e-11);

struct FixedPoint {
  DensityMatrix state;
  bool unique = true;
};

// Invariant density matrix from the eigenvalue-1 eigenspace of the predual
// superoperator; when the fixed space has dimension > 1 the result is
// flagged non-unique and carries the Cesaro average of iterates of 1/d.
FixedPoint invariant_state(const QuantumChannel& Phi,
                           const Tolerances& tol = default_tol());

cplx kms_inner(const Mat& X, const Mat& Y, const Mat& rho_sqrt);

// KMS adjoint with respect to a faithful invariant state:
// Phi^rho(X) = rho^{-1/2} Phi_*(rho^{1/2} X rho^{1/2}) rho^{-1/2};
// realized on Kraus operators as L_i = rho^{1/2} K_i^* rho^{-1/2}.
QuantumChannel kms_adjoint(const QuantumChannel& Phi, const DensityMatrix& rho,
                           const Tolerances& tol = default_tol());

// Burnside-type test: the algebra generated by the Kraus family is all of
// M_d iff the span of words closes at dimension d^2.
bool is_irreducible(const QuantumChannel& Phi, double rank_tol = 1e-9);

MaximalCycle maximal_cycle(const QuantumChannel& Phi,
                           const Tolerances& tol = default_tol());

// Canonical dilation: E = C^K, V = stack of the K_i.
StinespringDilation stinespring(const QuantumChannel& Phi);

// Inverse of the above: slice V back into one Kraus operator per E basis
// vector.
QuantumChannel channel_from_dilation(const StinespringDilation& dil);

}  // namespace qdb
