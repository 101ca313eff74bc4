#pragma once

#include "qdb/channel.hpp"

namespace qdb {

// J acts on vectors as Jx = U x (unitary) or Jx = U conj(x) (anti-unitary,
// conjugation entrywise in the canonical basis).  All convention-sensitive
// derived quantities live here so downstream code never branches on the
// conjugation bookkeeping.
struct SymmetryOp {
  int dim = 0;
  Mat U;
  bool antiunitary = false;

  void validate(const Tolerances& tol = default_tol()) const;

  Mat Jsq() const;                    // J^2 as a linear matrix
  Mat morph(const Mat& X) const;      // j(X)
  Mat morph_inv(const Mat& X) const;  // j^{-1}(X)
  cplx sharp(cplx z) const {          // z^# = conj(z) iff anti-unitary
    return antiunitary ? std::conj(z) : z;
  }
  SymmetryOp inverse() const;
  // J' = W J for a plain unitary W (composition on the left).
  SymmetryOp left_compose(const Mat& W) const;
};

struct Admissibility {
  double rho_residual = 0.0;
  cplx eta{1.0, 0.0};
  double eta_residual = 0.0;
  bool admissible = false;
};

Admissibility is_admissible(const SymmetryOp& J, const QuantumChannel& Phi,
                            const DensityMatrix& rho,
                            double tol = default_tol().residual);

// Superoperator of j^{-1} o T^rho o j for an arbitrary CP map T given by
// its Heisenberg superoperator.
Mat reversed_map_superop(const Mat& S_heis, const Mat& rho,
                         const SymmetryOp& J,
                         const Tolerances& tol = default_tol());

// Superoperator of the reversed channel j^{-1} o Phi^rho o j.
Mat reversal_superop(const QuantumChannel& Phi, const DensityMatrix& rho,
                     const SymmetryOp& J,
                     const Tolerances& tol = default_tol());

// Reversed channel: Phi_hat = j^{-1} o Phi^rho o j, with Kraus recovered
// through the Choi matrix of the composed superoperator.
QuantumChannel reversal(const QuantumChannel& Phi, const DensityMatrix& rho,
                        const SymmetryOp& J,
                        const Tolerances& tol = default_tol());

struct QdbResult {
  bool holds = false;
  double residual = 0.0;
  Admissibility adm;
};

QdbResult qdb_check(const QuantumChannel& Phi, const DensityMatrix& rho,
                    const SymmetryOp& J, double tol = default_tol().residual);

struct ExtendedSymmetry {
  SymmetryOp J;
  cplx alpha;  // the realized p-th root of unity
  cplx eta;    // phase of the extended symmetry
  QdbResult check;
};

// For anti-unitary J satisfying QDB and a channel with maximal cycle
// (period p, cycle unitary U): J_alpha = U^n J realizes the phase
// eta * alpha for every alpha = xi_p^{2n} in the subgroup generated by
// xi_p^2.
std::vector<ExtendedSymmetry> extend_admissible(const QuantumChannel& Phi,
                                                const DensityMatrix& rho,
                                                const SymmetryOp& J,
                                                const MaximalCycle& cycle);

// Max residual of Phi(G X G^*) = G Phi(X) G^* over the matrix-unit basis.
double covariance_check(const QuantumChannel& Phi, const Mat& Gamma);

// Structured finite family of candidate symmetries: unitary/anti-unitary
// flags x index permutations x diagonal phase lattices xi_q^k.  A scan over
// this family is evidence, never a proof of non-existence.
struct StructuredJFamily {
  int dim = 0;
  bool include_unitary = true;
  bool include_antiunitary = true;
  // Permutation matrices to combine with the phases; default shifts
  // a -> a+r and reflections a -> c-a for all r, c.
  std::vector<std::vector<int>> permutations;
  int phase_denominator = 24;  // phases drawn from xi_q^k, q = this
  bool quadratic_lattice = true;  // phases xi_q^{alpha + beta*a + gamma*a^2}

  static StructuredJFamily default_family(int dim);
};

struct SearchHit {
  SymmetryOp J;
  QdbResult check;
};

std::vector<SearchHit> search_qdb(const QuantumChannel& Phi,
                                  const DensityMatrix& rho,
                                  const StructuredJFamily& family,
                                  double tol = default_tol().residual);

// Single-threaded reference used by tests and the benchmark target.
std::vector<SearchHit> search_qdb_serial(const QuantumChannel& Phi,
                                         const DensityMatrix& rho,
                                         const StructuredJFamily& family,
                                         double tol = default_tol().residual);

}  // namespace qdb
