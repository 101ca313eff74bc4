#pragma once

#include "qdb/symmetry.hpp"

#include <map>
#include <string>

namespace qdb {

// Finite-alphabet instrument: per-outcome CP maps (Heisenberg Kraus lists)
// summing to a unital channel.
struct Instrument {
  int dim = 0;
  std::vector<std::string> alphabet;
  std::map<std::string, std::vector<Mat>> maps;

  QuantumChannel total() const;
  Mat outcome_superop(const std::string& label) const;  // Heisenberg
  Mat apply(const std::string& label, const Mat& X) const;
  Mat schrodinger_apply(const std::string& label, const Mat& T) const;
  Mat heisenberg_apply(const std::string& label, const Mat& X) const;
  void validate(const Tolerances& tol = default_tol()) const;
};

struct Povm {
  int dimE = 0;
  std::vector<std::string> alphabet;
  std::map<std::string, Mat> elements;

  void validate(const Tolerances& tol = default_tol()) const;
};

struct LocalReversal {
  std::map<std::string, std::string> theta;

  const std::string& apply(const std::string& label) const;
  void validate(const std::vector<std::string>& alphabet) const;
  static LocalReversal identity(const std::vector<std::string>& alphabet);
};

// Linear or anti-linear partial isometry on E.  An anti-linear operator is
// stored through its matrix part: v -> U * conj(v).
struct PartialIsometryResult {
  Mat U;
  bool antilinear = false;
  Mat initial_proj;  // U^*U
  Mat final_proj;    // UU^*
  double residual = 0.0;
  double sign = 1.0;  // for involution_S in the anti-linear case: S^2 = sign*P_V
};

// Instrument from a dilation and a POVM on E: J(a)(X) = V^*(X (x) M(a))V.
Instrument from_povm(const StinespringDilation& dil, const Povm& M,
                     const Tolerances& tol = default_tol());

struct CanonicalPovm {
  StinespringDilation dilation;
  Povm povm;  // projection valued, diagonal blocks per outcome
};

CanonicalPovm canonical_povm(const Instrument& instr);

struct IcReport {
  int rank = 0;
  bool complete = false;
};

IcReport ic_test(const Povm& M, double rank_tol = default_tol().rank);

// The four-outcome qubit POVM from the unit vectors of a regular tetrahedron.
Povm tetrahedral_povm();

// Informationally complete POVM on C^n from a qubit IC base, alphabet
// {(k,l,a): k != l}, 4n(n-1) outcomes for a 4-outcome base.
Povm build_ic_povm(int n, const Povm& base = tetrahedral_povm());

Povm tensor_povm(const Povm& M1, const Povm& M2);

struct PsiMap {
  Mat A;    // dimE x d^2, column (i*d+j) = psi_V(e_i e_j^*)
  Mat P_V;  // orthogonal projection onto Ran psi_V
};

// psi_V(X) = tr_H(V rho^{1/2} X) in E.
PsiMap psi_map(const StinespringDilation& dil, const DensityMatrix& rho,
               const Tolerances& tol = default_tol());

// Superoperator of the sandwiched map S_{V,O}: X -> V^*(X (x) O)V.
Mat cross_superop(const StinespringDilation& dil, const Mat& O);

// Partial isometry U on E with U psi_{Vhat}(X) = psi_V(j(X^*)); linear when
// J is anti-unitary, anti-linear when J is unitary.
PartialIsometryResult reversal_isometry(const StinespringDilation& dilV,
                                        const StinespringDilation& dilVhat,
                                        const DensityMatrix& rho,
                                        const SymmetryOp& J,
                                        const Tolerances& tol = default_tol());

// S with S^2 = P_V (linear case, after phase extraction) or S^2 = +-P_V
// (anti-linear case); requires detailed balance for (Phi, rho, J).
PartialIsometryResult involution_S(const StinespringDilation& dil,
                                   const DensityMatrix& rho,
                                   const SymmetryOp& J,
                                   const Tolerances& tol = default_tol());

// Reversed instrument J_hat(a) = j^{-1} o J(theta(a))^rho o j.
Instrument reverse_instrument(const Instrument& instr, const DensityMatrix& rho,
                              const SymmetryOp& J, const LocalReversal& theta,
                              const Tolerances& tol = default_tol());

struct IqdbInstrument {
  Instrument instrument;
  LocalReversal theta;
  PartialIsometryResult S;
  Povm povm;  // the doubled-alphabet POVM on E
};

// Doubled-alphabet instrument satisfying instrument-level detailed balance:
// M(+,a) = N(a)/2, M(-,a) = S^* N(a) S / 2, theta flips the sign.  The base
// defaults to the tetrahedral POVM for dimE = 2 and build_ic_povm otherwise.
IqdbInstrument build_iqdb_instrument(const QuantumChannel& Phi,
                                     const DensityMatrix& rho,
                                     const SymmetryOp& J,
                                     const Povm* base = nullptr,
                                     const Tolerances& tol = default_tol());

// Max over outcomes of the superoperator distance between J(a) and the
// reversed map.
double iqdb_check(const Instrument& instr, const DensityMatrix& rho,
                  const SymmetryOp& J, const LocalReversal& theta,
                  double tol = default_tol().residual);

}  // namespace qdb
