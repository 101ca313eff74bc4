#pragma once

#include "qdb/channel.hpp"

namespace qdb {

// Finitely correlated state generated by a dilation and a faithful state
// invariant for the dilated channel.
struct PgfcsSpec {
  StinespringDilation dilation;
  DensityMatrix rho;

  void validate(const Tolerances& tol = default_tol()) const;
};

// n-point moment gamma^(n)(A_1 (x) ... (x) A_n) evaluated by right-to-left
// composition of the sandwiched maps X -> V^*(X (x) A)V.
cplx moment(const PgfcsSpec& spec, const std::vector<Mat>& ops);

// Pad a dilation's E with zero rows up to dimE = K.
StinespringDilation pad_dilation(const StinespringDilation& dil, int K);

// Cross transfer operator Phi_12: B(H_2, H_1) -> B(H_2, H_1),
// X -> V_1^*(X (x) 1_E)V_2, as a (d1 d2) x (d1 d2) matrix in matrix units
// (E padded to a common dimension).
Mat cross_operator(const StinespringDilation& dil1,
                   const StinespringDilation& dil2);

struct EquivalenceResult {
  bool equal = false;
  Mat U;             // unitary H_1 -> H_2 when equal
  double phi = 0.0;  // (U (x) 1)V_1 = e^{i phi} V_2 U
  double unitary_residual = 0.0;
  double intertwine_residual = 0.0;
  double rho_commute_residual = 0.0;
  double moment_gap = 0.0;  // diagnostic when not equal
  std::string reason;
};

EquivalenceResult pgfcs_equal(const PgfcsSpec& spec1, const PgfcsSpec& spec2,
                              double tol = 1e-8);

// Hilbert-Schmidt overlaps of the conditional E^{(x)n} states of the two
// specs in the direct-sum construction, for n = 1..n_max; for inequivalent
// irreducible pairs these decay toward zero.
std::vector<double> overlap_diagnostic(const PgfcsSpec& spec1,
                                       const PgfcsSpec& spec2, int n_max = 6);

}  // namespace qdb
