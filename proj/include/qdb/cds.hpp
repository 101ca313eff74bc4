#pragma once

#include "qdb/symmetry.hpp"

#include <string>

namespace qdb {

// Two-Kraus channel family on C^d indexed by an involution sigma(a) = a0 - a
// of Z_d, a probability profile p with p_a + p_{sigma(a)} = 1 parametrized by
// x in [0,1]^dhat, unit phases eta_a, and the conjugation convention of K.
struct CdsParams {
  int d = 2;
  int a0 = 1;
  std::vector<double> x;
  std::vector<cplx> eta;
  bool antiunitary_K = true;

  int dhat() const;
  int sigma(int a) const {
    return (((a0 - a) % d) + d) % d;
  }
  void validate() const;
};

struct CdsChannel {
  CdsParams params;
  std::vector<double> p;
  Mat V1, V2;
  SymmetryOp J;
  QuantumChannel channel;
  DensityMatrix rho;  // always 1/d
};

// Probability profile from the cube coordinates; the four parity cases pin
// the anchors p = 1/2 and pair the remaining points across sigma.
std::vector<double> build_p(int d, int a0, const std::vector<double>& x);

CdsChannel build(const CdsParams& params);

// Matrix element Phi(e_a e_b^*) = C_{a,b} e_{a-1} e_{b-1}^*.
cplx coeff_C(const CdsParams& params, const std::vector<double>& p, int a,
             int b);

struct QdbPrediction {
  bool holds = false;
  cplx eta{1.0, 0.0};
  cplx zeta{1.0, 0.0};
};

// Detailed balance holds iff theta_a = eta_{sigma(a-1)}^# eta_a is the
// geometric progression zeta * eta^a with eta a d-th root of unity.
QdbPrediction predicted_qdb(const CdsParams& params);

// Named parameter sets: fig2a, fig2b, fig4a, fig4b take the cube
// coordinates x; table1 and fig5 derive x from (p, s).
CdsParams preset(const std::string& name, const std::vector<double>& x = {},
                 int p = 4, double s = 0.3);

}  // namespace qdb
