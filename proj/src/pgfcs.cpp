#include "qdb/pgfcs.hpp"

#include <cmath>

namespace qdb {

void PgfcsSpec::validate(const Tolerances& tol) const {
  rho.validate(true, tol);
  QuantumChannel Phi = channel_from_dilation(dilation);
  if ((Phi.schrodinger_apply(rho.rho) - rho.rho).norm() > 1e-8)
    throw ValidationError("pgfcs: rho is not invariant for the dilation");
}

cplx moment(const PgfcsSpec& spec, const std::vector<Mat>& ops) {
  const auto& dil = spec.dilation;
  for (const auto& A : ops)
    if (A.rows() != dil.dimE || A.cols() != dil.dimE)
      throw DimensionMismatch("moment: operator has wrong dimension");
  Mat X = Mat::Identity(dil.dimH, dil.dimH);
  for (auto it = ops.rbegin(); it != ops.rend(); ++it)
    X = dil.V.adjoint() * kron(X, *it) * dil.V;
  return (spec.rho.rho * X).trace();
}

StinespringDilation pad_dilation(const StinespringDilation& dil, int K) {
  if (K < dil.dimE)
    throw DimensionMismatch("pad_dilation: cannot shrink E");
  if (K == dil.dimE) return dil;
  StinespringDilation out;
  out.dimH = dil.dimH;
  out.dimE = K;
  out.V = Mat::Zero(dil.dimH * K, dil.dimH);
  for (int h = 0; h < dil.dimH; ++h)
    for (int e = 0; e < dil.dimE; ++e)
      out.V.row(h * K + e) = dil.V.row(h * dil.dimE + e);
  return out;
}

Mat cross_operator(const StinespringDilation& dil1,
                   const StinespringDilation& dil2) {
  const int K = std::max(dil1.dimE, dil2.dimE);
  StinespringDilation V1 = pad_dilation(dil1, K);
  StinespringDilation V2 = pad_dilation(dil2, K);
  const int d1 = V1.dimH, d2 = V2.dimH;
  Mat S(d1 * d2, d1 * d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) {
      Mat X = Mat::Zero(d1, d2);
      X(i, j) = 1.0;
      Mat out = V1.V.adjoint() * kron(X, Mat::Identity(K, K)) * V2.V;
      S.col(i * d2 + j) = vec(out);
    }
  return S;
}

namespace {

double moment_gap_probe(const PgfcsSpec& s1, const PgfcsSpec& s2) {
  const int K = std::max(s1.dilation.dimE, s2.dilation.dimE);
  PgfcsSpec p1{pad_dilation(s1.dilation, K), s1.rho};
  PgfcsSpec p2{pad_dilation(s2.dilation, K), s2.rho};
  double gap = 0.0;
  std::uint64_t seed = 7;
  for (int n = 1; n <= 3; ++n)
    for (int rep = 0; rep < 6; ++rep) {
      std::vector<Mat> ops;
      for (int i = 0; i < n; ++i) {
        Mat A = random_hermitian(K, ++seed);
        ops.push_back(A / std::max(1.0, fro(A)));
      }
      gap = std::max(gap, std::abs(moment(p1, ops) - moment(p2, ops)));
    }
  return gap;
}

}  // namespace

EquivalenceResult pgfcs_equal(const PgfcsSpec& spec1, const PgfcsSpec& spec2,
                              double tol) {
  spec1.validate();
  spec2.validate();
  QuantumChannel Phi1 = channel_from_dilation(spec1.dilation);
  QuantumChannel Phi2 = channel_from_dilation(spec2.dilation);
  if (!is_irreducible(Phi1) || !is_irreducible(Phi2))
    throw NotIrreducible("pgfcs_equal: both channels must be irreducible");
  EquivalenceResult out;
  const int d1 = spec1.dilation.dimH, d2 = spec2.dilation.dimH;
  if (d1 != d2) {
    // An intertwining isometry between irreducible dilations is unitary, so
    // unequal dimensions decide the question immediately.
    out.reason = "hilbert space dimensions differ";
    out.moment_gap = moment_gap_probe(spec1, spec2);
    return out;
  }
  Mat C21 = cross_operator(spec2.dilation, spec1.dilation);
  auto spec = eig_general(C21, true);
  cplx lam = spec.eigenvalues(0);
  if (std::abs(lam) < 1.0 - 1e-6) {
    out.reason = "no peripheral eigenvalue of the cross operator";
    out.moment_gap = moment_gap_probe(spec1, spec2);
    return out;
  }
  Mat X = unvec(spec.eigenvectors->col(0), d2, d1);
  Mat U = X / op_norm(X);
  const int K = std::max(spec1.dilation.dimE, spec2.dilation.dimE);
  Mat V1 = pad_dilation(spec1.dilation, K).V;
  Mat V2 = pad_dilation(spec2.dilation, K).V;
  Mat lhs = kron(U, Mat::Identity(K, K)) * V1;
  Mat rhs = V2 * U;
  cplx phase = (rhs.adjoint() * lhs).trace();
  phase = (std::abs(phase) > 0) ? phase / std::abs(phase) : cplx(1.0);
  out.phi = std::arg(phase);
  out.U = U;
  out.unitary_residual =
      (U.adjoint() * U - Mat::Identity(d1, d1)).norm();
  out.intertwine_residual = (lhs - phase * rhs).norm();
  out.rho_commute_residual = (U * spec1.rho.rho - spec2.rho.rho * U).norm();
  out.equal = out.unitary_residual <= tol && out.intertwine_residual <= tol &&
              out.rho_commute_residual <= tol;
  if (!out.equal) {
    out.reason = "residual verification failed";
    out.moment_gap = moment_gap_probe(spec1, spec2);
  }
  return out;
}

std::vector<double> overlap_diagnostic(const PgfcsSpec& spec1,
                                       const PgfcsSpec& spec2, int n_max) {
  const int K = std::max(spec1.dilation.dimE, spec2.dilation.dimE);
  StinespringDilation D1 = pad_dilation(spec1.dilation, K);
  StinespringDilation D2 = pad_dilation(spec2.dilation, K);
  const int d1 = D1.dimH, d2 = D2.dimH, D = d1 + d2;
  // Direct sum V = V_1 (+) V_2 on H = H_1 (+) H_2 with rho = (rho_1 (+) rho_2)/2.
  Mat V = Mat::Zero(D * K, D);
  for (int h = 0; h < d1; ++h)
    for (int e = 0; e < K; ++e)
      for (int g = 0; g < d1; ++g)
        V(h * K + e, g) = D1.V(h * K + e, g);
  for (int h = 0; h < d2; ++h)
    for (int e = 0; e < K; ++e)
      for (int g = 0; g < d2; ++g)
        V((d1 + h) * K + e, d1 + g) = D2.V(h * K + e, g);
  Mat rho = Mat::Zero(D, D);
  rho.topLeftCorner(d1, d1) = spec1.rho.rho / 2.0;
  rho.bottomRightCorner(d2, d2) = spec2.rho.rho / 2.0;
  Mat rs = psd_sqrt(rho);

  std::vector<double> overlaps;
  // W_n : H -> H (x) E^n, grown one tensor leg at a time (newest leg first).
  Mat W = V;
  long Kn = K;
  for (int n = 1; n <= n_max; ++n) {
    Mat M = W * rs;  // (D*K^n) x D
    // Conditional E^n states of the two blocks.
    Mat g1 = Mat::Zero(Kn, Kn), g2 = Mat::Zero(Kn, Kn);
    for (int h = 0; h < D; ++h) {
      Mat Mh = M.middleRows((long)h * Kn, Kn);
      if (h < d1)
        g1 += Mh * Mh.adjoint();
      else
        g2 += Mh * Mh.adjoint();
    }
    g1 *= 2.0;
    g2 *= 2.0;
    overlaps.push_back(std::abs((g1.adjoint() * g2).trace()));
    if (n == n_max) break;
    // W_{n+1}[(h*K+e)*K^n + eo, g] = sum_g' V[h*K+e, g'] W_n[g'*K^n + eo, g].
    Mat Wn = Mat::Zero((long)D * K * Kn, D);
    for (int h = 0; h < D; ++h)
      for (int e = 0; e < K; ++e)
        for (int gp = 0; gp < D; ++gp) {
          cplx v = V(h * K + e, gp);
          if (v == cplx(0.0)) continue;
          Wn.middleRows(((long)(h * K + e)) * Kn, Kn) +=
              v * W.middleRows((long)gp * Kn, Kn);
        }
    W = std::move(Wn);
    Kn *= K;
  }
  return overlaps;
}

}  // namespace qdb
