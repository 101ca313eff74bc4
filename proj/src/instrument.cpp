#include "qdb/instrument.hpp"

#include <cmath>

namespace qdb {

QuantumChannel Instrument::total() const {
  QuantumChannel Phi;
  Phi.dim = dim;
  for (const auto& a : alphabet) {
    const auto& ks = maps.at(a);
    Phi.kraus.insert(Phi.kraus.end(), ks.begin(), ks.end());
  }
  return Phi;
}

Mat Instrument::outcome_superop(const std::string& label) const {
  Mat S = Mat::Zero(dim * dim, dim * dim);
  for (const auto& K : maps.at(label)) S += sandwich_superop(K.adjoint(), K);
  return S;
}

Mat Instrument::apply(const std::string& label, const Mat& X) const {
  Mat out = Mat::Zero(dim, dim);
  for (const auto& K : maps.at(label)) out += K.adjoint() * X * K;
  return out;
}

Mat Instrument::schrodinger_apply(const std::string& label, const Mat& T) const {
  Mat out = Mat::Zero(dim, dim);
  for (const auto& K : maps.at(label)) out += K * T * K.adjoint();
  return out;
}

Mat Instrument::heisenberg_apply(const std::string& label, const Mat& X) const {
  Mat out = Mat::Zero(dim, dim);
  for (const auto& K : maps.at(label)) out += K.adjoint() * X * K;
  return out;
}

void Instrument::validate(const Tolerances& tol) const {
  if ((int)alphabet.size() != (int)maps.size())
    throw ValidationError("instrument: alphabet/maps mismatch");
  for (const auto& a : alphabet)
    if (!maps.count(a))
      throw ValidationError("instrument: missing maps for outcome " + a);
  total().validate(tol);
}

void Povm::validate(const Tolerances& tol) const {
  Mat sum = Mat::Zero(dimE, dimE);
  for (const auto& a : alphabet) {
    const Mat& M = elements.at(a);
    if (M.rows() != dimE || M.cols() != dimE)
      throw DimensionMismatch("povm: element has wrong shape");
    double scale = std::max(1.0, fro(M));
    if ((M - M.adjoint()).norm() > tol.herm * scale)
      throw NotPovm("povm: element not Hermitian: " + a);
    if (herm_eig(M, tol).eigenvalues.minCoeff() < -tol.psd * scale)
      throw NotPovm("povm: element not PSD: " + a);
    sum += M;
  }
  if ((sum - Mat::Identity(dimE, dimE)).norm() > 1e-9 * dimE)
    throw NotPovm("povm: elements do not sum to the identity");
}

const std::string& LocalReversal::apply(const std::string& label) const {
  auto it = theta.find(label);
  if (it == theta.end())
    throw ValidationError("reversal: unknown outcome " + label);
  return it->second;
}

void LocalReversal::validate(const std::vector<std::string>& alphabet) const {
  for (const auto& a : alphabet) {
    const std::string& b = apply(a);
    if (apply(b) != a)
      throw ValidationError("reversal: theta is not an involution at " + a);
  }
}

LocalReversal LocalReversal::identity(const std::vector<std::string>& alphabet) {
  LocalReversal t;
  for (const auto& a : alphabet) t.theta[a] = a;
  return t;
}

Instrument from_povm(const StinespringDilation& dil, const Povm& M,
                     const Tolerances& tol) {
  if (M.dimE != dil.dimE)
    throw DimensionMismatch("from_povm: POVM lives on the wrong E");
  M.validate(tol);
  Instrument out;
  out.dim = dil.dimH;
  out.alphabet = M.alphabet;
  const int d = dil.dimH, K = dil.dimE;
  for (const auto& a : M.alphabet) {
    // M(a) = sum_m lambda_m w w^*  gives Kraus  L_m = sqrt(lambda_m) (1 (x) w^*) V.
    auto es = herm_eig(M.elements.at(a), tol);
    std::vector<Mat> ks;
    for (int m = 0; m < es.eigenvalues.size(); ++m) {
      double lam = es.eigenvalues(m);
      if (lam <= 1e-12) continue;
      Mat L = Mat::Zero(d, d);
      for (int h = 0; h < d; ++h)
        for (int g = 0; g < d; ++g) {
          cplx s = 0.0;
          for (int e = 0; e < K; ++e)
            s += std::conj(es.eigenvectors(e, m)) * dil.V(h * K + e, g);
          L(h, g) = std::sqrt(lam) * s;
        }
      ks.push_back(std::move(L));
    }
    if (ks.empty()) ks.push_back(Mat::Zero(d, d));
    out.maps[a] = std::move(ks);
  }
  return out;
}

CanonicalPovm canonical_povm(const Instrument& instr) {
  int total = 0;
  for (const auto& a : instr.alphabet) total += (int)instr.maps.at(a).size();
  CanonicalPovm out;
  out.dilation.dimH = instr.dim;
  out.dilation.dimE = total;
  out.dilation.V = Mat::Zero(instr.dim * total, instr.dim);
  out.povm.dimE = total;
  out.povm.alphabet = instr.alphabet;
  int e = 0;
  for (const auto& a : instr.alphabet) {
    Mat P = Mat::Zero(total, total);
    for (const auto& K : instr.maps.at(a)) {
      for (int h = 0; h < instr.dim; ++h)
        for (int g = 0; g < instr.dim; ++g)
          out.dilation.V(h * total + e, g) = K(h, g);
      P(e, e) = 1.0;
      ++e;
    }
    out.povm.elements[a] = std::move(P);
  }
  return out;
}

IcReport ic_test(const Povm& M, double rank_tol) {
  const int n = (int)M.alphabet.size();
  Mat rows(n, M.dimE * M.dimE);
  for (int i = 0; i < n; ++i)
    rows.row(i) = vec(M.elements.at(M.alphabet[i])).transpose();
  Eigen::JacobiSVD<Mat> svd(rows);
  const auto& s = svd.singularValues();
  IcReport out;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol * s(0)) ++out.rank;
  out.complete = (out.rank == M.dimE * M.dimE);
  return out;
}

Povm tetrahedral_povm() {
  const double c = 1.0 / std::sqrt(3.0);
  const double svecs[4][3] = {{c, c, c}, {c, -c, -c}, {-c, c, -c}, {-c, -c, c}};
  Povm out;
  out.dimE = 2;
  for (int a = 0; a < 4; ++a) {
    Mat N(2, 2);
    const double* s = svecs[a];
    N << cplx(1.0 + s[2], 0.0), cplx(s[0], -s[1]),
         cplx(s[0], s[1]),      cplx(1.0 - s[2], 0.0);
    N /= 4.0;
    std::string label = "t" + std::to_string(a);
    out.alphabet.push_back(label);
    out.elements[label] = std::move(N);
  }
  return out;
}

Povm build_ic_povm(int n, const Povm& base) {
  if (n < 2) throw ValidationError("build_ic_povm: n must be at least 2");
  if (base.dimE != 2 || !ic_test(base).complete)
    throw BadBase("build_ic_povm: base must be an IC qubit POVM");
  const double p = 1.0 / (n - 1);
  Povm out;
  out.dimE = n;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      if (k == l) continue;
      Mat Jkl = Mat::Zero(n, 2);
      Jkl(k, 0) = 1.0;
      Jkl(l, 1) = 1.0;
      for (const auto& a : base.alphabet) {
        Mat M = 0.5 * p * Jkl * base.elements.at(a) * Jkl.adjoint();
        std::string label =
            std::to_string(k) + "," + std::to_string(l) + "," + a;
        out.alphabet.push_back(label);
        out.elements[label] = std::move(M);
      }
    }
  return out;
}

Povm tensor_povm(const Povm& M1, const Povm& M2) {
  Povm out;
  out.dimE = M1.dimE * M2.dimE;
  for (const auto& a : M1.alphabet)
    for (const auto& b : M2.alphabet) {
      std::string label = a + "|" + b;
      out.alphabet.push_back(label);
      out.elements[label] = kron(M1.elements.at(a), M2.elements.at(b));
    }
  return out;
}

PsiMap psi_map(const StinespringDilation& dil, const DensityMatrix& rho,
               const Tolerances& tol) {
  const int d = dil.dimH, K = dil.dimE;
  Mat rs = psd_sqrt(rho.rho, tol);
  if (herm_eig(rho.rho, tol).eigenvalues.minCoeff() < tol.faithful)
    throw NotFaithful("psi_map: rho is not faithful");
  PsiMap out;
  out.A = Mat::Zero(K, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat W = dil.V * rs * matrix_unit(d, i, j);  // H -> H (x) E
      for (int e = 0; e < K; ++e) {
        cplx s = 0.0;
        for (int h = 0; h < d; ++h) s += W(h * K + e, h);
        out.A(e, i * d + j) = s;
      }
    }
  Eigen::JacobiSVD<Mat> svd(out.A, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.rank * sv(0)) ++r;
  Mat U = svd.matrixU().leftCols(r);
  out.P_V = U * U.adjoint();
  return out;
}

Mat cross_superop(const StinespringDilation& dil, const Mat& O) {
  const int d = dil.dimH, K = dil.dimE;
  Mat S(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat X = matrix_unit(d, i, j);
      Mat XO = kron(X, O);
      Mat out = dil.V.adjoint() * XO * dil.V;
      S.col(i * d + j) = vec(out);
    }
  return S;
}

PartialIsometryResult reversal_isometry(const StinespringDilation& dilV,
                                        const StinespringDilation& dilVhat,
                                        const DensityMatrix& rho,
                                        const SymmetryOp& J,
                                        const Tolerances& tol) {
  if (dilV.dimE != dilVhat.dimE)
    throw DimensionMismatch("reversal_isometry: dilations must share E");
  const int d = dilV.dimH;
  PsiMap psiHat = psi_map(dilVhat, rho, tol);
  PsiMap psiV = psi_map(dilV, rho, tol);
  const Mat& A = psiHat.A;
  // Column (i*d+j) of B is psi_V(j(E_ij^*)).
  Mat B(dilV.dimE, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat X = J.morph(matrix_unit(d, j, i));
      Vec col = Vec::Zero(dilV.dimE);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          col += X(r, c) * psiV.A.col(r * d + c);
      B.col(i * d + j) = col;
    }
  const bool antilinear = !J.antiunitary;
  // Norm-preservation hypothesis underpinning the partial isometry.
  for (int t = 0; t < 8; ++t) {
    Vec v = random_matrix(d * d, 1, 1000 + t).col(0);
    double na = (A * v).norm();
    double nb = antilinear ? (B * v.conjugate()).norm() : (B * v).norm();
    if (std::abs(na - nb) > 1e-7 * std::max(1.0, na))
      throw IsometryResidualTooLarge(
          "reversal_isometry: norm mismatch between the two maps");
  }
  PartialIsometryResult out;
  out.antilinear = antilinear;
  Mat Ap = pinv(A, tol.rank);
  out.U = antilinear ? Mat(B * Ap.conjugate()) : Mat(B * Ap);
  out.residual = antilinear ? (out.U * A.conjugate() - B).norm()
                            : (out.U * A - B).norm();
  if (out.residual > 1e-7 * std::max(1.0, fro(B)))
    throw IsometryResidualTooLarge(
        "reversal_isometry: defining relation residual too large");
  if (antilinear) {
    out.initial_proj = out.U.transpose() * out.U.conjugate();
    out.final_proj = out.U * out.U.adjoint();
  } else {
    out.initial_proj = out.U.adjoint() * out.U;
    out.final_proj = out.U * out.U.adjoint();
  }
  return out;
}

PartialIsometryResult involution_S(const StinespringDilation& dil,
                                   const DensityMatrix& rho,
                                   const SymmetryOp& J, const Tolerances& tol) {
  QuantumChannel Phi = channel_from_dilation(dil);
  QdbResult q = qdb_check(Phi, rho, J);
  if (!q.holds)
    throw QDBFailed("involution_S: detailed balance does not hold");
  PartialIsometryResult out = reversal_isometry(dil, dil, rho, J, tol);
  const Mat& P = out.initial_proj;
  double rank = P.trace().real();
  if (!out.antilinear) {
    // U^2 is a scalar multiple of P_V on E_V; divide the phase out.
    Mat U2 = out.U * out.U;
    cplx z = (P * U2).trace() / rank;
    if (std::abs(std::abs(z) - 1.0) > 1e-6 ||
        (U2 - z * P).norm() > 1e-7 * std::max(1.0, rank))
      throw PhaseExtractionFailed("involution_S: U^2 is not scalar on E_V");
    cplx half = std::exp(cplx(0.0, -std::arg(z) / 2.0));
    out.U = half * out.U;
    out.sign = 1.0;
  } else {
    // (anti-linear U)^2 is linear with matrix U*conj(U); its scalar is a
    // sign that no phase redefinition can remove.
    Mat S2 = out.U * out.U.conjugate();
    double s = ((P * S2).trace() / rank).real();
    double sign = (s >= 0) ? 1.0 : -1.0;
    if ((S2 - sign * P).norm() > 1e-7 * std::max(1.0, rank))
      throw PhaseExtractionFailed("involution_S: U*conj(U) is not +-P_V");
    out.sign = sign;
  }
  return out;
}

Instrument reverse_instrument(const Instrument& instr, const DensityMatrix& rho,
                              const SymmetryOp& J, const LocalReversal& theta,
                              const Tolerances& tol) {
  rho.validate(true, tol);
  theta.validate(instr.alphabet);
  Instrument out;
  out.dim = instr.dim;
  out.alphabet = instr.alphabet;
  for (const auto& a : instr.alphabet) {
    Mat S = instr.outcome_superop(theta.apply(a));
    Mat S_hat = reversed_map_superop(S, rho.rho, J, tol);
    out.maps[a] = channel_from_superop(S_hat, instr.dim).kraus;
    if (out.maps[a].empty()) out.maps[a].push_back(Mat::Zero(instr.dim, instr.dim));
  }
  return out;
}

IqdbInstrument build_iqdb_instrument(const QuantumChannel& Phi,
                                     const DensityMatrix& rho,
                                     const SymmetryOp& J, const Povm* base,
                                     const Tolerances& tol) {
  StinespringDilation dil = stinespring(Phi);
  IqdbInstrument out;
  out.S = involution_S(dil, rho, J, tol);
  double rank = out.S.initial_proj.trace().real();
  if (std::abs(rank - dil.dimE) > 1e-6)
    throw ValidationError(
        "build_iqdb_instrument: Kraus family is linearly dependent, the "
        "doubled POVM would not normalize");
  Povm N;
  if (base) {
    N = *base;
  } else {
    N = (dil.dimE == 2) ? tetrahedral_povm() : build_ic_povm(dil.dimE);
  }
  if (N.dimE != dil.dimE)
    throw DimensionMismatch("build_iqdb_instrument: base POVM dimension");
  out.povm.dimE = dil.dimE;
  for (const auto& a : N.alphabet) {
    const Mat& Na = N.elements.at(a);
    Mat flipped;
    if (out.S.antilinear)
      flipped = out.S.U.transpose() * Na.conjugate() * out.S.U.conjugate();
    else
      flipped = out.S.U.adjoint() * Na * out.S.U;
    std::string plus = "+," + a, minus = "-," + a;
    out.povm.alphabet.push_back(plus);
    out.povm.alphabet.push_back(minus);
    out.povm.elements[plus] = Na / 2.0;
    out.povm.elements[minus] = flipped / 2.0;
    out.theta.theta[plus] = minus;
    out.theta.theta[minus] = plus;
  }
  out.instrument = from_povm(dil, out.povm, tol);
  return out;
}

double iqdb_check(const Instrument& instr, const DensityMatrix& rho,
                  const SymmetryOp& J, const LocalReversal& theta, double tol) {
  Admissibility adm = is_admissible(J, instr.total(), rho, 1e-6);
  if (!adm.admissible)
    throw NotAdmissible("iqdb_check: J is not admissible for this channel");
  theta.validate(instr.alphabet);
  double worst = 0.0;
  for (const auto& a : instr.alphabet) {
    Mat S = instr.outcome_superop(a);
    Mat S_rev = reversed_map_superop(instr.outcome_superop(theta.apply(a)),
                                     rho.rho, J, default_tol());
    worst = std::max(worst, (S - S_rev).norm());
  }
  (void)tol;
  return worst;
}

}  // namespace qdb
