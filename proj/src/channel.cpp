#include "qdb/channel.hpp"

#include <cmath>

namespace qdb {

ChannelReport QuantumChannel::report(const Tolerances& tol) const {
  if (dim <= 0) throw ValidationError("channel: dim must be positive");
  if (kraus.empty()) throw ValidationError("channel: empty Kraus family");
  Mat sum = Mat::Zero(dim, dim);
  for (const auto& K : kraus) {
    if (K.rows() != dim || K.cols() != dim)
      throw DimensionMismatch("channel: Kraus operator has wrong shape");
    sum += K.adjoint() * K;
  }
  ChannelReport r;
  r.unital_residual = (sum - Mat::Identity(dim, dim)).norm();
  r.cp_min_choi_eigenvalue = herm_eig(choi_matrix(*this)).eigenvalues.minCoeff();
  double scale = std::max(1.0, fro(sum));
  r.pass = r.unital_residual <= 10 * tol.herm * scale &&
           r.cp_min_choi_eigenvalue >= -tol.psd * scale;
  return r;
}

void QuantumChannel::validate(const Tolerances& tol) const {
  if (!report(tol).pass)
    throw ValidationError("channel: not CP unital within tolerance");
}

Mat QuantumChannel::apply(const Mat& X) const {
  Mat out = Mat::Zero(dim, dim);
  for (const auto& K : kraus) out += K.adjoint() * X * K;
  return out;
}

Mat QuantumChannel::schrodinger_apply(const Mat& T) const {
  Mat out = Mat::Zero(dim, dim);
  for (const auto& K : kraus) out += K * T * K.adjoint();
  return out;
}

void DensityMatrix::validate(bool require_faithful, const Tolerances& tol) const {
  if (rho.rows() != rho.cols())
    throw DimensionMismatch("density: matrix must be square");
  double scale = std::max(1.0, fro(rho));
  if ((rho - rho.adjoint()).norm() > tol.herm * scale)
    throw NotHermitian("density: matrix is not Hermitian");
  auto es = herm_eig(rho, tol);
  if (es.eigenvalues.minCoeff() < -tol.psd * scale)
    throw NotPsd("density: negative eigenvalue");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9)
    throw ValidationError("density: trace is not 1");
  if (require_faithful && es.eigenvalues.minCoeff() < tol.faithful)
    throw NotFaithful("density: state is not faithful");
}

double DensityMatrix::min_eigenvalue() const {
  return herm_eig(rho).eigenvalues.minCoeff();
}

Mat sandwich_superop(const Mat& A, const Mat& B) {
  return kron(A, B.transpose());
}

Mat heisenberg_superop(const QuantumChannel& Phi) {
  const int d = Phi.dim;
  Mat S = Mat::Zero(d * d, d * d);
  for (const auto& K : Phi.kraus) S += sandwich_superop(K.adjoint(), K);
  return S;
}

Mat schrodinger_superop(const QuantumChannel& Phi) {
  const int d = Phi.dim;
  Mat S = Mat::Zero(d * d, d * d);
  for (const auto& K : Phi.kraus) S += sandwich_superop(K, K.adjoint());
  return S;
}

Mat choi_matrix(const QuantumChannel& Phi) {
  const int d = Phi.dim;
  Mat C = Mat::Zero(d * d, d * d);
  for (const auto& K : Phi.kraus) {
    Vec v = vec(K);
    C += v * v.adjoint();
  }
  return C;
}

std::vector<Mat> kraus_from_choi(const Mat& C, int dim, double cut) {
  Tolerances loose = default_tol();
  loose.herm = 1e-8;
  auto es = herm_eig(C, loose);
  if (es.eigenvalues.minCoeff() < -1e-8 * std::max(1.0, fro(C)))
    throw NotPsd("kraus_from_choi: Choi matrix is not PSD");
  std::vector<Mat> out;
  for (int i = 0; i < es.eigenvalues.size(); ++i) {
    double lam = es.eigenvalues(i);
    if (lam > cut)
      out.push_back(std::sqrt(lam) *
                    unvec(es.eigenvectors.col(i), dim, dim));
  }
  return out;
}

QuantumChannel channel_from_superop(const Mat& S_heis, int dim, double cut) {
  // Reshuffle the predual into the Choi matrix:
  // C[(i,k),(j,l)] = S_schro[(i,j),(k,l)].
  Mat S_schro = S_heis.adjoint();
  Mat C(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l)
          C(i * dim + k, j * dim + l) = S_schro(i * dim + j, k * dim + l);
  QuantumChannel Phi{dim, kraus_from_choi(C, dim, cut)};
  return Phi;
}

FixedPoint invariant_state(const QuantumChannel& Phi, const Tolerances& tol) {
  const int d = Phi.dim;
  Mat A = schrodinger_superop(Phi) - Mat::Identity(d * d, d * d);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int null_dim = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) < 1e-9 * std::max(1.0, s(0))) ++null_dim;
  FixedPoint out;
  out.unique = (null_dim <= 1);
  Mat T;
  if (out.unique) {
    Vec v = svd.matrixV().col(d * d - 1);
    T = unvec(v, d, d);
  } else {
    // Degenerate fixed space: average predual iterates of the maximally
    // mixed state to land on one PSD fixed point.
    Mat M = Mat::Identity(d, d) / d;
    T = Mat::Zero(d, d);
    const int N = 512;
    for (int k = 0; k < N; ++k) {
      T += M;
      M = Phi.schrodinger_apply(M);
    }
    T /= N;
  }
  T = (T + Mat(T.adjoint())) / 2.0;
  cplx tr = T.trace();
  if (std::abs(tr) < 1e-12)
    throw Error("invariant_state: fixed point has vanishing trace");
  T /= tr;
  out.state = DensityMatrix{T};
  out.state.validate(false, tol);
  return out;
}

cplx kms_inner(const Mat& X, const Mat& Y, const Mat& rho_sqrt) {
  return (rho_sqrt * X.adjoint() * rho_sqrt * Y).trace();
}

QuantumChannel kms_adjoint(const QuantumChannel& Phi, const DensityMatrix& rho,
                           const Tolerances& tol) {
  Mat rs = psd_sqrt(rho.rho, tol);
  Mat ris = psd_inv_sqrt(rho.rho, tol);
  QuantumChannel out;
  out.dim = Phi.dim;
  for (const auto& K : Phi.kraus)
    out.kraus.push_back(rs * K.adjoint() * ris);
  return out;
}

bool is_irreducible(const QuantumChannel& Phi, double rank_tol) {
  const int d = Phi.dim;
  const int full = d * d;
  // Span of words in the Kraus operators (empty word = identity): the
  // smallest subspace containing 1 and closed under left multiplication by
  // each generator.  Grown as an orthonormal basis with a work queue, so
  // each basis element is expanded exactly once.
  std::vector<Vec> basis;
  std::vector<Mat> queue;
  basis.push_back(vec(Mat::Identity(d, d)).normalized());
  queue.push_back(Mat::Identity(d, d) / std::sqrt((double)d));
  while (!queue.empty() && (int)basis.size() < full) {
    Mat W = std::move(queue.back());
    queue.pop_back();
    for (const auto& K : Phi.kraus) {
      Mat M = K * W;
      Vec v = vec(M);
      double scale = v.norm();
      if (scale < 1e-300) continue;
      // modified Gram-Schmidt, twice for numerical safety
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) v -= b.dot(v) * b;
      if (v.norm() > rank_tol * scale) {
        v.normalize();
        basis.push_back(v);
        queue.push_back(unvec(v, d, d));
        if ((int)basis.size() == full) break;
      }
    }
  }
  return (int)basis.size() == full;
}

MaximalCycle maximal_cycle(const QuantumChannel& Phi, const Tolerances& tol) {
  const int d = Phi.dim;
  if (!is_irreducible(Phi))
    throw NotIrreducible("maximal_cycle: channel is not irreducible");
  Mat S = heisenberg_superop(Phi);
  auto spec = eig_general(S, true);
  std::vector<int> periph;
  for (int i = 0; i < spec.eigenvalues.size(); ++i)
    if (std::abs(spec.eigenvalues(i)) >= 1.0 - tol.periph)
      periph.push_back(i);
  MaximalCycle out;
  out.period = static_cast<int>(periph.size());
  const int p = out.period;
  // The peripheral spectrum of an irreducible channel is the group of p-th
  // roots of unity, each simple.
  for (int i : periph) {
    cplx lam = spec.eigenvalues(i);
    double a = std::arg(lam) * p / (2.0 * M_PI);
    if (std::abs(a - std::round(a)) > 1e-5)
      throw PeripheralStructureViolation(
          "maximal_cycle: peripheral eigenvalues do not form a cyclic group");
  }
  if (p == 1) {
    out.projections = {Mat::Identity(d, d)};
    out.cycle_unitary = Mat::Identity(d, d);
    return out;
  }
  // The eigenvector at the primitive peripheral eigenvalue xi_p is, for an
  // irreducible channel, proportional to a unitary whose spectral
  // projections give the cyclic decomposition.
  const cplx xi = std::exp(cplx(0.0, 2.0 * M_PI / p));
  int best = -1;
  double bd = 1e30;
  for (int i : periph) {
    double dd = std::abs(spec.eigenvalues(i) - xi);
    if (dd < bd) { bd = dd; best = i; }
  }
  if (bd > 1e-6)
    throw PeripheralStructureViolation(
        "maximal_cycle: missing primitive peripheral eigenvalue");
  Mat X = unvec(spec.eigenvectors->col(best), d, d);
  // Polar part (X is proportional to a unitary up to numerical noise).
  Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat Y = svd.matrixU() * svd.matrixV().adjoint();
  // Remove the residual global phase: the spectrum of Y is a rotation of
  // the p-th roots of unity; rotate the eigenvalue nearest the positive
  // real axis to 1.
  auto yspec = eig_general(Y, false);
  cplx anchor = yspec.eigenvalues(0);
  for (int i = 0; i < yspec.eigenvalues.size(); ++i) {
    cplx lam = yspec.eigenvalues(i);
    if (std::abs(std::arg(lam)) < std::abs(std::arg(anchor)) - 1e-12)
      anchor = lam;
  }
  Y *= std::conj(anchor / std::abs(anchor));
  // P_a = (1/p) sum_k xi^{-ak} Y^k.
  std::vector<Mat> pows(p);
  pows[0] = Mat::Identity(d, d);
  for (int k = 1; k < p; ++k) pows[k] = pows[k - 1] * Y;
  out.projections.resize(p);
  for (int a = 0; a < p; ++a) {
    Mat P = Mat::Zero(d, d);
    for (int k = 0; k < p; ++k)
      P += std::pow(xi, -a * k) * pows[k];
    P /= p;
    out.projections[a] = (P + Mat(P.adjoint())) / 2.0;
  }
  // The spectrum is invariant under rotation by xi, so the labeling is
  // still ambiguous by a cyclic shift; anchor the class containing (most
  // of) the first basis vector at label 0.
  int shift = 0;
  double best_overlap = -1.0;
  for (int a = 0; a < p; ++a) {
    double ov = out.projections[a](0, 0).real();
    if (ov > best_overlap + 1e-12) { best_overlap = ov; shift = a; }
  }
  if (shift != 0) {
    std::vector<Mat> rel(p);
    for (int a = 0; a < p; ++a) rel[a] = out.projections[(a + shift) % p];
    out.projections = std::move(rel);
    Y *= std::pow(xi, -shift);
  }
  out.cycle_unitary = Y;
  return out;
}

StinespringDilation stinespring(const QuantumChannel& Phi) {
  const int d = Phi.dim;
  const int K = static_cast<int>(Phi.kraus.size());
  StinespringDilation D;
  D.dimH = d;
  D.dimE = K;
  D.V = Mat::Zero(d * K, d);
  for (int e = 0; e < K; ++e)
    for (int h = 0; h < d; ++h)
      for (int g = 0; g < d; ++g)
        D.V(h * K + e, g) = Phi.kraus[e](h, g);
  return D;
}

QuantumChannel channel_from_dilation(const StinespringDilation& dil) {
  QuantumChannel Phi;
  Phi.dim = dil.dimH;
  for (int e = 0; e < dil.dimE; ++e) {
    Mat K(dil.dimH, dil.dimH);
    for (int h = 0; h < dil.dimH; ++h)
      for (int g = 0; g < dil.dimH; ++g)
        K(h, g) = dil.V(h * dil.dimE + e, g);
    Phi.kraus.push_back(std::move(K));
  }
  return Phi;
}

}  // namespace qdb
