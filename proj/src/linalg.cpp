#include "qdb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace qdb {

HermEigDecomposition herm_eig(const Mat& A, const Tolerances& tol) {
  if (A.rows() != A.cols())
    throw DimensionMismatch("herm_eig: matrix must be square");
  const double scale = std::max(1.0, fro(A));
  if ((A - A.adjoint()).norm() > tol.herm * scale)
    throw NotHermitian("herm_eig: input is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Mat> es((A + A.adjoint()) / 2.0);
  if (es.info() != Eigen::Success)
    throw NoConvergence("herm_eig: eigensolver failed to converge");
  HermEigDecomposition out;
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  // Fix each eigenvector phase: largest-modulus entry made real positive.
  for (int c = 0; c < out.eigenvectors.cols(); ++c) {
    int imax = 0;
    double best = -1.0;
    for (int r = 0; r < out.eigenvectors.rows(); ++r) {
      double m = std::abs(out.eigenvectors(r, c));
      if (m > best + 1e-14) { best = m; imax = r; }
    }
    cplx z = out.eigenvectors(imax, c);
    if (std::abs(z) > 0)
      out.eigenvectors.col(c) *= std::conj(z) / std::abs(z);
  }
  return out;
}

SpectrumResult eig_general(const Mat& A, bool want_vectors) {
  if (A.rows() != A.cols())
    throw DimensionMismatch("eig_general: matrix must be square");
  Eigen::ComplexEigenSolver<Mat> es(A, want_vectors);
  if (es.info() != Eigen::Success)
    throw NoConvergence("eig_general: eigensolver failed to converge");
  const int n = static_cast<int>(A.rows());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const Vec& ev = es.eigenvalues();
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    double ma = std::abs(ev(a)), mb = std::abs(ev(b));
    if (std::abs(ma - mb) > 1e-14 * std::max(1.0, std::max(ma, mb)))
      return ma > mb;
    return std::arg(ev(a)) < std::arg(ev(b));
  });
  SpectrumResult out;
  out.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) out.eigenvalues(i) = ev(idx[i]);
  if (want_vectors) {
    Mat V(n, n);
    for (int i = 0; i < n; ++i) V.col(i) = es.eigenvectors().col(idx[i]);
    out.eigenvectors = std::move(V);
  }
  return out;
}

static HermEigDecomposition psd_eig(const Mat& A, const Tolerances& tol,
                                    const char* who) {
  auto es = herm_eig(A, tol);
  const double scale = std::max(1.0, fro(A));
  if (es.eigenvalues.minCoeff() < -tol.psd * scale)
    throw NotPsd(std::string(who) + ": negative eigenvalue beyond tolerance");
  return es;
}

Mat psd_sqrt(const Mat& A, const Tolerances& tol) {
  auto es = psd_eig(A, tol, "psd_sqrt");
  RVec s = es.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors * s.asDiagonal() * es.eigenvectors.adjoint();
}

Mat psd_inv_sqrt(const Mat& A, const Tolerances& tol) {
  auto es = psd_eig(A, tol, "psd_inv_sqrt");
  if (es.eigenvalues.minCoeff() < tol.faithful)
    throw NotFaithful("psd_inv_sqrt: matrix is singular within tolerance");
  RVec s = es.eigenvalues.cwiseSqrt().cwiseInverse();
  return es.eigenvectors * s.asDiagonal() * es.eigenvectors.adjoint();
}

Mat pinv(const Mat& A, double rank_tol) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  double cut = rank_tol * (s.size() ? s(0) : 0.0);
  RVec inv = RVec::Zero(s.size());
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Mat kron(const Mat& A, const Mat& B) {
  Mat out(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

Mat partial_trace_H(const Mat& T, int dimH, int dimE) {
  if (T.rows() != dimH * dimE || T.cols() != dimH * dimE)
    throw DimensionMismatch("partial_trace_H: size mismatch");
  Mat out = Mat::Zero(dimE, dimE);
  for (int i = 0; i < dimH; ++i)
    out += T.block(i * dimE, i * dimE, dimE, dimE);
  return out;
}

Mat partial_trace_E(const Mat& T, int dimH, int dimE) {
  if (T.rows() != dimH * dimE || T.cols() != dimH * dimE)
    throw DimensionMismatch("partial_trace_E: size mismatch");
  Mat out = Mat::Zero(dimH, dimH);
  for (int i = 0; i < dimH; ++i)
    for (int j = 0; j < dimH; ++j)
      out(i, j) = T.block(i * dimE, j * dimE, dimE, dimE).trace();
  return out;
}

Vec vec(const Mat& A) {
  Vec v(A.rows() * A.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      v(i * A.cols() + j) = A(i, j);
  return v;
}

Mat unvec(const Vec& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols)
    throw DimensionMismatch("unvec: size mismatch");
  Mat A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      A(i, j) = v(i * cols + j);
  return A;
}

Mat matrix_unit(int d, int i, int j) {
  Mat E = Mat::Zero(d, d);
  E(i, j) = 1.0;
  return E;
}

Mat random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      A(i, j) = cplx(g(rng), g(rng));
  return A;
}

Mat random_unitary(int d, std::uint64_t seed) {
  Mat A = random_matrix(d, d, seed);
  Eigen::HouseholderQR<Mat> qr(A);
  Mat Q = qr.householderQ() * Mat::Identity(d, d);
  Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the QR phase ambiguity so the distribution is Haar.
  for (int i = 0; i < d; ++i) {
    cplx r = R(i, i);
    Q.col(i) *= (std::abs(r) > 0) ? r / std::abs(r) : cplx(1.0);
  }
  return Q;
}

Mat random_hermitian(int d, std::uint64_t seed) {
  Mat A = random_matrix(d, d, seed);
  return (A + A.adjoint()) / 2.0;
}

}  // namespace qdb
