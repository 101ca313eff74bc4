#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Dense complex linear-algebra kernel sized for state spaces with d <= 16
// and superoperators up to 256x256.

namespace qdb {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotHermitian : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct NotPsd : Error { using Error::Error; };
struct NotFaithful : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct NotIrreducible : Error { using Error::Error; };
struct PeripheralStructureViolation : Error { using Error::Error; };
struct NotAdmissible : Error { using Error::Error; };
struct NotAntiUnitary : Error { using Error::Error; };
struct QDBFailed : Error { using Error::Error; };
struct NotPovm : Error { using Error::Error; };
struct BadBase : Error { using Error::Error; };
struct BadParity : Error { using Error::Error; };
struct SingularCase : Error { using Error::Error; };
struct UnknownPreset : Error { using Error::Error; };
struct WordCapExceeded : Error { using Error::Error; };
struct IsometryResidualTooLarge : Error { using Error::Error; };
struct PhaseExtractionFailed : Error { using Error::Error; };
struct ThetaNotPiInvariant : Error { using Error::Error; };
struct ResourceCap : Error { using Error::Error; };

struct Tolerances {
  double herm = 1e-10;       // relative, scaled by ||A||
  double psd = 1e-10;        // relative, scaled by ||A||
  double faithful = 1e-12;   // absolute floor on min eigenvalue
  double rank = 1e-10;       // relative, scaled by sigma_max
  double periph = 1e-7;      // |lambda| >= 1 - periph counts as peripheral
  double residual = 1e-9;    // generic pass/fail residual
};

inline const Tolerances& default_tol() {
  static Tolerances t;
  return t;
}

struct HermEigDecomposition {
  RVec eigenvalues;  // ascending
  Mat eigenvectors;  // orthonormal columns, deterministic phase
};

struct SpectrumResult {
  Vec eigenvalues;  // sorted by (-|lambda|, arg lambda)
  std::optional<Mat> eigenvectors;
};

HermEigDecomposition herm_eig(const Mat& A, const Tolerances& tol = default_tol());

SpectrumResult eig_general(const Mat& A, bool want_vectors = false);

Mat psd_sqrt(const Mat& A, const Tolerances& tol = default_tol());
Mat psd_inv_sqrt(const Mat& A, const Tolerances& tol = default_tol());

Mat pinv(const Mat& A, double rank_tol = default_tol().rank);

Mat kron(const Mat& A, const Mat& B);

// T acts on H (x) E with H the major index; returns the E-side reduction.
Mat partial_trace_H(const Mat& T, int dimH, int dimE);
Mat partial_trace_E(const Mat& T, int dimH, int dimE);

// Row-major vectorization; with this convention <vec(X),vec(Y)> = tr(X^* Y)
// and vec(A X B) = (A (x) B^T) vec(X).
Vec vec(const Mat& A);
Mat unvec(const Vec& v, int rows, int cols);

Mat matrix_unit(int d, int i, int j);

inline double fro(const Mat& A) { return A.norm(); }
inline double op_norm(const Mat& A) {
  return A.jacobiSvd().singularValues()(0);
}

Mat random_matrix(int rows, int cols, std::uint64_t seed);
Mat random_unitary(int d, std::uint64_t seed);
Mat random_hermitian(int d, std::uint64_t seed);

}  // namespace qdb
