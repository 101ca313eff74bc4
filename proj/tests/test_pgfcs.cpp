#include "qdb/pgfcs.hpp"

#include <doctest.h>

using namespace qdb;

namespace {

QuantumChannel random_irreducible_channel(int d, int nk, std::uint64_t seed) {
  for (int tries = 0; tries < 50; ++tries) {
    Mat G = random_matrix(d * nk, d, seed + 1000 * tries);
    Eigen::HouseholderQR<Mat> qr(G);
    Mat Q = Mat(qr.householderQ()).leftCols(d);
    QuantumChannel Phi;
    Phi.dim = d;
    for (int i = 0; i < nk; ++i) Phi.kraus.push_back(Q.middleRows(i * d, d));
    if (is_irreducible(Phi) && invariant_state(Phi).state.min_eigenvalue() > 1e-6)
      return Phi;
  }
  throw NoConvergence("no irreducible sample found");
}

PgfcsSpec random_spec(int d, int nk, std::uint64_t seed) {
  auto Phi = random_irreducible_channel(d, nk, seed);
  PgfcsSpec s;
  s.dilation = stinespring(Phi);
  s.rho = invariant_state(Phi).state;
  return s;
}

PgfcsSpec gauge_rotate(const PgfcsSpec& s, const Mat& U, double phase) {
  // V' = e^{i phase} (U (x) 1) V U^*, rho' = U rho U^*
  PgfcsSpec out = s;
  int K = s.dilation.dimE;
  out.dilation.V = std::polar(1.0, phase) *
                   kron(U, Mat::Identity(K, K)) * s.dilation.V * U.adjoint();
  out.rho.rho = U * s.rho.rho * U.adjoint();
  return out;
}

}  // namespace

TEST_CASE("moment matches a dense oracle") {
  auto s = random_spec(3, 2, 3);
  // oracle: gamma(A1,A2) = tr(rho V2^* (1 (x) A2 (x) A1) V2) with
  // V2 = (V (x) 1_E) V the two-step isometry; the inner V application
  // contributes the last tensor leg
  Mat V = s.dilation.V;
  int d = 3, K = 2;
  Mat V2 = kron(V, Mat::Identity(K, K)) * V;  // d*K*K x d
  Mat A1 = random_hermitian(K, 11), A2 = random_hermitian(K, 12);
  Mat big = V2.adjoint() * kron(Mat::Identity(d, d), kron(A2, A1)) * V2;
  cplx ref = (s.rho.rho * big).trace();
  CHECK(std::abs(moment(s, {A1, A2}) - ref) < 1e-12);
  // one-point moment with A = 1 is 1
  CHECK(std::abs(moment(s, {Mat::Identity(K, K)}) - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("cross operator reduces to the transfer operator on the diagonal") {
  auto s = random_spec(3, 2, 5);
  Mat C = cross_operator(s.dilation, s.dilation);
  QuantumChannel Phi = channel_from_dilation(s.dilation);
  CHECK((C - heisenberg_superop(Phi)).norm() < 1e-12);
}

TEST_CASE("gauge-rotated specs are recognized as equal") {
  auto s1 = random_spec(3, 2, 7);
  Mat U = random_unitary(3, 8);
  auto s2 = gauge_rotate(s1, U, 0.83);
  auto res = pgfcs_equal(s1, s2);
  REQUIRE(res.equal);
  CHECK(res.intertwine_residual < 1e-8);
  // recovered unitary matches the gauge up to a global phase
  cplx z = (U.adjoint() * res.U).trace() / 3.0;
  z /= std::abs(z);
  CHECK((res.U - z * U).norm() < 1e-7);
  // and the moments agree
  Mat A = random_hermitian(2, 9);
  CHECK(std::abs(moment(s1, {A, A}) - moment(s2, {A, A})) < 1e-10);
}

TEST_CASE("independent random specs are inequivalent with a moment gap") {
  auto s1 = random_spec(3, 2, 21);
  auto s2 = random_spec(3, 2, 22);
  auto res = pgfcs_equal(s1, s2);
  CHECK_FALSE(res.equal);
  CHECK(res.moment_gap > 1e-3);
  Mat C = cross_operator(s2.dilation, s1.dilation);
  CHECK(std::abs(eig_general(C).eigenvalues(0)) < 1.0 - 1e-3);
}

TEST_CASE("different dimensions short-circuit") {
  auto s1 = random_spec(2, 2, 31);
  auto s2 = random_spec(3, 2, 32);
  auto res = pgfcs_equal(s1, s2);
  CHECK_FALSE(res.equal);
  CHECK(res.moment_gap > 0.0);
}

TEST_CASE("overlap diagnostic decreases for inequivalent pairs") {
  auto s1 = random_spec(3, 2, 41);
  auto s2 = random_spec(3, 2, 42);
  auto ov = overlap_diagnostic(s1, s2, 5);
  REQUIRE(ov.size() == 5);
  for (size_t i = 1; i < ov.size(); ++i) CHECK(ov[i] <= ov[i - 1] + 1e-12);
  // equal pairs keep a constant overlap level instead
  Mat U = random_unitary(3, 43);
  auto s3 = gauge_rotate(s1, U, 0.2);
  auto ov2 = overlap_diagnostic(s1, s3, 4);
  CHECK(ov2.back() > ov.back());
}

TEST_CASE("reducible inputs are rejected") {
  PgfcsSpec s;
  s.dilation.dimH = 2;
  s.dilation.dimE = 1;
  s.dilation.V = Mat::Identity(2, 2);
  s.rho.rho = Mat::Identity(2, 2) / 2.0;
  auto other = random_spec(2, 2, 51);
  CHECK_THROWS_AS(pgfcs_equal(s, other), NotIrreducible);
}
