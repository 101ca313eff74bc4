#include "qdb/linalg.hpp"

#include <doctest.h>

using namespace qdb;

TEST_CASE("row-major vec matches the sandwich identity") {
  Mat A = random_matrix(3, 3, 1), B = random_matrix(3, 3, 2),
      X = random_matrix(3, 3, 3);
  // vec(A X B) = (A (x) B^T) vec(X)
  CHECK((vec(A * X * B) - kron(A, B.transpose()) * vec(X)).norm() < 1e-12);
  CHECK((unvec(vec(X), 3, 3) - X).norm() == 0.0);
  // Hilbert-Schmidt inner product becomes the Euclidean one.
  Mat Y = random_matrix(3, 3, 4);
  CHECK(std::abs((X.adjoint() * Y).trace() - vec(X).dot(vec(Y))) < 1e-12);
}

TEST_CASE("vec of rectangular matrices") {
  Mat A = random_matrix(2, 4, 5);
  CHECK((unvec(vec(A), 2, 4) - A).norm() == 0.0);
}

TEST_CASE("partial traces against the kron oracle") {
  Mat A = random_matrix(3, 3, 6), B = random_matrix(2, 2, 7);
  Mat T = kron(A, B);  // H major
  CHECK((partial_trace_E(T, 3, 2) - B.trace() * A).norm() < 1e-12);
  CHECK((partial_trace_H(T, 3, 2) - A.trace() * B).norm() < 1e-12);
}

TEST_CASE("herm_eig rejects non-Hermitian input and reconstructs") {
  Mat H = random_hermitian(4, 8);
  auto d = herm_eig(H);
  Mat rec = d.eigenvectors *
            d.eigenvalues.cast<cplx>().asDiagonal() *
            d.eigenvectors.adjoint();
  CHECK((rec - H).norm() < 1e-10);
  CHECK_THROWS_AS(herm_eig(random_matrix(3, 3, 9)), NotHermitian);
}

TEST_CASE("eig_general ordering and vectors") {
  Mat A = random_matrix(4, 4, 10);
  auto s = eig_general(A, true);
  for (int i = 0; i + 1 < 4; ++i)
    CHECK(std::abs(s.eigenvalues(i)) >= std::abs(s.eigenvalues(i + 1)) - 1e-12);
  for (int i = 0; i < 4; ++i)
    CHECK((A * s.eigenvectors->col(i) -
           s.eigenvalues(i) * s.eigenvectors->col(i))
              .norm() < 1e-9);
}

TEST_CASE("psd square roots") {
  Mat H = random_matrix(3, 3, 11);
  Mat P = H * H.adjoint() + 0.1 * Mat::Identity(3, 3);
  Mat R = psd_sqrt(P);
  CHECK((R * R - P).norm() < 1e-10);
  Mat Ri = psd_inv_sqrt(P);
  CHECK((R * Ri - Mat::Identity(3, 3)).norm() < 1e-10);
  CHECK_THROWS_AS(psd_sqrt(-Mat::Identity(2, 2)), NotPsd);
}

TEST_CASE("pinv satisfies the Moore-Penrose identities") {
  Mat A = random_matrix(4, 2, 12);
  Mat Ap = pinv(A);
  CHECK((A * Ap * A - A).norm() < 1e-10);
  CHECK((Ap * A * Ap - Ap).norm() < 1e-10);
  CHECK((A * Ap - (A * Ap).adjoint()).norm() < 1e-10);
}

TEST_CASE("random_unitary is deterministic and unitary") {
  Mat U = random_unitary(5, 77);
  CHECK((U.adjoint() * U - Mat::Identity(5, 5)).norm() < 1e-12);
  CHECK((U - random_unitary(5, 77)).norm() == 0.0);
  CHECK((U - random_unitary(5, 78)).norm() > 1e-3);
}
