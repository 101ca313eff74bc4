#include "qdb/channel.hpp"

#include <doctest.h>

using namespace qdb;

namespace {

// Completely depolarizing channel X -> tr(X)/d via matrix-unit Kraus.
QuantumChannel depolarizing(int d) {
  QuantumChannel Phi;
  Phi.dim = d;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      Phi.kraus.push_back(matrix_unit(d, i, j) / std::sqrt((double)d));
  return Phi;
}

QuantumChannel random_unital_channel(int d, int nk, std::uint64_t seed) {
  // QR of a stacked Gaussian gives an isometry; its blocks are a Kraus
  // family with sum K_i^* K_i = 1.
  Mat G = random_matrix(d * nk, d, seed);
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = Mat(qr.householderQ()).leftCols(d);
  QuantumChannel Phi;
  Phi.dim = d;
  for (int i = 0; i < nk; ++i) Phi.kraus.push_back(Q.middleRows(i * d, d));
  return Phi;
}

}  // namespace

TEST_CASE("depolarizing channel basics") {
  auto Phi = depolarizing(3);
  Phi.validate();
  Mat X = random_matrix(3, 3, 1);
  CHECK((Phi.apply(X) - X.trace() / 3.0 * Mat::Identity(3, 3)).norm() < 1e-12);
  auto fp = invariant_state(Phi);
  CHECK(fp.unique);
  CHECK((fp.state.rho - Mat::Identity(3, 3) / 3.0).norm() < 1e-10);
  CHECK(is_irreducible(Phi));
  auto cyc = maximal_cycle(Phi);
  CHECK(cyc.period == 1);
  CHECK((cyc.projections[0] - Mat::Identity(3, 3)).norm() < 1e-8);
}

TEST_CASE("superoperators agree with elementwise application") {
  auto Phi = random_unital_channel(3, 2, 5);
  Mat S = heisenberg_superop(Phi);
  Mat X = random_matrix(3, 3, 6);
  CHECK((unvec(S * vec(X), 3, 3) - Phi.apply(X)).norm() < 1e-12);
  Mat Ss = schrodinger_superop(Phi);
  CHECK((unvec(Ss * vec(X), 3, 3) - Phi.schrodinger_apply(X)).norm() < 1e-12);
  // predual is the adjoint for the HS inner product
  CHECK((Ss - S.adjoint()).norm() < 1e-12);
}

TEST_CASE("choi / kraus round trip") {
  auto Phi = random_unital_channel(3, 3, 7);
  Mat S = heisenberg_superop(Phi);
  auto Phi2 = channel_from_superop(S, 3);
  CHECK((heisenberg_superop(Phi2) - S).norm() < 1e-9);
  // Choi rank bounds the Kraus count
  CHECK((int)Phi2.kraus.size() <= 9);
}

TEST_CASE("kms adjoint is the adjoint and an involution") {
  auto Phi = random_unital_channel(3, 2, 9);
  auto fp = invariant_state(Phi);
  REQUIRE(fp.state.min_eigenvalue() > 1e-8);
  Mat rs = psd_sqrt(fp.state.rho);
  auto Phir = kms_adjoint(Phi, fp.state);
  Mat X = random_matrix(3, 3, 10), Y = random_matrix(3, 3, 11);
  CHECK(std::abs(kms_inner(X, Phi.apply(Y), rs) -
                 kms_inner(Phir.apply(X), Y, rs)) < 1e-10);
  auto Phirr = kms_adjoint(Phir, fp.state);
  CHECK((heisenberg_superop(Phirr) - heisenberg_superop(Phi)).norm() < 1e-9);
}

TEST_CASE("maximal cycle of a cyclic shift") {
  // unitary channel implementing the 3-cycle permutation
  int d = 3;
  Mat P = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) P((i + 1) % d, i) = 1.0;
  QuantumChannel Phi;
  Phi.dim = d;
  Phi.kraus = {P};
  // unitary conjugation is reducible as a channel; add depolarizing noise on
  // the diagonal algebra to keep the cyclic structure while making the
  // peripheral count finite
  CHECK_FALSE(is_irreducible(Phi));
  CHECK_THROWS_AS(maximal_cycle(Phi), NotIrreducible);
}

TEST_CASE("stinespring dilation reproduces the channel") {
  auto Phi = random_unital_channel(2, 3, 13);
  auto dil = stinespring(Phi);
  CHECK(dil.dimE == 3);
  CHECK((dil.V.adjoint() * dil.V - Mat::Identity(2, 2)).norm() < 1e-12);
  Mat X = random_matrix(2, 2, 14);
  Mat lifted = dil.V.adjoint() * kron(X, Mat::Identity(3, 3)) * dil.V;
  CHECK((lifted - Phi.apply(X)).norm() < 1e-12);
  auto back = channel_from_dilation(dil);
  REQUIRE(back.kraus.size() == Phi.kraus.size());
  for (size_t i = 0; i < back.kraus.size(); ++i)
    CHECK((back.kraus[i] - Phi.kraus[i]).norm() < 1e-14);
}

TEST_CASE("invariant state flags degenerate fixed spaces") {
  QuantumChannel Id;
  Id.dim = 2;
  Id.kraus = {Mat::Identity(2, 2)};
  auto fp = invariant_state(Id);
  CHECK_FALSE(fp.unique);
  fp.state.validate();
}

TEST_CASE("validation catches non-unital families") {
  QuantumChannel bad;
  bad.dim = 2;
  bad.kraus = {Mat::Identity(2, 2) * 2.0};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}
