#include "qdb/cds.hpp"
#include "qdb/markov.hpp"

#include <doctest.h>

#include <random>

using namespace qdb;

namespace {

MarkovChain biased_two_state() {
  MarkovChain c;
  c.d = 2;
  c.P.resize(2, 2);
  c.P << 0.9, 0.1, 0.4, 0.6;
  c.validate();
  return c;
}

// a 3-state chain with a circulation, hence not reversible (every 2-state
// stationary chain is automatically detailed balanced)
MarkovChain nonrev_three_state() {
  MarkovChain c;
  c.d = 3;
  c.P.resize(3, 3);
  c.P << 0.1, 0.8, 0.1, 0.1, 0.1, 0.8, 0.8, 0.1, 0.1;
  c.validate();
  return c;
}

double chain_word_prob(const MarkovChain& c, const std::vector<int>& w) {
  double p = c.pi(w[0]);
  for (size_t i = 0; i + 1 < w.size(); ++i) p *= c.P(w[i], w[i + 1]);
  return p;
}

}  // namespace

TEST_CASE("word probabilities of an embedded chain are the path products") {
  auto c = biased_two_state();
  auto emb = embed(c);
  for (int n = 1; n <= 5; ++n) {
    auto P = word_probs(emb.instrument, emb.rho, n);
    for (std::uint64_t idx = 0; idx < P.size(); ++idx)
      CHECK(P.probs[idx] ==
            doctest::Approx(chain_word_prob(c, P.word(idx))).epsilon(1e-12));
  }
}

TEST_CASE("serial and parallel word_probs agree bitwise-close") {
  auto ch = build(preset("fig2a", {0.3, 0.8}));
  auto iq = build_iqdb_instrument(ch.channel, ch.rho, ch.J);
  auto a = word_probs(iq.instrument, ch.rho, 3);
  auto b = word_probs_serial(iq.instrument, ch.rho, 3);
  REQUIRE(a.size() == b.size());
  for (std::uint64_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(a.probs[i] - b.probs[i]) < 1e-15);
}

TEST_CASE("shift invariance of the word family") {
  auto ch = build(preset("fig2b", {0.44, 0.52}));
  auto iq = build_iqdb_instrument(ch.channel, ch.rho, ch.J);
  auto P2 = word_probs(iq.instrument, ch.rho, 2);
  auto P3 = word_probs(iq.instrument, ch.rho, 3);
  int A = (int)iq.instrument.alphabet.size();
  for (std::uint64_t idx = 0; idx < P2.size(); ++idx) {
    double lhs = 0.0;
    // sum over the first symbol of the length-3 word
    for (int a = 0; a < A; ++a) lhs += P3.probs[a * P2.size() + idx];
    CHECK(lhs == doctest::Approx(P2.probs[idx]).epsilon(1e-11));
  }
}

TEST_CASE("word cap triggers") {
  auto ch = build(preset("fig2a", {0.3, 0.8}));
  auto iq = build_iqdb_instrument(ch.channel, ch.rho, ch.J);
  CHECK_THROWS_AS(word_probs(iq.instrument, ch.rho, 9, 1000), WordCapExceeded);
}

TEST_CASE("reverse_dist reverses and relabels") {
  auto c = biased_two_state();
  auto emb = embed(c);
  auto theta = LocalReversal::identity(emb.instrument.alphabet);
  auto P = word_probs(emb.instrument, emb.rho, 3);
  auto Ph = reverse_dist(P, theta);
  std::vector<int> w = {0, 1, 1}, rw = {1, 1, 0};
  CHECK(Ph.prob(w) == doctest::Approx(P.prob(rw)).epsilon(1e-14));
}

TEST_CASE("relative entropy basics") {
  WordDistribution P, Q;
  P.alphabet = Q.alphabet = {"a", "b"};
  P.n = Q.n = 1;
  P.probs = {0.7, 0.3};
  Q.probs = {0.5, 0.5};
  double ref = 0.7 * std::log(0.7 / 0.5) + 0.3 * std::log(0.3 / 0.5);
  CHECK(relative_entropy(P, Q) == doctest::Approx(ref).epsilon(1e-14));
  CHECK(relative_entropy(P, P) == doctest::Approx(0.0));
  Q.probs = {1.0, 0.0};
  CHECK(std::isinf(relative_entropy(P, Q)));
}

TEST_CASE("entropy production vanishes for detailed-balanced instruments") {
  auto ch = build(preset("fig2a", {0.3, 0.8}));
  auto iq = build_iqdb_instrument(ch.channel, ch.rho, ch.J);
  auto rep = ep_exact(iq.instrument, ch.rho, iq.theta, 4);
  for (const auto& row : rep.rows) CHECK(std::abs(row.Ep) < 1e-10);
  CHECK(tri_check(iq.instrument, ch.rho, iq.theta, 4) < 1e-10);
}

TEST_CASE("deterministic cycle gives infinite entropy production") {
  MarkovChain c;
  c.d = 3;
  c.P.resize(3, 3);
  c.P << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  c.validate();
  auto emb = embed(c);
  auto theta = LocalReversal::identity(emb.instrument.alphabet);
  auto rep = ep_exact(emb.instrument, emb.rho, theta, 3);
  CHECK(rep.infinite);
}

TEST_CASE("ep matches a brute-force window oracle on a circulating chain") {
  auto c = nonrev_three_state();
  auto emb = embed(c);
  auto theta = LocalReversal::identity(emb.instrument.alphabet);
  auto rep = ep_exact(emb.instrument, emb.rho, theta, 4);
  for (const auto& row : rep.rows) {
    auto P = word_probs(emb.instrument, emb.rho, row.n);
    double ref = 0.0;
    for (std::uint64_t idx = 0; idx < P.size(); ++idx) {
      auto w = P.word(idx);
      std::vector<int> rw(w.rbegin(), w.rend());
      if (P.probs[idx] > 0) ref += P.probs[idx] * std::log(P.probs[idx] / P.prob(rw));
    }
    CHECK(row.Ep == doctest::Approx(ref).epsilon(1e-10));
    CHECK(row.Ep_per_n == doctest::Approx(ref / row.n).epsilon(1e-10));
  }
  // the circulation makes the chain irreversible, so Ep must be positive
  CHECK(rep.rows.back().Ep > 1e-2);
}

TEST_CASE("trajectory sampling is deterministic and consistent") {
  auto c = biased_two_state();
  auto emb = embed(c);
  auto t1 = sample_trajectory(emb.instrument, emb.rho, 10, 5);
  auto t2 = sample_trajectory(emb.instrument, emb.rho, 10, 5);
  CHECK(t1.word == t2.word);
  auto t3 = sample_trajectory(emb.instrument, emb.rho, 10, 6);
  CHECK(t1.word.size() == 10);
  (void)t3;
  // empirical frequencies over many samples approach the word distribution
  auto P = word_probs(emb.instrument, emb.rho, 2);
  std::vector<int> counts(P.size(), 0);
  const int N = 20000;
  for (int s = 0; s < N; ++s) {
    auto t = sample_trajectory(emb.instrument, emb.rho, 2, 1000 + s);
    counts[P.index(t.word)]++;
  }
  for (std::uint64_t idx = 0; idx < P.size(); ++idx) {
    double p = P.probs[idx];
    double sd = std::sqrt(p * (1 - p) / N);
    CHECK(std::abs(counts[idx] / (double)N - p) < 5 * sd + 1e-9);
  }
}

TEST_CASE("monte carlo estimator agrees with the exact rate") {
  auto c = nonrev_three_state();
  auto emb = embed(c);
  auto theta = LocalReversal::identity(emb.instrument.alphabet);
  auto rep = ep_exact(emb.instrument, emb.rho, theta, 5);
  auto mc = ep_mc(emb.instrument, emb.rho, theta, 5, 20000, 99);
  CHECK_FALSE(mc.infinite);
  CHECK(std::abs(mc.estimate - rep.rows.back().Ep_per_n) < 4 * mc.stderr_);
  // determinism across runs and against the serial reference
  auto mc2 = ep_mc(emb.instrument, emb.rho, theta, 5, 20000, 99);
  CHECK(mc.estimate == mc2.estimate);
  auto mcs = ep_mc_serial(emb.instrument, emb.rho, theta, 5, 20000, 99);
  CHECK(mc.estimate == doctest::Approx(mcs.estimate).epsilon(1e-12));
}

TEST_CASE("upper decoupling holds with C = norm of rho inverse") {
  auto ch = build(preset("fig2a", {0.3, 0.8}));
  auto iq = build_iqdb_instrument(ch.channel, ch.rho, ch.J);
  auto er = er_check(iq.instrument, ch.rho, 3);
  CHECK(er.pass);
  CHECK(er.C == doctest::Approx(5.0));
  CHECK(er.worst_ratio <= 1.0 + 1e-9);
}

TEST_CASE("subadditivity of the corrected sequence") {
  auto c = biased_two_state();
  auto emb = embed(c);
  auto theta = LocalReversal::identity(emb.instrument.alphabet);
  auto rep = ep_exact(emb.instrument, emb.rho, theta, 6);
  CHECK(subadditivity_check(rep).empty());
  // Fekete lower bounds are nondecreasing by construction
  for (size_t i = 1; i < rep.rows.size(); ++i)
    CHECK(rep.rows[i].fekete_lower >= rep.rows[i - 1].fekete_lower - 1e-12);
}
