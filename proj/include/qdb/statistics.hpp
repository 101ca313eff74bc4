#pragma once

#include "qdb/instrument.hpp"

#include <cstdint>
#include <limits>

namespace qdb {

inline constexpr double kProbFloor = 1e-300;
inline constexpr std::uint64_t kWordCap = 20'000'000;

// Length-n word distribution stored densely; index digits run over the
// alphabet with the first symbol most significant.
struct WordDistribution {
  std::vector<std::string> alphabet;
  int n = 0;
  std::vector<double> probs;

  std::uint64_t size() const { return probs.size(); }
  std::uint64_t index(const std::vector<int>& word) const;
  std::vector<int> word(std::uint64_t idx) const;
  double prob(const std::vector<int>& word) const { return probs[index(word)]; }
};

WordDistribution word_probs(const Instrument& instr, const DensityMatrix& rho,
                            int n, std::uint64_t word_cap = kWordCap);
WordDistribution word_probs_serial(const Instrument& instr,
                                   const DensityMatrix& rho, int n,
                                   std::uint64_t word_cap = kWordCap);

// P_hat(a_1...a_n) = P(theta(a_n)...theta(a_1)).
WordDistribution reverse_dist(const WordDistribution& P,
                              const LocalReversal& theta);

// Ent(P|Q) with natural logarithm; +infinity when P charges a word outside
// the support of Q.
double relative_entropy(const WordDistribution& P, const WordDistribution& Q);

struct EpRow {
  int n = 0;
  double Ep = 0.0;
  double Ep_per_n = 0.0;
  double fekete_lower = -std::numeric_limits<double>::infinity();
};

struct EpReport {
  std::vector<EpRow> rows;
  double C = 1.0;  // upper-decoupling constant 1/min sp(rho)
  bool infinite = false;
};

EpReport ep_exact(const Instrument& instr, const DensityMatrix& rho,
                  const LocalReversal& theta, int n_max,
                  std::uint64_t word_cap = kWordCap);

struct Trajectory {
  std::vector<int> word;
  std::vector<Mat> states;  // normalized conditional states after each step
  double prob = 1.0;        // P(word)
};

Trajectory sample_trajectory(const Instrument& instr, const DensityMatrix& rho,
                             int n, std::uint64_t seed);

struct McResult {
  double estimate = 0.0;  // of Ep_n / n
  double stderr_ = 0.0;
  bool infinite = false;
};

// Mean of (1/n) log(P(w)/P_hat(w)) over trajectories w ~ P_n; trajectory t
// derives its generator from seed and t alone, so the result is independent
// of scheduling.
McResult ep_mc(const Instrument& instr, const DensityMatrix& rho,
               const LocalReversal& theta, int n, std::uint64_t samples,
               std::uint64_t seed);
McResult ep_mc_serial(const Instrument& instr, const DensityMatrix& rho,
                      const LocalReversal& theta, int n, std::uint64_t samples,
                      std::uint64_t seed);

struct ErResult {
  double worst_ratio = 0.0;
  double C = 1.0;
  bool pass = false;
};

// Upper decoupling P(A cap shift^{-n} B) <= C P(A) P(B) over cylinder pairs
// with lengths <= n_max and gaps 0..2.
ErResult er_check(const Instrument& instr, const DensityMatrix& rho, int n_max,
                  double tol = 1e-9);

// Sup distance max_w |P_n(w) - P_hat_n(w)| for n <= n_max.
double tri_check(const Instrument& instr, const DensityMatrix& rho,
                 const LocalReversal& theta, int n_max,
                 std::uint64_t word_cap = kWordCap);

struct SubadditivityViolation {
  int n = 0, m = 0;
  double amount = 0.0;
};

// Violations of Ep_{n+m} >= Ep_n + Ep_m - log C beyond the slack.
std::vector<SubadditivityViolation> subadditivity_check(const EpReport& report,
                                                        double slack = 1e-9);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qdb
