#include "qdb/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qdb {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t WordDistribution::index(const std::vector<int>& w) const {
  std::uint64_t idx = 0;
  for (int a : w) idx = idx * alphabet.size() + a;
  return idx;
}

std::vector<int> WordDistribution::word(std::uint64_t idx) const {
  std::vector<int> w(n);
  for (int k = n - 1; k >= 0; --k) {
    w[k] = (int)(idx % alphabet.size());
    idx /= alphabet.size();
  }
  return w;
}

namespace {

std::uint64_t pow_u64(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Depth-first prefix recursion over unnormalized predual states, with all
// per-depth state buffers preallocated (this is the innermost kernel).  At
// leaf depth the probability is tr(sigma G_a) with G_a = sum_i K_i^* K_i,
// a d^2 dot product instead of two matrix products.
struct WordDfs {
  const std::vector<std::vector<const Mat*>>& kraus;  // per outcome
  const std::vector<Mat>& gram;                       // per outcome, K^* K
  std::vector<Mat> sig;  // one buffer per depth
  Mat tmp;
  std::vector<double>& out;
  int n;

  WordDfs(const std::vector<std::vector<const Mat*>>& k,
          const std::vector<Mat>& g, int dim, int n_, std::vector<double>& o)
      : kraus(k), gram(g), sig(n_ + 1), tmp(dim, dim), out(o), n(n_) {
    for (auto& s : sig) s.resize(dim, dim);
  }

  void child(int depth, int a) {
    Mat& dst = sig[depth + 1];
    dst.setZero();
    for (const Mat* K : kraus[a]) {
      tmp.noalias() = (*K) * sig[depth];
      dst.noalias() += tmp * K->adjoint();
    }
  }

  // Re tr(sigma G) for Hermitian sigma and G.
  double leaf(int depth, int a) const {
    return gram[a].cwiseProduct(sig[depth].conjugate()).sum().real();
  }

  void run(int depth, std::uint64_t base) {
    const int A = (int)kraus.size();
    if (depth + 1 == n) {
      for (int a = 0; a < A; ++a)
        out[base * A + a] = std::max(0.0, leaf(depth, a));
      return;
    }
    for (int a = 0; a < A; ++a) {
      child(depth, a);
      run(depth + 1, base * A + a);
    }
  }
};

std::vector<Mat> gram_table(const Instrument& instr) {
  std::vector<Mat> out;
  for (const auto& a : instr.alphabet) {
    Mat G = Mat::Zero(instr.dim, instr.dim);
    for (const auto& K : instr.maps.at(a)) G += K.adjoint() * K;
    out.push_back(std::move(G));
  }
  return out;
}

std::vector<std::vector<const Mat*>> kraus_table(const Instrument& instr) {
  std::vector<std::vector<const Mat*>> out;
  for (const auto& a : instr.alphabet) {
    std::vector<const Mat*> ks;
    for (const auto& K : instr.maps.at(a)) ks.push_back(&K);
    out.push_back(std::move(ks));
  }
  return out;
}

WordDistribution word_probs_impl(const Instrument& instr,
                                 const DensityMatrix& rho, int n,
                                 std::uint64_t word_cap, bool parallel) {
  const int A = (int)instr.alphabet.size();
  if (n < 1) throw ValidationError("word_probs: n must be positive");
  std::uint64_t total = pow_u64(A, n);
  if (total > word_cap)
    throw WordCapExceeded("word_probs: |alphabet|^n exceeds the word cap");
  WordDistribution out;
  out.alphabet = instr.alphabet;
  out.n = n;
  out.probs.assign(total, 0.0);
  auto table = kraus_table(instr);
  auto grams = gram_table(instr);
  if (n == 1 || !parallel || A < 2) {
    WordDfs dfs(table, grams, instr.dim, n, out.probs);
    dfs.sig[0] = rho.rho;
    dfs.run(0, 0);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (int a = 0; a < A; ++a) {
      WordDfs dfs(table, grams, instr.dim, n, out.probs);
      dfs.sig[0] = rho.rho;
      dfs.child(0, a);  // state for prefix a now sits in sig[1]
      dfs.run(1, a);
    }
  }
  return out;
}

}  // namespace

WordDistribution word_probs(const Instrument& instr, const DensityMatrix& rho,
                            int n, std::uint64_t word_cap) {
  return word_probs_impl(instr, rho, n, word_cap, true);
}

WordDistribution word_probs_serial(const Instrument& instr,
                                   const DensityMatrix& rho, int n,
                                   std::uint64_t word_cap) {
  return word_probs_impl(instr, rho, n, word_cap, false);
}

namespace {

// Digit reversal with symbol relabeling, tabulated over k base-A digits.
std::vector<std::uint64_t> reversal_table(int A, int k,
                                          const std::vector<int>& tmap) {
  std::vector<std::uint64_t> table(pow_u64(A, k));
  for (std::uint64_t x = 0; x < table.size(); ++x) {
    std::uint64_t rev = 0, rest = x;
    for (int j = 0; j < k; ++j) {
      rev = rev * A + tmap[rest % A];
      rest /= A;
    }
    table[x] = rev;
  }
  return table;
}

}  // namespace

WordDistribution reverse_dist(const WordDistribution& P,
                              const LocalReversal& theta) {
  const int A = (int)P.alphabet.size();
  std::vector<int> tmap(A);
  for (int a = 0; a < A; ++a) {
    const std::string& to = theta.apply(P.alphabet[a]);
    int idx = -1;
    for (int b = 0; b < A; ++b)
      if (P.alphabet[b] == to) { idx = b; break; }
    if (idx < 0)
      throw ValidationError("reverse_dist: theta leaves the alphabet");
    tmap[a] = idx;
  }
  WordDistribution out;
  out.alphabet = P.alphabet;
  out.n = P.n;
  out.probs.resize(P.probs.size());
  // Reversing the digits of i = hi * A^n1 + lo swaps the halves:
  // rev(i) = rev(lo) * A^n2 + rev(hi), so two half-length tables suffice.
  const int n1 = P.n / 2, n2 = P.n - n1;
  auto rev_lo = reversal_table(A, n1, tmap);
  auto rev_hi = reversal_table(A, n2, tmap);
  const std::uint64_t lo_size = rev_lo.size(), hi_scale = pow_u64(A, n2);
  for (std::uint64_t hi = 0; hi < rev_hi.size(); ++hi)
    for (std::uint64_t lo = 0; lo < lo_size; ++lo)
      out.probs[hi * lo_size + lo] = P.probs[rev_lo[lo] * hi_scale + rev_hi[hi]];
  return out;
}

double relative_entropy(const WordDistribution& P, const WordDistribution& Q) {
  if (P.size() != Q.size())
    throw DimensionMismatch("relative_entropy: size mismatch");
  double s = 0.0;
  for (std::uint64_t i = 0; i < P.size(); ++i) {
    double p = P.probs[i];
    if (p <= kProbFloor) continue;
    double q = Q.probs[i];
    if (q <= kProbFloor) return std::numeric_limits<double>::infinity();
    s += p * std::log(p / q);
  }
  return std::max(0.0, s);
}

EpReport ep_exact(const Instrument& instr, const DensityMatrix& rho,
                  const LocalReversal& theta, int n_max,
                  std::uint64_t word_cap) {
  EpReport out;
  out.C = 1.0 / herm_eig(rho.rho).eigenvalues.minCoeff();
  const double logC = std::log(out.C);
  // One deep pass: shorter-window distributions are last-symbol marginals
  // of the length-n_max one, so a single enumeration covers every n.
  WordDistribution P = word_probs(instr, rho, n_max, word_cap);
  const int A = (int)P.alphabet.size();
  for (int n = n_max; n >= 1; --n) {
    WordDistribution Phat = reverse_dist(P, theta);
    EpRow row;
    row.n = n;
    row.Ep = relative_entropy(P, Phat);
    row.Ep_per_n = row.Ep / n;
    out.rows.push_back(row);
    if (n > 1) {
      std::uint64_t sz = P.size() / A;
      for (std::uint64_t i = 0; i < sz; ++i) {
        double s = 0.0;
        for (int a = 0; a < A; ++a) s += P.probs[i * A + a];
        P.probs[i] = s;
      }
      P.probs.resize(sz);
      P.n = n - 1;
    }
  }
  std::reverse(out.rows.begin(), out.rows.end());
  double best = -std::numeric_limits<double>::infinity();
  for (auto& row : out.rows) {
    if (std::isinf(row.Ep)) out.infinite = true;
    else best = std::max(best, (row.Ep - logC) / row.n);
    row.fekete_lower = best;
  }
  return out;
}

Trajectory sample_trajectory(const Instrument& instr, const DensityMatrix& rho,
                             int n, std::uint64_t seed) {
  const int A = (int)instr.alphabet.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Trajectory out;
  Mat sigma = rho.rho;  // normalized conditional state
  double logp = 0.0;
  for (int step = 0; step < n; ++step) {
    std::vector<double> p(A);
    std::vector<Mat> nexts(A);
    double norm = 0.0;
    for (int a = 0; a < A; ++a) {
      nexts[a] = instr.schrodinger_apply(instr.alphabet[a], sigma);
      p[a] = std::max(0.0, nexts[a].trace().real());
      norm += p[a];
    }
    double u = unif(rng) * norm;
    int pick = A - 1;
    double acc = 0.0;
    for (int a = 0; a < A; ++a) {
      acc += p[a];
      if (u <= acc) { pick = a; break; }
    }
    logp += std::log(std::max(p[pick] / norm, kProbFloor));
    out.word.push_back(pick);
    sigma = nexts[pick] / std::max(p[pick], kProbFloor);
    out.states.push_back(sigma);
  }
  out.prob = std::exp(logp);
  return out;
}

namespace {

// P(w) for one explicit word, by direct predual composition.
double word_prob_single(const Instrument& instr, const DensityMatrix& rho,
                        const std::vector<int>& w) {
  Mat sigma = rho.rho;
  for (int a : w) sigma = instr.schrodinger_apply(instr.alphabet[a], sigma);
  return std::max(0.0, sigma.trace().real());
}

McResult ep_mc_impl(const Instrument& instr, const DensityMatrix& rho,
                    const LocalReversal& theta, int n, std::uint64_t samples,
                    std::uint64_t seed, bool parallel) {
  const int A = (int)instr.alphabet.size();
  std::vector<int> tmap(A);
  for (int a = 0; a < A; ++a) {
    const std::string& to = theta.apply(instr.alphabet[a]);
    for (int b = 0; b < A; ++b)
      if (instr.alphabet[b] == to) tmap[a] = b;
  }
  std::vector<double> vals(samples, 0.0);
  std::vector<char> bad(samples, 0);
  auto one = [&](std::uint64_t t) {
    Trajectory tr =
        sample_trajectory(instr, rho, n, seed ^ splitmix64(t));
    std::vector<int> rw(n);
    for (int k = 0; k < n; ++k) rw[k] = tmap[tr.word[n - 1 - k]];
    double phat = word_prob_single(instr, rho, rw);
    if (phat <= kProbFloor || tr.prob <= kProbFloor) {
      bad[t] = 1;
      return;
    }
    vals[t] = std::log(tr.prob / phat) / n;
  };
#pragma omp parallel for schedule(static) if (parallel)
  for (long long t = 0; t < (long long)samples; ++t) one((std::uint64_t)t);
  McResult out;
  for (std::uint64_t t = 0; t < samples; ++t)
    if (bad[t]) out.infinite = true;
  if (out.infinite) return out;
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= (double)samples;
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= std::max<double>(1.0, (double)samples - 1.0);
  out.estimate = mean;
  out.stderr_ = std::sqrt(var / (double)samples);
  return out;
}

}  // namespace

McResult ep_mc(const Instrument& instr, const DensityMatrix& rho,
               const LocalReversal& theta, int n, std::uint64_t samples,
               std::uint64_t seed) {
  return ep_mc_impl(instr, rho, theta, n, samples, seed, true);
}

McResult ep_mc_serial(const Instrument& instr, const DensityMatrix& rho,
                      const LocalReversal& theta, int n, std::uint64_t samples,
                      std::uint64_t seed) {
  return ep_mc_impl(instr, rho, theta, n, samples, seed, false);
}

ErResult er_check(const Instrument& instr, const DensityMatrix& rho, int n_max,
                  double tol) {
  const int A = (int)instr.alphabet.size();
  ErResult out;
  out.C = 1.0 / herm_eig(rho.rho).eigenvalues.minCoeff();
  QuantumChannel Phi = instr.total();
  // Enumerate cylinders A (length k) with their predual states and
  // probabilities, then compose through g extra channel steps and cylinder B.
  struct Cyl {
    Mat sigma;
    double prob;
  };
  std::vector<Cyl> frontier{{rho.rho, 1.0}};
  std::vector<std::vector<Cyl>> by_len{frontier};
  for (int k = 1; k <= n_max; ++k) {
    std::vector<Cyl> next;
    for (const auto& c : by_len.back())
      for (int a = 0; a < A; ++a) {
        Mat s = instr.schrodinger_apply(instr.alphabet[a], c.sigma);
        next.push_back({s, std::max(0.0, s.trace().real())});
      }
    by_len.push_back(std::move(next));
  }
  // Heisenberg effect operators E_B of the cylinders B, built by prefix:
  // E_{b w} = Phi_b(E_w), so P(B from sigma) = Re tr(sigma E_B).
  std::vector<WordDistribution> Bws;
  for (int m = 1; m <= n_max; ++m) Bws.push_back(word_probs(instr, rho, m));
  std::vector<std::vector<Mat>> effects(n_max + 1);
  effects[0] = {Mat::Identity(instr.dim, instr.dim)};
  for (int m = 1; m <= n_max; ++m) {
    effects[m].reserve(effects[m - 1].size() * A);
    for (int b = 0; b < A; ++b)
      for (const auto& E : effects[m - 1])
        effects[m].push_back(instr.heisenberg_apply(instr.alphabet[b], E));
  }
  for (int k = 1; k <= n_max; ++k) {
    for (const auto& ca : by_len[k]) {
      if (ca.prob <= kProbFloor) continue;
      for (int g = 0; g <= 2; ++g) {
        Mat sig = ca.sigma;
        for (int t = 0; t < g; ++t) sig = Phi.schrodinger_apply(sig);
        for (int m = 1; m <= n_max; ++m) {
          const WordDistribution& Bw = Bws[m - 1];
          for (std::uint64_t ib = 0; ib < Bw.size(); ++ib) {
            double pb = Bw.probs[ib];
            if (pb <= kProbFloor) continue;
            double joint = std::max(
                0.0,
                effects[m][ib].cwiseProduct(sig.conjugate()).sum().real());
            double ratio = joint / (out.C * ca.prob * pb);
            out.worst_ratio = std::max(out.worst_ratio, ratio);
          }
        }
      }
    }
  }
  out.pass = out.worst_ratio <= 1.0 + tol;
  return out;
}

double tri_check(const Instrument& instr, const DensityMatrix& rho,
                 const LocalReversal& theta, int n_max,
                 std::uint64_t word_cap) {
  double worst = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    WordDistribution P = word_probs(instr, rho, n, word_cap);
    WordDistribution Phat = reverse_dist(P, theta);
    for (std::uint64_t i = 0; i < P.size(); ++i)
      worst = std::max(worst, std::abs(P.probs[i] - Phat.probs[i]));
  }
  return worst;
}

std::vector<SubadditivityViolation> subadditivity_check(const EpReport& report,
                                                        double slack) {
  std::vector<SubadditivityViolation> out;
  const double logC = std::log(report.C);
  auto ep_at = [&](int n) -> double {
    for (const auto& r : report.rows)
      if (r.n == n) return r.Ep;
    return std::numeric_limits<double>::quiet_NaN();
  };
  for (const auto& rn : report.rows)
    for (const auto& rm : report.rows) {
      double total = ep_at(rn.n + rm.n);
      if (std::isnan(total) || std::isinf(total) || std::isinf(rn.Ep) ||
          std::isinf(rm.Ep))
        continue;
      double gap = rn.Ep + rm.Ep - logC - total;
      if (gap > slack) out.push_back({rn.n, rm.n, gap});
    }
  return out;
}

}  // namespace qdb
