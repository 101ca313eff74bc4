// Timing comparison of the OpenMP kernels against their serial references.

#include "qdb/cds.hpp"
#include "qdb/statistics.hpp"

#include <chrono>
#include <cstdio>

namespace {

using namespace qdb;

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

template <class F>
double timed(const char* name, F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  double dt = seconds(t0);
  std::printf("%-24s %8.3f s\n", name, dt);
  return dt;
}

}  // namespace

int main() {
  CdsChannel ch = build(preset("fig2b", {0.61, 0.55}));
  IqdbInstrument iq = build_iqdb_instrument(ch.channel, ch.rho, ch.J);

  std::printf("== word_probs (|A|=%zu, n=5) ==\n", iq.instrument.alphabet.size());
  double tp = timed("parallel", [&] { word_probs(iq.instrument, ch.rho, 5); });
  double ts =
      timed("serial", [&] { word_probs_serial(iq.instrument, ch.rho, 5); });
  std::printf("speedup %.2fx\n\n", ts / tp);

  std::printf("== ep_mc (n=6, 20000 samples) ==\n");
  tp = timed("parallel", [&] {
    ep_mc(iq.instrument, ch.rho, iq.theta, 6, 20000, 42);
  });
  ts = timed("serial", [&] {
    ep_mc_serial(iq.instrument, ch.rho, iq.theta, 6, 20000, 42);
  });
  std::printf("speedup %.2fx\n\n", ts / tp);

  CdsChannel ch4 = build(preset("fig4b"));
  auto family = qdb::StructuredJFamily::default_family(ch4.params.d);
  std::printf("== search_qdb (d=%d, q=%d) ==\n", ch4.params.d,
              family.phase_denominator);
  tp = timed("parallel", [&] { search_qdb(ch4.channel, ch4.rho, family); });
  ts = timed("serial",
             [&] { search_qdb_serial(ch4.channel, ch4.rho, family); });
  std::printf("speedup %.2fx\n", ts / tp);
  return 0;
}
