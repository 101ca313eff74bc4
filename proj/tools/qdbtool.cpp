// qdbtool: batch front end for the qdb library.  JSON in, JSON/CSV out.
// Exit codes: 0 success, 2 validation failure, 3 resource cap,
// 4 numerical-convergence failure.

#include "qdb/io.hpp"
#include "qdb/pgfcs.hpp"

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace qdb;

struct Common {
  bool as_json = false;
  int threads = 0;
  double residual_tol = default_tol().residual;
  std::string out_path;
};

void add_common(CLI::App* app, Common& c) {
  app->add_flag("--json", c.as_json, "emit a machine-readable JSON report");
  app->add_option("--threads", c.threads, "cap OpenMP parallelism");
  app->add_option("--tol", c.residual_tol, "pass/fail residual tolerance");
  app->add_option("-o,--out", c.out_path, "output file (default stdout)");
}

void apply_threads(const Common& c) {
#ifdef _OPENMP
  if (c.threads > 0) omp_set_num_threads(c.threads);
#else
  (void)c;
#endif
}

void emit(const Common& c, const json& report) {
  std::ostringstream human;
  if (c.as_json) {
    human << report.dump(2) << '\n';
  } else {
    for (const auto& [k, v] : report.items())
      human << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump())
            << '\n';
  }
  if (c.out_path.empty())
    std::cout << human.str();
  else {
    std::ofstream f(c.out_path);
    f << human.str();
  }
}

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

DensityMatrix load_or_compute_rho(const std::string& path,
                                  const QuantumChannel& Phi, json& report) {
  if (!path.empty()) {
    json j = load_json_file(path);
    DensityMatrix rho;
    rho.rho = mat_from_json(j.at("rho"), Phi.dim, Phi.dim);
    rho.validate(true);
    return rho;
  }
  FixedPoint fp = invariant_state(Phi);
  report["rho_auto"] = true;
  report["rho_unique"] = fp.unique;
  report["rho"] = to_json(fp.state.rho, Phi.dim, Phi.dim);
  return fp.state;
}

int run_family(const Common& c, const std::string& preset_name, int d, int a0,
               const std::string& xs, const std::string& etas, bool anti_k,
               int table_p, double table_s) {
  apply_threads(c);
  CdsParams params;
  std::vector<double> x = xs.empty() ? std::vector<double>{}
                                     : parse_csv_doubles(xs);
  if (!preset_name.empty()) {
    params = preset(preset_name, x, table_p, table_s);
  } else {
    params.d = d;
    params.a0 = a0;
    params.x = x;
    params.antiunitary_K = anti_k;
    if (!etas.empty()) {
      for (double ph : parse_csv_doubles(etas))
        params.eta.push_back(std::polar(1.0, ph));
    } else {
      params.eta.assign(d, cplx(1.0, 0.0));
    }
  }
  CdsChannel ch = build(params);
  json report;
  report["channel"] = to_json(ch.channel);
  report["params"] = to_json(ch.params);
  report["irreducible"] = is_irreducible(ch.channel);
  if (report["irreducible"].get<bool>()) {
    MaximalCycle cyc = maximal_cycle(ch.channel);
    report["period"] = cyc.period;
  }
  QdbPrediction pred = predicted_qdb(params);
  report["predicted_qdb"] = pred.holds;
  if (pred.holds) {
    report["eta"] = {pred.eta.real(), pred.eta.imag()};
    QdbResult res = qdb_check(ch.channel, ch.rho, ch.J, c.residual_tol);
    report["qdb_holds"] = res.holds;
    report["qdb_residual"] = res.residual;
  }
  emit(c, report);
  return 0;
}

int run_qdb(const Common& c, const std::string& channel_path,
            const std::string& rho_path, const std::string& j_path,
            bool do_search) {
  apply_threads(c);
  QuantumChannel Phi = channel_from_json(load_json_file(channel_path));
  Phi.validate();
  json report;
  DensityMatrix rho = load_or_compute_rho(rho_path, Phi, report);
  if (do_search) {
    auto family = StructuredJFamily::default_family(Phi.dim);
    auto hits = search_qdb(Phi, rho, family, c.residual_tol);
    report["hits"] = json::array();
    for (const auto& h : hits) {
      json hj;
      hj["J"] = to_json(h.J);
      hj["residual"] = h.check.residual;
      hj["eta"] = {h.check.adm.eta.real(), h.check.adm.eta.imag()};
      report["hits"].push_back(hj);
    }
    report["hit_count"] = hits.size();
  } else {
    SymmetryOp J = symmetry_from_json(load_json_file(j_path));
    J.validate();
    QdbResult res = qdb_check(Phi, rho, J, c.residual_tol);
    report["holds"] = res.holds;
    report["residual"] = res.residual;
    report["admissible"] = res.adm.admissible;
    report["eta"] = {res.adm.eta.real(), res.adm.eta.imag()};
  }
  emit(c, report);
  return 0;
}

int run_ep(const Common& c, const std::string& instr_path,
           const std::string& rho_path, const std::string& theta_path,
           int n_max, bool mc, std::uint64_t samples, std::uint64_t seed,
           std::uint64_t word_cap) {
  apply_threads(c);
  Instrument instr = instrument_from_json(load_json_file(instr_path));
  instr.validate();
  json aux;
  DensityMatrix rho = load_or_compute_rho(rho_path, instr.total(), aux);
  LocalReversal theta =
      theta_path.empty() ? LocalReversal::identity(instr.alphabet)
                         : reversal_from_json(load_json_file(theta_path));
  theta.validate(instr.alphabet);
  if (mc) {
    McResult res = ep_mc(instr, rho, theta, n_max, samples, seed);
    json report = aux;
    report["estimate"] = res.estimate;
    report["stderr"] = res.stderr_;
    report["infinite"] = res.infinite;
    report["n"] = n_max;
    report["samples"] = samples;
    report["seed"] = seed;
    emit(c, report);
    return 0;
  }
  EpReport report = ep_exact(instr, rho, theta, n_max, word_cap);
  if (c.out_path.empty())
    write_ep_csv(std::cout, report);
  else {
    std::ofstream f(c.out_path);
    write_ep_csv(f, report);
  }
  return 0;
}

int run_instrument(const Common& c, const std::string& channel_path,
                   const std::string& rho_path, const std::string& j_path,
                   const std::string& base) {
  apply_threads(c);
  QuantumChannel Phi = channel_from_json(load_json_file(channel_path));
  Phi.validate();
  json report;
  DensityMatrix rho = load_or_compute_rho(rho_path, Phi, report);
  SymmetryOp J = symmetry_from_json(load_json_file(j_path));
  J.validate();
  const Povm* base_ptr = nullptr;
  Povm base_povm;
  if (base == "tetra") {
    base_povm = tetrahedral_povm();
    base_ptr = &base_povm;
  } else if (!base.empty()) {
    base_povm = povm_from_json(load_json_file(base));
    base_ptr = &base_povm;
  }
  IqdbInstrument built = build_iqdb_instrument(Phi, rho, J, base_ptr);
  report["instrument"] = to_json(built.instrument);
  report["theta"] = to_json(built.theta);
  report["povm"] = to_json(built.povm);
  report["iqdb_residual"] =
      iqdb_check(built.instrument, rho, J, built.theta, c.residual_tol);
  emit(c, report);
  return 0;
}

int run_povm(const Common& c, int ic_n) {
  Povm M = build_ic_povm(ic_n);
  json report;
  report["povm"] = to_json(M);
  report["outcomes"] = M.alphabet.size();
  IcReport ic = ic_test(M);
  report["rank"] = ic.rank;
  report["complete"] = ic.complete;
  emit(c, report);
  return 0;
}

PgfcsSpec load_pgfcs(const std::string& path) {
  json j = load_json_file(path);
  PgfcsSpec spec;
  spec.dilation.dimH = j.at("dimH").get<int>();
  spec.dilation.dimE = j.at("dimE").get<int>();
  spec.dilation.V = mat_from_json(j.at("V"), spec.dilation.dimH * spec.dilation.dimE,
                                  spec.dilation.dimH);
  if (j.contains("rho")) {
    spec.rho.rho =
        mat_from_json(j.at("rho"), spec.dilation.dimH, spec.dilation.dimH);
  } else {
    spec.rho = invariant_state(channel_from_dilation(spec.dilation)).state;
  }
  return spec;
}

int run_pgfcs(const Common& c, const std::string& p1, const std::string& p2,
              bool overlaps) {
  apply_threads(c);
  PgfcsSpec s1 = load_pgfcs(p1), s2 = load_pgfcs(p2);
  EquivalenceResult res = pgfcs_equal(s1, s2, 1e-8);
  json report;
  report["equal"] = res.equal;
  if (res.equal) {
    report["U"] = to_json(res.U, s2.dilation.dimH, s1.dilation.dimH);
    report["phi"] = res.phi;
    report["intertwine_residual"] = res.intertwine_residual;
  } else {
    report["reason"] = res.reason;
    report["moment_gap"] = res.moment_gap;
  }
  if (overlaps) report["overlaps"] = overlap_diagnostic(s1, s2);
  emit(c, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for quantum detailed balance and "
               "repeated-measurement statistics"};
  app.require_subcommand(1);

  Common c_family, c_qdb, c_ep, c_instr, c_povm, c_pgfcs;

  auto* family = app.add_subcommand("family", "build and analyze a two-Kraus "
                                              "shift channel");
  std::string preset_name, xs, etas;
  int d = 2, a0 = 1, table_p = 4;
  double table_s = 0.3;
  bool anti_k = true;
  family->add_option("--preset", preset_name,
                     "fig2a|fig2b|fig4a|fig4b|table1|fig5");
  family->add_option("--d", d, "dimension");
  family->add_option("--a0", a0, "involution offset");
  family->add_option("--x", xs, "comma-separated cube coordinates");
  family->add_option("--eta", etas, "comma-separated phases (radians)");
  family->add_flag("--antiunitary-k,!--unitary-k", anti_k,
                   "conjugation convention of the second Kraus operator");
  family->add_option("--p", table_p, "table1/fig5 block parameter");
  family->add_option("--s", table_s, "table1/fig5 weight parameter");
  add_common(family, c_family);

  auto* qdbcmd = app.add_subcommand("qdb", "detailed-balance check or search");
  std::string channel_path, rho_path, j_path;
  bool do_search = false;
  qdbcmd->add_option("--channel", channel_path, "channel JSON")->required();
  qdbcmd->add_option("--rho", rho_path, "density matrix JSON");
  qdbcmd->add_option("--J", j_path, "symmetry JSON");
  qdbcmd->add_flag("--search", do_search, "scan the structured J family");
  add_common(qdbcmd, c_qdb);

  auto* ep = app.add_subcommand("ep", "entropy production of an instrument");
  std::string instr_path, theta_path, rho_path_ep;
  int n_max = 6;
  bool mc = false;
  std::uint64_t samples = 10000, seed = 0, word_cap = kWordCap;
  bool seed_set = false;
  ep->add_option("--instrument", instr_path, "instrument JSON")->required();
  ep->add_option("--rho", rho_path_ep, "density matrix JSON");
  ep->add_option("--theta", theta_path, "reversal JSON (default identity)");
  ep->add_option("--nmax", n_max, "maximum word length");
  ep->add_flag("--mc", mc, "Monte Carlo estimate instead of exact");
  ep->add_option("--samples", samples, "Monte Carlo sample count");
  ep->add_option("--seed", seed, "random seed (required with --mc)")
      ->each([&](const std::string&) { seed_set = true; });
  ep->add_option("--word-cap", word_cap, "dense distribution size cap");
  add_common(ep, c_ep);

  auto* instr = app.add_subcommand("instrument", "build a detailed-balanced "
                                                 "instrument");
  std::string ich, irho, ij, base;
  instr->add_option("--channel", ich, "channel JSON")->required();
  instr->add_option("--rho", irho, "density matrix JSON");
  instr->add_option("--J", ij, "symmetry JSON")->required();
  instr->add_option("--base", base, "'tetra' or a POVM JSON path");
  add_common(instr, c_instr);

  auto* povm = app.add_subcommand("povm", "informationally complete POVMs");
  int ic_n = 2;
  povm->add_option("--ic", ic_n, "build the IC-POVM on C^n")->required();
  add_common(povm, c_povm);

  auto* pgfcs = app.add_subcommand("pgfcs", "finitely correlated state "
                                            "equivalence");
  std::string p1, p2;
  bool overlaps = false;
  pgfcs->add_option("--spec1", p1, "first dilation JSON")->required();
  pgfcs->add_option("--spec2", p2, "second dilation JSON")->required();
  pgfcs->add_flag("--overlaps", overlaps, "also emit the overlap diagnostic");
  add_common(pgfcs, c_pgfcs);

  CLI11_PARSE(app, argc, argv);

  try {
    if (family->parsed())
      return run_family(c_family, preset_name, d, a0, xs, etas, anti_k,
                        table_p, table_s);
    if (qdbcmd->parsed()) {
      if (!do_search && j_path.empty()) {
        std::cerr << "error=missing --J (or use --search)\n";
        return 2;
      }
      return run_qdb(c_qdb, channel_path, rho_path, j_path, do_search);
    }
    if (ep->parsed()) {
      if (mc && !seed_set) {
        std::cerr << "error=--mc requires an explicit --seed\n";
        return 2;
      }
      return run_ep(c_ep, instr_path, rho_path_ep, theta_path, n_max, mc,
                    samples, seed, word_cap);
    }
    if (instr->parsed())
      return run_instrument(c_instr, ich, irho, ij, base);
    if (povm->parsed()) return run_povm(c_povm, ic_n);
    if (pgfcs->parsed()) return run_pgfcs(c_pgfcs, p1, p2, overlaps);
  } catch (const WordCapExceeded& e) {
    std::cerr << "error=" << e.what() << '\n';
    return 3;
  } catch (const ResourceCap& e) {
    std::cerr << "error=" << e.what() << '\n';
    return 3;
  } catch (const NoConvergence& e) {
    std::cerr << "error=" << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    std::cerr << "error=" << e.what() << '\n';
    return 2;
  }
  return 2;
}
