#include "qdb/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace qdb {

json to_json(const Mat& A, int rows, int cols) {
  if (A.rows() != rows || A.cols() != cols)
    throw DimensionMismatch("to_json: matrix shape mismatch");
  json out = json::array();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      out.push_back({A(i, j).real(), A(i, j).imag()});
  return out;
}

Mat mat_from_json(const json& j, int rows, int cols) {
  if (!j.is_array() || (int)j.size() != rows * cols)
    throw ValidationError("mat_from_json: expected " +
                          std::to_string(rows * cols) + " entries");
  Mat A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const json& e = j[i * cols + k];
      if (!e.is_array() || e.size() != 2)
        throw ValidationError("mat_from_json: entries must be [re, im]");
      A(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  return A;
}

json to_json(const QuantumChannel& Phi) {
  json ks = json::array();
  for (const auto& K : Phi.kraus) ks.push_back(to_json(K, Phi.dim, Phi.dim));
  return json{{"dim", Phi.dim}, {"kraus", ks}};
}

QuantumChannel channel_from_json(const json& j) {
  QuantumChannel Phi;
  Phi.dim = j.at("dim").get<int>();
  for (const auto& k : j.at("kraus"))
    Phi.kraus.push_back(mat_from_json(k, Phi.dim, Phi.dim));
  return Phi;
}

json to_json(const SymmetryOp& J) {
  return json{{"dim", J.dim},
              {"antiunitary", J.antiunitary},
              {"U", to_json(J.U, J.dim, J.dim)}};
}

SymmetryOp symmetry_from_json(const json& j) {
  SymmetryOp J;
  J.dim = j.at("dim").get<int>();
  J.antiunitary = j.at("antiunitary").get<bool>();
  J.U = mat_from_json(j.at("U"), J.dim, J.dim);
  return J;
}

json to_json(const Instrument& instr) {
  json maps = json::object();
  for (const auto& [label, ks] : instr.maps) {
    json arr = json::array();
    for (const auto& K : ks) arr.push_back(to_json(K, instr.dim, instr.dim));
    maps[label] = arr;
  }
  return json{
      {"dim", instr.dim}, {"alphabet", instr.alphabet}, {"maps", maps}};
}

Instrument instrument_from_json(const json& j) {
  Instrument instr;
  instr.dim = j.at("dim").get<int>();
  instr.alphabet = j.at("alphabet").get<std::vector<std::string>>();
  for (const auto& [label, arr] : j.at("maps").items()) {
    std::vector<Mat> ks;
    for (const auto& k : arr)
      ks.push_back(mat_from_json(k, instr.dim, instr.dim));
    instr.maps[label] = std::move(ks);
  }
  return instr;
}

json to_json(const Povm& M) {
  json elems = json::object();
  for (const auto& [label, E] : M.elements)
    elems[label] = to_json(E, M.dimE, M.dimE);
  return json{{"dimE", M.dimE}, {"elements", elems}};
}

Povm povm_from_json(const json& j) {
  Povm M;
  M.dimE = j.at("dimE").get<int>();
  for (const auto& [label, e] : j.at("elements").items()) {
    M.alphabet.push_back(label);
    M.elements[label] = mat_from_json(e, M.dimE, M.dimE);
  }
  return M;
}

json to_json(const LocalReversal& theta) {
  json t = json::object();
  for (const auto& [a, b] : theta.theta) t[a] = b;
  return json{{"theta", t}};
}

LocalReversal reversal_from_json(const json& j) {
  LocalReversal theta;
  std::vector<std::string> labels;
  for (const auto& [a, b] : j.at("theta").items()) {
    theta.theta[a] = b.get<std::string>();
    labels.push_back(a);
  }
  theta.validate(labels);
  return theta;
}

json to_json(const MarkovChain& chain) {
  json P = json::array();
  for (int i = 0; i < chain.d; ++i) {
    json row = json::array();
    for (int k = 0; k < chain.d; ++k) row.push_back(chain.P(i, k));
    P.push_back(row);
  }
  json out{{"P", P}};
  if (chain.pi.size() == chain.d) {
    json pi = json::array();
    for (int i = 0; i < chain.d; ++i) pi.push_back(chain.pi(i));
    out["pi"] = pi;
  }
  return out;
}

MarkovChain chain_from_json(const json& j) {
  MarkovChain chain;
  const json& P = j.at("P");
  chain.d = (int)P.size();
  chain.P.resize(chain.d, chain.d);
  for (int i = 0; i < chain.d; ++i) {
    if ((int)P[i].size() != chain.d)
      throw ValidationError("chain_from_json: ragged transition matrix");
    for (int k = 0; k < chain.d; ++k) chain.P(i, k) = P[i][k].get<double>();
  }
  if (j.contains("pi")) {
    chain.pi.resize(chain.d);
    for (int i = 0; i < chain.d; ++i) chain.pi(i) = j["pi"][i].get<double>();
  }
  return chain;
}

json to_json(const CdsParams& params) {
  json eta = json::array();
  for (const auto& e : params.eta) eta.push_back({e.real(), e.imag()});
  return json{{"d", params.d},
              {"a0", params.a0},
              {"x", params.x},
              {"eta", eta},
              {"antiunitary_K", params.antiunitary_K}};
}

CdsParams cds_from_json(const json& j) {
  CdsParams params;
  params.d = j.at("d").get<int>();
  params.a0 = j.at("a0").get<int>();
  params.x = j.at("x").get<std::vector<double>>();
  for (const auto& e : j.at("eta"))
    params.eta.emplace_back(e[0].get<double>(), e[1].get<double>());
  params.antiunitary_K = j.at("antiunitary_K").get<bool>();
  return params;
}

json to_json(const WordDistribution& P) {
  json words = json::object();
  for (std::uint64_t idx = 0; idx < P.size(); ++idx) {
    auto w = P.word(idx);
    std::string key;
    for (size_t i = 0; i < w.size(); ++i) {
      if (i) key += ' ';
      key += P.alphabet[w[i]];
    }
    words[key] = P.probs[idx];
  }
  return json{{"alphabet", P.alphabet}, {"n", P.n}, {"probs", words}};
}

void write_ep_csv(std::ostream& os, const EpReport& report) {
  os << "n,Ep,Ep_per_n,fekete_lower,C,infinite_flag\n";
  os << std::setprecision(17);
  for (const auto& row : report.rows)
    os << row.n << ',' << row.Ep << ',' << row.Ep_per_n << ','
       << row.fekete_lower << ',' << report.C << ','
       << (report.infinite ? 1 : 0) << '\n';
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

}  // namespace qdb
