#pragma once

#include "qdb/cds.hpp"
#include "qdb/markov.hpp"

#include <json.hpp>

#include <iosfwd>

namespace qdb {

using json = nlohmann::json;

// Matrices serialize as row-major arrays of [re, im] pairs; all readers
// accept exactly what the writers emit (lossless round trip).
json to_json(const Mat& A, int rows, int cols);
Mat mat_from_json(const json& j, int rows, int cols);

json to_json(const QuantumChannel& Phi);
QuantumChannel channel_from_json(const json& j);

json to_json(const SymmetryOp& J);
SymmetryOp symmetry_from_json(const json& j);

json to_json(const Instrument& instr);
Instrument instrument_from_json(const json& j);

json to_json(const Povm& M);
Povm povm_from_json(const json& j);

json to_json(const LocalReversal& theta);
LocalReversal reversal_from_json(const json& j);

json to_json(const MarkovChain& chain);
MarkovChain chain_from_json(const json& j);

json to_json(const CdsParams& params);
CdsParams cds_from_json(const json& j);

json to_json(const WordDistribution& P);

// n,Ep,Ep_per_n,fekete_lower,C,infinite_flag
void write_ep_csv(std::ostream& os, const EpReport& report);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace qdb
