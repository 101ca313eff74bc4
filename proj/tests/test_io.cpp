#include "qdb/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace qdb;

TEST_CASE("matrix serialization round trip is lossless") {
  Mat A = random_matrix(3, 4, 1);
  json j = to_json(A, 3, 4);
  Mat B = mat_from_json(j, 3, 4);
  CHECK((A - B).norm() == 0.0);
  CHECK_THROWS_AS(mat_from_json(j, 4, 4), ValidationError);
}

TEST_CASE("channel round trip") {
  auto ch = build(preset("fig2a", {0.3, 0.8}));
  json j = to_json(ch.channel);
  auto back = channel_from_json(j);
  CHECK(back.dim == 5);
  REQUIRE(back.kraus.size() == ch.channel.kraus.size());
  for (size_t i = 0; i < back.kraus.size(); ++i)
    CHECK((back.kraus[i] - ch.channel.kraus[i]).norm() == 0.0);
  CHECK(to_json(back) == j);
}

TEST_CASE("symmetry round trip") {
  auto ch = build(preset("fig4b", {0.3, 0.5, 0.8}));
  json j = to_json(ch.J);
  auto back = symmetry_from_json(j);
  CHECK(back.antiunitary == ch.J.antiunitary);
  CHECK((back.U - ch.J.U).norm() == 0.0);
  CHECK(to_json(back) == j);
}

TEST_CASE("instrument, povm and reversal round trips") {
  auto ch = build(preset("fig2a", {0.3, 0.8}));
  auto iq = build_iqdb_instrument(ch.channel, ch.rho, ch.J);
  json ji = to_json(iq.instrument);
  auto backi = instrument_from_json(ji);
  CHECK(backi.alphabet == iq.instrument.alphabet);
  CHECK(to_json(backi) == ji);

  json jp = to_json(iq.povm);
  auto backp = povm_from_json(jp);
  CHECK(to_json(backp) == jp);

  json jt = to_json(iq.theta);
  auto backt = reversal_from_json(jt);
  CHECK(to_json(backt) == jt);
}

TEST_CASE("reversal reader validates involutions") {
  json j = {{"theta", {{"a", "b"}, {"b", "c"}, {"c", "a"}}}};
  CHECK_THROWS_AS(reversal_from_json(j), ValidationError);
}

TEST_CASE("chain and cds round trips") {
  MarkovChain c;
  c.d = 2;
  c.P.resize(2, 2);
  c.P << 0.9, 0.1, 0.4, 0.6;
  c.validate();
  json j = to_json(c);
  auto back = chain_from_json(j);
  CHECK((back.P - c.P).norm() == 0.0);
  CHECK((back.pi - c.pi).norm() == 0.0);

  auto params = preset("fig2b", {0.3, 0.8});
  json jc = to_json(params);
  auto backc = cds_from_json(jc);
  CHECK(backc.d == params.d);
  CHECK(backc.a0 == params.a0);
  CHECK(backc.antiunitary_K == params.antiunitary_K);
  CHECK(to_json(backc) == jc);
}

TEST_CASE("ep csv schema") {
  EpReport rep;
  rep.C = 5.0;
  rep.rows.push_back({1, 0.25, 0.25, -1.0});
  rep.rows.push_back({2, 0.5, 0.25, -0.5});
  std::ostringstream os;
  write_ep_csv(os, rep);
  std::string out = os.str();
  CHECK(out.rfind("n,Ep,Ep_per_n,fekete_lower,C,infinite_flag\n", 0) == 0);
  CHECK(out.find("1,0.25,0.25,-1,5,0") != std::string::npos);
  CHECK(out.find("2,0.5,0.25,-0.5,5,0") != std::string::npos);
}

TEST_CASE("word distribution dump") {
  WordDistribution P;
  P.alphabet = {"x", "y"};
  P.n = 2;
  P.probs = {0.1, 0.2, 0.3, 0.4};
  json j = to_json(P);
  CHECK(j["n"] == 2);
  CHECK(j["probs"]["x y"] == 0.2);
  CHECK(j["probs"]["y x"] == 0.3);
}
