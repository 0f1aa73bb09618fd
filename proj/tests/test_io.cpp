#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "locc/analysis.hpp"
#include "locc/catalog.hpp"
#include "locc/io.hpp"
#include "locc/search.hpp"
#include "testutil.hpp"

using namespace locc;
using io::Json;

TEST_CASE("matrix round trip is exact to 1e-12") {
  auto gen = testutil::rng(101);
  for (int i = 0; i < 20; ++i) {
    Mat m = testutil::random_matrix(3, 5, gen);
    auto j = io::to_json(m);
    CHECK(j.at("rows") == 3);
    CHECK(j.at("cols") == 5);
    CHECK(j.at("data").size() == 15);
    CHECK(j.at("data")[0].is_array());
    Mat back = io::mat_from_json(j);
    CAPTURE(i);
    CHECK(approx_equal(m, back, 1e-12));
  }
  // Text round trip through dump/parse as a file would do.
  Mat m = testutil::random_matrix(4, 4, gen);
  Mat back = io::mat_from_json(Json::parse(io::to_json(m).dump()));
  CHECK(approx_equal(m, back, 1e-12));
}

TEST_CASE("matrix reader rejects malformed payloads") {
  CHECK_THROWS(io::mat_from_json(Json{{"rows", 2}, {"cols", 2}}));
  CHECK_THROWS_WITH_AS(
      io::mat_from_json(
          Json{{"rows", 2}, {"cols", 2}, {"data", Json::array({1, 2, 3})}}),
      "matrix data length does not match rows*cols", std::runtime_error);
  CHECK_THROWS(io::mat_from_json(Json{
      {"rows", 1}, {"cols", 1}, {"data", Json::array({Json::array({1})})}}));
}

TEST_CASE("state set round trip preserves labels, dims, and amplitudes") {
  for (const char* name : {"yu-3x3", "beat-schmidt-5x5", "ccsp-4x6"}) {
    auto s = catalog::build(name).set;
    auto j = io::to_json(s);
    CHECK(j.at("dims") == Json::array({s.dim_a, s.dim_b}));
    auto back = io::state_set_from_json(j);
    CAPTURE(name);
    CHECK(back.name == s.name);
    CHECK(back.dim_a == s.dim_a);
    CHECK(back.dim_b == s.dim_b);
    REQUIRE(back.size() == s.size());
    for (int k = 0; k < s.size(); ++k) {
      CHECK(back.states[k].label == s.states[k].label);
      CHECK(approx_equal(back.states[k].coeff, s.states[k].coeff, 1e-12));
    }
  }
}

TEST_CASE("state set terms carry explicit re/im parts, im optional on read") {
  auto j = Json::parse(R"({
    "name": "mini",
    "dims": [2, 2],
    "states": [
      {"label": "x", "terms": [{"a": 0, "b": 1, "re": 0.5},
                               {"a": 1, "b": 0, "re": 0.0, "im": -2.0}]}
    ]})");
  auto s = io::state_set_from_json(j);
  CHECK(s.states[0].coeff(1, 0) == Complex(0.5, 0));
  CHECK(s.states[0].coeff(0, 1) == Complex(0, -2));
  auto out = io::to_json(s);
  for (const auto& t : out.at("states")[0].at("terms")) {
    CHECK(t.contains("re"));
    CHECK(t.contains("im"));
  }
  CHECK_THROWS(io::state_set_from_json(
      Json{{"name", "bad"}, {"dims", Json::array({2})}, {"states", Json::array()}}));
}

TEST_CASE("measurement round trip infers the dimension from the operators") {
  auto m = block_measurement(Party::B, 4, {{0, 1}, {2, 3}});
  auto j = io::to_json(m);
  CHECK(j.at("party") == "B");
  CHECK_FALSE(j.contains("dim"));
  CHECK(j.at("kraus").size() == 2);
  auto back = io::measurement_from_json(j);
  CHECK(back.party == Party::B);
  CHECK(back.dim == 4);
  REQUIRE(back.kraus.size() == 2);
  for (std::size_t k = 0; k < 2; ++k)
    CHECK(approx_equal(back.kraus[k], m.kraus[k], 1e-12));
  CHECK(back.labels == m.labels);

  j.erase("labels");
  auto bare = io::measurement_from_json(j);
  CHECK(bare.labels.empty());
  j["party"] = "C";
  CHECK_THROWS(io::measurement_from_json(j));
  j["party"] = "A";
  j["kraus"] = Json::array();
  CHECK_THROWS(io::measurement_from_json(j));
}

TEST_CASE("separable POVM round trip") {
  auto p = catalog::build("yu-3x3").povms[0];
  auto j = io::to_json(p);
  CHECK(j.at("dims") == Json::array({3, 3}));
  auto back = io::povm_from_json(j);
  CHECK(back.dim_a == 3);
  CHECK(back.dim_b == 3);
  REQUIRE(back.outcomes.size() == p.outcomes.size());
  for (std::size_t k = 0; k < p.outcomes.size(); ++k) {
    CHECK(back.outcomes[k].declares == p.outcomes[k].declares);
    CHECK(approx_equal(back.outcomes[k].a_op, p.outcomes[k].a_op, 1e-12));
    CHECK(approx_equal(back.outcomes[k].b_op, p.outcomes[k].b_op, 1e-12));
  }
  CHECK(verify_sep(back, catalog::build("yu-3x3").set, 2).ok);
}

TEST_CASE("protocol round trip keeps the tree verifiable") {
  for (const char* name : {"beat-schmidt-5x5", "appc-threestates(8)"}) {
    auto e = catalog::build(name);
    auto j = io::to_json(e.protocols[0]);
    auto back = io::protocol_from_json(j);
    CAPTURE(name);
    CHECK(verify_deterministic(back, e.set, e.expected.r_floor).ok);
    CHECK(to_string(classify(back)) == e.expected.protocol_class);
    CHECK(io::to_json(back) == j);
  }
}

TEST_CASE("protocol nodes carry their acting party") {
  auto e = catalog::build("exstates-4x4");
  auto j = io::to_json(e.protocols[0]);
  CHECK(j.at("party") == "A");
  CHECK(j.at("children")[0].at("party") == "B");
  CHECK(j.at("children")[0].at("children")[0].contains("leaf"));
  // A node-level party that contradicts its measurement is rejected.
  j["party"] = "B";
  CHECK_THROWS(io::protocol_from_json(j));
  // Leaves round trip as bare declarations.
  auto leaf = io::protocol_from_json(Json{{"leaf", 2}});
  CHECK(leaf.leaf());
  CHECK(leaf.declared == 2);
}

TEST_CASE("report serialization emits finite JSON") {
  auto e = catalog::build("exstates-4x4");
  auto rep = verify_deterministic(e.protocols[0], e.set, 2);
  auto j = io::to_json(rep);
  CHECK(j.at("ok") == true);
  CHECK(j.at("outcomes").is_array());
  CHECK(Json::parse(j.dump()) == j);

  BoundReport vac;
  vac.formula = "n-limit";
  vac.quantity = 3;
  vac.bound = std::numeric_limits<double>::infinity();
  vac.satisfied = true;
  auto bj = io::to_json(vac);
  CHECK(bj.at("bound").is_null());  // infinity has no JSON number
  CHECK(bj.at("quantity") == 3.0);

  SearchResult res;
  res.found = false;
  res.family_exhausted = true;
  res.nodes_explored = 42;
  auto sj = io::to_json(res);
  CHECK(sj.at("found") == false);
  CHECK(sj.at("family_exhausted") == true);
  CHECK(sj.at("nodes_explored") == 42);
}

TEST_CASE("file save/load round trip and error reporting") {
  const std::string path = "io_test_tmp.json";
  auto s = catalog::build("yu-3x3").set;
  io::save_json_file(path, io::to_json(s));
  auto loaded = io::state_set_from_json(io::load_json_file(path));
  CHECK(loaded.size() == 3);
  std::remove(path.c_str());

  CHECK_THROWS(io::load_json_file("does_not_exist_anywhere.json"));
  std::ofstream bad(path);
  bad << "{ not json";
  bad.close();
  try {
    io::load_json_file(path);
    CHECK(false);
  } catch (const std::exception& ex) {
    CHECK(std::string(ex.what()).find(path) != std::string::npos);
  }
  std::remove(path.c_str());
}
