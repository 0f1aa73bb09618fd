#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "locc/catalog.hpp"
#include "locc/io.hpp"
#include "locc/search.hpp"
#include "testutil.hpp"

using namespace locc;

namespace {

SearchSpec spec_of(SearchClass c, int r_min, int rounds = 4) {
  SearchSpec sp;
  sp.comm = c;
  sp.r_min = r_min;
  sp.max_rounds = rounds;
  return sp;
}

// Two states per half-space pair; separating them needs Bob to react to
// Alice's outcome, so no fixed product grid keeps rank 2.
StateSet needs_one_way() {
  StateSet s;
  s.name = "needs-one-way";
  s.dim_a = s.dim_b = 4;
  s.states = {make_state(4, 4, {{0, 0, 1}, {1, 1, 1}}, "1"),
              make_state(4, 4, {{0, 2, 1}, {1, 3, 1}}, "2"),
              make_state(4, 4, {{2, 1, 1}, {3, 2, 1}}, "3"),
              make_state(4, 4, {{2, 3, 1}, {3, 0, 1}}, "4")};
  return s;
}

}  // namespace

TEST_CASE("finds the fixed product grid on the half-space pair") {
  auto e = catalog::build("exstates-4x4");
  auto res = search_protocols(e.set, spec_of(SearchClass::P0, 2));
  CHECK(res.found);
  CHECK_FALSE(res.family_exhausted);
  CHECK(res.nodes_explored > 0);
  REQUIRE(res.protocol.has_value());
  CHECK(verify_deterministic(*res.protocol, e.set, 2).ok);
  CHECK(classify(*res.protocol) == ProtocolClass::P0);
}

TEST_CASE("exhaustion certificates on the published hard sets") {
  auto rj = catalog::build("keep-rj-counterexample-5x5");
  auto res = search_protocols(rj.set, spec_of(SearchClass::P2, 2));
  CHECK_FALSE(res.found);
  CHECK(res.family_exhausted);
  CHECK_FALSE(res.protocol.has_value());

  auto dom = catalog::build("bennett9");
  auto res2 = search_protocols(dom.set, spec_of(SearchClass::P2, 1));
  CHECK_FALSE(res2.found);
  CHECK(res2.family_exhausted);
}

TEST_CASE("class ladder: P0 fails where P1 succeeds at rank 2") {
  auto s = needs_one_way();
  auto p0r2 = search_protocols(s, spec_of(SearchClass::P0, 2));
  CHECK_FALSE(p0r2.found);
  CHECK(p0r2.family_exhausted);

  auto p0r1 = search_protocols(s, spec_of(SearchClass::P0, 1));
  CHECK(p0r1.found);
  CHECK(classify(*p0r1.protocol) == ProtocolClass::P0);
  CHECK(verify_deterministic(*p0r1.protocol, s, 1).ok);

  auto p1r2 = search_protocols(s, spec_of(SearchClass::P1, 2));
  CHECK(p1r2.found);
  CHECK(classify(*p1r2.protocol) == ProtocolClass::P1);
  CHECK(verify_deterministic(*p1r2.protocol, s, 2).ok);

  auto p2r2 = search_protocols(s, spec_of(SearchClass::P2, 2));
  CHECK(p2r2.found);
  CHECK(verify_deterministic(*p2r2.protocol, s, 2).ok);
}

TEST_CASE("serial and parallel runs are identical") {
  auto e = catalog::build("appd-5-2-mixed");
  auto sp = spec_of(SearchClass::P0, 1);
  sp.parallel = true;
  auto par = search_protocols(e.set, sp);
  sp.parallel = false;
  auto ser = search_protocols(e.set, sp);
  CHECK(par.found);
  CHECK(ser.found == par.found);
  CHECK(ser.nodes_explored == par.nodes_explored);
  CHECK(io::to_json(*ser.protocol) == io::to_json(*par.protocol));
}

TEST_CASE("pruning changes the node count, never the verdict") {
  auto s = needs_one_way();
  auto sp = spec_of(SearchClass::P1, 2);
  auto pruned = search_protocols(s, sp);
  sp.prune = false;
  auto full = search_protocols(s, sp);
  CHECK(pruned.found);
  CHECK(full.found);
  CHECK(full.nodes_explored >= pruned.nodes_explored);
  CHECK(io::to_json(*pruned.protocol) == io::to_json(*full.protocol));

  auto e = catalog::build("appc-5dim-3states");
  auto sp2 = spec_of(SearchClass::P2, 2);
  auto pruned2 = search_protocols(e.set, sp2);
  sp2.prune = false;
  auto full2 = search_protocols(e.set, sp2);
  CHECK_FALSE(pruned2.found);
  CHECK_FALSE(full2.found);
  CHECK(pruned2.family_exhausted);
  CHECK(full2.family_exhausted);
  CHECK(full2.nodes_explored >= pruned2.nodes_explored);
}

TEST_CASE("searching a rotated set in its own bases mirrors the standard run") {
  auto e = catalog::build("exstates-4x4");
  auto gen = testutil::rng(77);
  Mat va = testutil::random_unitary(4, gen);
  Mat vb = testutil::random_unitary(4, gen);
  StateSet rotated = e.set;
  for (auto& st : rotated.states)
    st.coeff = vb * st.coeff * va.transpose();

  auto standard = search_protocols(e.set, spec_of(SearchClass::P0, 2));

  auto sp = spec_of(SearchClass::P0, 2);
  sp.basis_a = va;
  sp.basis_b = vb;
  auto aligned = search_protocols(rotated, sp);
  CHECK(aligned.found);
  CHECK(aligned.nodes_explored == standard.nodes_explored);
  CHECK(verify_deterministic(*aligned.protocol, rotated, 2).ok);

  // The same set offers nothing aligned with the standard basis.
  auto misaligned = search_protocols(rotated, spec_of(SearchClass::P0, 2));
  CHECK_FALSE(misaligned.found);
  CHECK(misaligned.family_exhausted);
}

TEST_CASE("single-state sets resolve to a bare declaration") {
  StateSet s;
  s.dim_a = s.dim_b = 2;
  s.states = {make_state(2, 2, {{0, 0, 1}, {1, 1, 1}}, "only")};
  auto res = search_protocols(s, spec_of(SearchClass::P2, 2));
  CHECK(res.found);
  CHECK(res.nodes_explored == 1);
  REQUIRE(res.protocol.has_value());
  CHECK(res.protocol->leaf());
  CHECK(res.protocol->declared == 0);
}

TEST_CASE("SearchSpec validation") {
  auto s = needs_one_way();
  CHECK_THROWS_AS(
      (void)search_protocols(s, spec_of(SearchClass::P2, 2, 5)),
      std::invalid_argument);
  CHECK_THROWS_AS((void)search_protocols(s, spec_of(SearchClass::P2, -1)),
                  std::invalid_argument);
  StateSet big;
  big.dim_a = 7;
  big.dim_b = 7;
  big.states = {make_state(7, 7, {{0, 0, 1}}, "1")};
  CHECK_THROWS_AS((void)search_protocols(big, spec_of(SearchClass::P2, 1)),
                  std::invalid_argument);
  auto sp = spec_of(SearchClass::P2, 2);
  sp.basis_a = Mat::Identity(3, 4);
  CHECK_THROWS_AS((void)search_protocols(s, sp), std::invalid_argument);
  sp.basis_a = 2.0 * Mat::Identity(4, 4);  // not unitary
  CHECK_THROWS_AS((void)search_protocols(s, sp), std::invalid_argument);
}

TEST_CASE("round budget limits the tree depth") {
  auto e = catalog::build("appc-5dim-3states");
  // Every state spreads over the whole grid, so one measurement cannot single
  // any of them out; with four rounds the adaptive family succeeds.
  auto shallow = search_protocols(e.set, spec_of(SearchClass::P2, 1, 1));
  auto deep = search_protocols(e.set, spec_of(SearchClass::P2, 1, 4));
  CHECK_FALSE(shallow.found);
  CHECK(shallow.family_exhausted);
  CHECK(deep.found);
  CHECK(verify_deterministic(*deep.protocol, e.set, 1).ok);
}

TEST_CASE("to_string names the search classes") {
  CHECK(to_string(SearchClass::P0) == "P0");
  CHECK(to_string(SearchClass::P1) == "P1");
  CHECK(to_string(SearchClass::P2) == "P2");
}
