#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "locc/catalog.hpp"
#include "locc/protocol.hpp"
#include "testutil.hpp"

using namespace locc;

namespace {

StateSet two_bell_halves() {
  StateSet s;
  s.name = "pair";
  s.dim_a = s.dim_b = 2;
  s.states = {make_state(2, 2, {{0, 0, 1}}, "1"),
              make_state(2, 2, {{1, 1, 1}}, "2")};
  return s;
}

ProtocolTree split_and_declare() {
  return ProtocolNode::make_node(
      block_measurement(Party::A, 2, {{0}, {1}}),
      {ProtocolNode::make_leaf(0), ProtocolNode::make_leaf(1)});
}

bool has_failure(const VerificationReport& r, FailureReason reason) {
  for (const auto& f : r.failures)
    if (f.reason == reason) return true;
  return false;
}

}  // namespace

TEST_CASE("simulate walks every branch in outcome order") {
  auto s = two_bell_halves();
  auto recs = simulate(split_and_declare(), s);
  REQUIRE(recs.size() == 2);
  CHECK(path_string(recs[0].path) == "A:1");
  CHECK(path_string(recs[1].path) == "A:2");
  CHECK(recs[0].declared == 0);
  CHECK(recs[0].survivors == std::vector<int>{0});
  CHECK(recs[0].residual_ranks == std::vector<int>{1, 0});
  CHECK(recs[0].probabilities[0] == doctest::Approx(1.0));
  CHECK(recs[0].probabilities[1] == doctest::Approx(0.0));
  CHECK(approx_equal(recs[0].a_total, subset_projector(2, {0}), 1e-12));
  CHECK(approx_equal(recs[0].b_total, Mat::Identity(2, 2), 1e-12));
}

TEST_CASE("accumulated operators multiply along the path") {
  StateSet s;
  s.dim_a = s.dim_b = 2;
  s.states = {make_state(2, 2, {{0, 0, 1}, {1, 1, 1}}, "phi")};
  auto gen = testutil::rng(17);
  Mat u = testutil::random_unitary(2, gen);
  LocalMeasurement rot;  // one-outcome "measurement" u, then project
  rot.party = Party::A;
  rot.dim = 2;
  rot.kraus = {u};
  auto t = ProtocolNode::make_node(
      rot, {ProtocolNode::make_node(block_measurement(Party::A, 2, {{0}, {1}}),
                                    {ProtocolNode::make_leaf(0),
                                     ProtocolNode::make_leaf(0)})});
  auto recs = simulate(t, s);
  REQUIRE(recs.size() == 2);
  CHECK(approx_equal(recs[0].a_total, subset_projector(2, {0}) * u, 1e-12));
  CHECK(approx_equal(recs[1].a_total, subset_projector(2, {1}) * u, 1e-12));
}

TEST_CASE("verify_deterministic accepts the splitting protocol") {
  auto s = two_bell_halves();
  auto rep = verify_deterministic(split_and_declare(), s, 1);
  CHECK(rep.ok);
  CHECK(rep.failures.empty());
}

TEST_CASE("failure: ambiguous when several states survive") {
  auto s = two_bell_halves();
  auto rep = verify_deterministic(ProtocolNode::make_leaf(0), s, 1);
  CHECK_FALSE(rep.ok);
  CHECK(has_failure(rep, FailureReason::ambiguous));
}

TEST_CASE("failure: wrong state survives / reached error leaf") {
  auto s = two_bell_halves();
  auto swapped = ProtocolNode::make_node(
      block_measurement(Party::A, 2, {{0}, {1}}),
      {ProtocolNode::make_leaf(1), ProtocolNode::make_leaf(0)});
  auto rep = verify_deterministic(swapped, s, 1);
  CHECK_FALSE(rep.ok);
  CHECK(has_failure(rep, FailureReason::wrong_state_survives));

  auto err = ProtocolNode::make_node(
      block_measurement(Party::A, 2, {{0}, {1}}),
      {ProtocolNode::make_leaf(0), ProtocolNode::make_leaf(kUnreachable)});
  auto rep2 = verify_deterministic(err, s, 1);
  CHECK_FALSE(rep2.ok);
  CHECK(has_failure(rep2, FailureReason::wrong_state_survives));
}

TEST_CASE("failure: rank floor not met") {
  auto s = two_bell_halves();
  auto rep = verify_deterministic(split_and_declare(), s, 2);
  CHECK_FALSE(rep.ok);
  CHECK(has_failure(rep, FailureReason::rank_too_low));
}

TEST_CASE("failure: incomplete measurement node") {
  auto s = two_bell_halves();
  LocalMeasurement half;
  half.party = Party::A;
  half.dim = 2;
  half.kraus = {subset_projector(2, {0})};
  auto t = ProtocolNode::make_node(half, {ProtocolNode::make_leaf(0)});
  auto rep = verify_deterministic(t, s, 1);
  CHECK_FALSE(rep.ok);
  CHECK(has_failure(rep, FailureReason::incomplete_node));
}

TEST_CASE("zero-probability branches are skipped, not failed") {
  StateSet s;
  s.dim_a = s.dim_b = 2;
  s.states = {make_state(2, 2, {{0, 0, 1}}, "only")};
  auto t = ProtocolNode::make_node(
      block_measurement(Party::A, 2, {{0}, {1}}),
      {ProtocolNode::make_leaf(0), ProtocolNode::make_leaf(kUnreachable)});
  auto rep = verify_deterministic(t, s, 1);
  CHECK(rep.ok);
  REQUIRE(rep.outcomes.size() == 2);
  CHECK(rep.outcomes[1].survivors.empty());
}

TEST_CASE("verify_rank_preserving uses each state's own floor") {
  StateSet s;
  s.dim_a = s.dim_b = 3;
  s.states = {make_state(3, 3, {{0, 0, 1}, {1, 1, 1}}, "ent"),
              make_state(3, 3, {{2, 2, 1}}, "prod")};
  auto keep = ProtocolNode::make_node(
      block_measurement(Party::A, 3, {{0, 1}, {2}}),
      {ProtocolNode::make_leaf(0), ProtocolNode::make_leaf(1)});
  CHECK(verify_rank_preserving(keep, s).ok);
  // Fine-grained split drops the entangled state to rank 1.
  auto cut = ProtocolNode::make_node(
      block_measurement(Party::A, 3, {{0}, {1}, {2}}),
      {ProtocolNode::make_leaf(0), ProtocolNode::make_leaf(0),
       ProtocolNode::make_leaf(1)});
  auto rep = verify_rank_preserving(cut, s);
  CHECK_FALSE(rep.ok);
  CHECK(has_failure(rep, FailureReason::rank_too_low));
  // The same tree is fine when only rank 1 is demanded.
  CHECK(verify_deterministic(cut, s, 1).ok);
}

TEST_CASE("verify_sep on the six-outcome product POVM") {
  auto e = catalog::build("yu-3x3");
  auto rep = verify_sep(e.povms[0], e.set, 2);
  CHECK(rep.ok);
  for (const auto& rec : rep.outcomes) {
    REQUIRE(rec.path.size() == 1);
    CHECK(rec.path[0].party == 'S');
    if (!rec.survivors.empty())
      CHECK(rec.residual_ranks[rec.survivors[0]] == 2);
  }
  auto bad = e.povms[0];
  bad.outcomes[0].declares = 1;
  CHECK_FALSE(verify_sep(bad, e.set, 2).ok);
}

TEST_CASE("classify: fixed product grids are P0") {
  auto s = two_bell_halves();
  auto bob = block_measurement(Party::B, 2, {{0}, {1}});
  auto t = ProtocolNode::make_node(
      block_measurement(Party::A, 2, {{0}, {1}}),
      {ProtocolNode::make_node(bob, {ProtocolNode::make_leaf(0),
                                     ProtocolNode::make_leaf(kUnreachable)}),
       ProtocolNode::make_node(bob, {ProtocolNode::make_leaf(kUnreachable),
                                     ProtocolNode::make_leaf(1)})});
  CHECK(classify(t) == ProtocolClass::P0);
  CHECK(to_string(ProtocolClass::P0) == "P0");
}

TEST_CASE("classify: conditioning on the other party makes it one-way") {
  auto bob = block_measurement(Party::B, 2, {{0}, {1}});
  auto t = ProtocolNode::make_node(
      block_measurement(Party::A, 2, {{0}, {1}}),
      {ProtocolNode::make_node(bob, {ProtocolNode::make_leaf(0),
                                     ProtocolNode::make_leaf(kUnreachable)}),
       ProtocolNode::make_leaf(1)});
  // Bob measures after A:1 but stops after A:2 - his schedule depends on
  // Alice's outcome, so this cannot be classified "no communication".
  CHECK(classify(t) == ProtocolClass::P1);
}

TEST_CASE("classify: non-projective rounds map P -> K") {
  const double s2 = 1.0 / std::sqrt(2.0);
  LocalMeasurement fuzzy;
  fuzzy.party = Party::A;
  fuzzy.dim = 2;
  fuzzy.kraus = {s2 * Mat::Identity(2, 2), s2 * Mat::Identity(2, 2)};
  auto t = ProtocolNode::make_node(
      fuzzy, {ProtocolNode::make_leaf(0), ProtocolNode::make_leaf(0)});
  CHECK(classify(t) == ProtocolClass::K0);
}

TEST_CASE("classify: catalog regressions across the ladder") {
  CHECK(classify(catalog::build("exstates-4x4").protocols[0]) ==
        ProtocolClass::P0);
  CHECK(classify(catalog::build("beat-schmidt-5x5").protocols[0]) ==
        ProtocolClass::K2);
  CHECK(classify(catalog::build("appc-threestates(8)").protocols[0]) ==
        ProtocolClass::P2);
}

TEST_CASE("classify is stable under outcome relabeling") {
  auto reversed = [](ProtocolTree t) {
    std::reverse(t.measurement->kraus.begin(), t.measurement->kraus.end());
    if (!t.measurement->labels.empty())
      std::reverse(t.measurement->labels.begin(), t.measurement->labels.end());
    std::reverse(t.children.begin(), t.children.end());
    return t;
  };
  for (const char* name : {"exstates-4x4", "appc-threestates(8)"}) {
    auto t = catalog::build(name).protocols[0];
    CHECK(classify(reversed(t)) == classify(t));
  }
}

TEST_CASE("tree validation rejects malformed nodes") {
  auto s = two_bell_halves();
  auto t = ProtocolNode::make_node(block_measurement(Party::A, 2, {{0}, {1}}),
                                   {ProtocolNode::make_leaf(0)});
  CHECK_THROWS_AS(t.validate(2, 2), std::invalid_argument);
  auto wrong_dim = split_and_declare();
  CHECK_THROWS_AS(wrong_dim.validate(3, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)verify_deterministic(split_and_declare(), s, -1),
                  std::invalid_argument);
}

TEST_CASE("probabilities over a complete tree sum to one per state") {
  for (const char* name : {"exstates-4x4", "beat-schmidt-5x5", "ccsp-4x6"}) {
    auto e = catalog::build(name);
    auto recs = simulate(e.protocols[0], e.set);
    for (int j = 0; j < e.set.size(); ++j) {
      double total = 0;
      for (const auto& rec : recs) total += rec.probabilities[j];
      CAPTURE(name);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}
