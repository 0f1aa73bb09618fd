#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "locc/catalog.hpp"
#include "locc/measurement.hpp"
#include "testutil.hpp"

using namespace locc;

TEST_CASE("subset_projector and diag_op build the stated diagonals") {
  Mat p = subset_projector(4, {1, 3});
  CHECK(p(1, 1) == Complex(1, 0));
  CHECK(p(3, 3) == Complex(1, 0));
  CHECK(p(0, 0) == Complex(0, 0));
  CHECK(p.diagonal().sum() == Complex(2, 0));
  Mat d = diag_op(3, {{0, 0.5}, {2, -2.0}});
  CHECK(d(0, 0) == Complex(0.5, 0));
  CHECK(d(1, 1) == Complex(0, 0));
  CHECK(d(2, 2) == Complex(-2, 0));
}

TEST_CASE("block_measurement covers the space and is projective") {
  auto m = block_measurement(Party::B, 4, {{0, 1}, {2, 3}});
  CHECK(m.party == Party::B);
  CHECK(m.outcomes() == 2);
  m.validate();
  CHECK(check_complete(m));
  CHECK(check_projective(m));

  // Partial blocks get a remainder projector appended.
  auto part = block_measurement(Party::A, 4, {{0, 1}});
  CHECK(part.outcomes() == 2);
  CHECK(approx_equal(part.kraus[1], subset_projector(4, {2, 3}), 1e-12));
  CHECK(check_complete(part));
}

TEST_CASE("projector_measurement appends the deficit projector") {
  std::vector<Mat> ps = {subset_projector(3, {0})};
  auto m = projector_measurement(Party::A, 3, ps);
  CHECK(m.outcomes() == 2);
  CHECK(approx_equal(m.kraus[1], subset_projector(3, {1, 2}), 1e-10));
  CHECK(check_complete(m));
  CHECK(check_projective(m));

  auto full = projector_measurement(
      Party::A, 2, {subset_projector(2, {0}), subset_projector(2, {1})});
  CHECK(full.outcomes() == 2);
}

TEST_CASE("check_complete detects missing weight") {
  auto m = block_measurement(Party::A, 3, {{0}, {1}, {2}});
  CHECK(check_complete(m));
  m.kraus.pop_back();
  m.labels.pop_back();
  CHECK_FALSE(check_complete(m));
}

TEST_CASE("check_projective rejects non-idempotent and overlapping sets") {
  LocalMeasurement m;
  m.party = Party::A;
  m.dim = 2;
  const double s = 1.0 / std::sqrt(2.0);
  m.kraus = {s * Mat::Identity(2, 2), s * Mat::Identity(2, 2)};
  m.validate();
  CHECK(check_complete(m));       // sums to I
  CHECK_FALSE(check_projective(m));  // but the operators are not projectors

  LocalMeasurement overlap;
  overlap.party = Party::A;
  overlap.dim = 2;
  overlap.kraus = {subset_projector(2, {0}), subset_projector(2, {0, 1})};
  CHECK_FALSE(check_projective(overlap));
}

TEST_CASE("validate rejects malformed measurements") {
  LocalMeasurement m;
  m.party = Party::A;
  m.dim = 2;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);  // no outcomes
  m.kraus = {Mat::Identity(3, 3)};
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);  // wrong shape
  m.kraus = {Mat::Identity(2, 2)};
  m.labels = {"a", "b"};
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);  // label count
  m.labels = {"a"};
  m.validate();
}

TEST_CASE("separable POVM completeness") {
  auto e = catalog::build("yu-3x3");
  REQUIRE(e.povms.size() == 1);
  auto p = e.povms[0];
  p.validate();
  CHECK(check_sep_complete(p));
  p.outcomes.pop_back();
  CHECK_FALSE(check_sep_complete(p));

  SeparablePovm bad;
  bad.dim_a = 2;
  bad.dim_b = 2;
  bad.outcomes = {{Mat::Identity(3, 3), Mat::Identity(2, 2), 0}};
  CHECK_THROWS_AS((void)check_sep_complete(bad), std::invalid_argument);
}

TEST_CASE("sep POVM element sum matches the explicit kron formula") {
  auto e = catalog::build("yu-3x3");
  const auto& p = e.povms[0];
  Mat sum = Mat::Zero(9, 9);
  for (const auto& o : p.outcomes)
    sum += kron(o.a_op.adjoint() * o.a_op, o.b_op.adjoint() * o.b_op);
  CHECK((sum - Mat::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-12);
}
