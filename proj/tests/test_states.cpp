#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "locc/states.hpp"
#include "testutil.hpp"

using namespace locc;
using testutil::random_matrix;
using testutil::random_unitary;

TEST_CASE("make_state places amplitudes at (row=b, col=a)") {
  auto s = make_state(3, 4, {{2, 1, Complex(0.5, -1)}, {0, 3, 2.0}}, "x");
  CHECK(s.dim_a() == 3);
  CHECK(s.dim_b() == 4);
  CHECK(s.label == "x");
  CHECK(s.coeff(1, 2) == Complex(0.5, -1));
  CHECK(s.coeff(3, 0) == Complex(2, 0));
  CHECK(s.coeff(0, 0) == Complex(0, 0));
}

TEST_CASE("StateSet::validate rejects shape mismatches") {
  StateSet s;
  s.dim_a = 2;
  s.dim_b = 2;
  s.states.push_back(make_state(2, 3, {{0, 0, 1}}));
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("schmidt_rank equals coefficient-matrix rank") {
  CHECK(schmidt_rank(make_state(3, 3, {{0, 0, 1}})) == 1);
  CHECK(schmidt_rank(make_state(2, 2, {{0, 0, 1}, {1, 1, 1}})) == 2);
  auto gen = testutil::rng(3);
  for (int i = 0; i < 50; ++i) {
    BipartiteState s;
    s.coeff = random_matrix(4, 2, gen) * random_matrix(2, 5, gen);
    CAPTURE(i);
    CHECK(schmidt_rank(s) == testutil::elimination_rank(s.coeff));
  }
}

TEST_CASE("reduced_density matches the explicit partial trace") {
  auto gen = testutil::rng(5);
  for (int i = 0; i < 100; ++i) {
    BipartiteState s;
    s.coeff = random_matrix(3, 4, gen);
    CAPTURE(i);
    CHECK(approx_equal(reduced_density(s, Party::A), testutil::trace_out_b(s),
                       1e-10));
    CHECK(approx_equal(reduced_density(s, Party::B), testutil::trace_out_a(s),
                       1e-10));
  }
}

TEST_CASE("reduced densities share the trace |psi|^2 and the Schmidt rank") {
  auto gen = testutil::rng(6);
  BipartiteState s;
  s.coeff = random_matrix(4, 4, gen);
  const double n2 = s.coeff.squaredNorm();
  CHECK(std::abs(reduced_density(s, Party::A).trace().real() - n2) < 1e-9);
  CHECK(std::abs(reduced_density(s, Party::B).trace().real() - n2) < 1e-9);
  CHECK(numeric_rank(reduced_density(s, Party::A)) == schmidt_rank(s));
  CHECK(numeric_rank(reduced_density(s, Party::B)) == schmidt_rank(s));
}

TEST_CASE("residual agrees with applying A (x) B to the ket") {
  auto gen = testutil::rng(9);
  for (int i = 0; i < 100; ++i) {
    BipartiteState s;
    s.coeff = random_matrix(3, 4, gen);
    Mat a = random_matrix(2, 4, gen), b = random_matrix(3, 3, gen);
    auto r = residual(s, a, b);
    CAPTURE(i);
    CHECK(r.dim_a() == 2);
    CHECK(r.dim_b() == 3);
    CHECK(approx_equal(r.coeff, testutil::apply_product(s, a, b), 1e-10));
  }
  BipartiteState s;
  s.coeff = random_matrix(3, 4, gen);
  CHECK_THROWS_AS((void)residual(s, Mat::Identity(3, 3), Mat::Identity(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("hat_rho is the product of the explicit reduced densities") {
  auto gen = testutil::rng(12);
  BipartiteState s;
  s.coeff = random_matrix(3, 2, gen);
  CHECK(approx_equal(hat_rho(s),
                     kron(testutil::trace_out_b(s), testutil::trace_out_a(s)),
                     1e-10));
}

TEST_CASE("pairwise_orthogonal") {
  Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  CHECK(pairwise_orthogonal({p0, p1}));
  CHECK_FALSE(pairwise_orthogonal({p0, p0 + p1}));
  CHECK(pairwise_orthogonal({p0, Mat::Zero(2, 2), p1}));
  CHECK(pairwise_orthogonal({}));
  // Relative criterion: scaling does not change the verdict.
  CHECK_FALSE(pairwise_orthogonal({1e-6 * p0, 1e-6 * (p0 + p1)}));
}

TEST_CASE("multipartite reduced densities and generalized Schmidt rank") {
  MultipartiteState ghz;
  ghz.dims = {2, 2, 2};
  ghz.coeff = Vec::Zero(8);
  ghz.coeff(0) = 1;
  ghz.coeff(7) = 1;
  ghz.validate();
  for (int p = 0; p < 3; ++p) {
    Mat rho = reduced_density(ghz, p);
    CHECK(approx_equal(rho, Mat::Identity(2, 2), 1e-12));
  }
  CHECK(generalized_schmidt_rank(ghz) == 2);

  MultipartiteState prod;
  prod.dims = {2, 3, 2};
  prod.coeff = Vec::Zero(12);
  prod.coeff(0) = 1;
  CHECK(generalized_schmidt_rank(prod) == 1);

  MultipartiteState w;
  w.dims = {2, 2, 2};
  w.coeff = Vec::Zero(8);
  w.coeff(1) = w.coeff(2) = w.coeff(4) = 1;
  CHECK(generalized_schmidt_rank(w) == 2);

  MultipartiteState bad;
  bad.dims = {2, 2};
  bad.coeff = Vec::Zero(3);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("bipartite reduced_density agrees with the 2-party multipartite path") {
  auto gen = testutil::rng(21);
  BipartiteState s;
  s.coeff = random_matrix(3, 2, gen);
  MultipartiteState m;
  m.dims = {2, 3};
  m.coeff = testutil::to_ket(s);
  CHECK(approx_equal(reduced_density(s, Party::A), reduced_density(m, 0), 1e-10));
  CHECK(approx_equal(reduced_density(s, Party::B), reduced_density(m, 1), 1e-10));
}

TEST_CASE("grid_labels reports cell occupancy") {
  StateSet s;
  s.dim_a = 2;
  s.dim_b = 3;
  s.states = {make_state(2, 3, {{0, 0, 1}, {1, 2, 1}}, "u"),
              make_state(2, 3, {{0, 0, 1}, {0, 1, 1e-14}}, "v")};
  auto g = grid_labels(s);
  REQUIRE(g.size() == 2);
  REQUIRE(g[0].size() == 3);
  CHECK(g[0][0] == "u,v");
  CHECK(g[1][2] == "u");
  CHECK(g[0][1].empty());  // below cutoff
  CHECK(g[1][0].empty());
  auto text = render_grid(s);
  CHECK(text.find("u") != std::string::npos);
}

TEST_CASE("Schmidt rank is invariant under local unitaries") {
  auto gen = testutil::rng(31);
  for (int i = 0; i < 50; ++i) {
    const int inner = 1 + i % 3;
    BipartiteState s;
    s.coeff = random_matrix(4, inner, gen) * random_matrix(inner, 3, gen);
    Mat ua = random_unitary(3, gen), ub = random_unitary(4, gen);
    CAPTURE(i);
    CHECK(schmidt_rank(residual(s, ua, ub)) == schmidt_rank(s));
  }
}
