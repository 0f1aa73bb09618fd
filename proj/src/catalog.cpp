#include "locc/catalog.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "locc/analysis.hpp"

namespace locc::catalog {

namespace {

using std::vector;

const double kHalfRt = 1.0 / std::sqrt(2.0);

ProtocolNode leafn(int j) { return ProtocolNode::make_leaf(j); }
ProtocolNode err_leaf() { return ProtocolNode::make_leaf(kUnreachable); }

ProtocolNode node(LocalMeasurement m, vector<ProtocolNode> kids) {
  return ProtocolNode::make_node(std::move(m), std::move(kids));
}

vector<int> range_vec(int lo, int hi) {
  vector<int> v;
  for (int i = lo; i < hi; ++i) v.push_back(i);
  return v;
}

/// Projector onto (|i> + sign |j>)/sqrt(2).
Mat pm_projector(int dim, int i, int j, int sign) {
  Vec v = Vec::Zero(dim);
  v(i) = kHalfRt;
  v(j) = sign * kHalfRt;
  return v * v.adjoint();
}

/// Sum over k < count of projectors onto (|base+2k> + sign |base+2k+1>).
Mat paired_proj(int dim, int base, int count, int sign) {
  Mat p = Mat::Zero(dim, dim);
  for (int k = 0; k < count; ++k)
    p += pm_projector(dim, base + 2 * k, base + 2 * k + 1, sign);
  return p;
}

Mat column_projector(const Vec& v) {
  return v * v.adjoint() / v.squaredNorm();
}

int param(const std::map<std::string, int>& params, const std::string& key,
          int fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::string canon_name(const std::string& base, const vector<int>& vals) {
  std::string n = base + "(";
  for (std::size_t i = 0; i < vals.size(); ++i)
    n += (i ? "," : "") + std::to_string(vals[i]);
  return n + ")";
}

// ---------------------------------------------------------------------------
// Fixed entries

CatalogEntry build_exstates() {
  CatalogEntry e;
  e.name = "exstates-4x4";
  e.summary = "two rank-4 states in 4x4, kept at rank 2 by half-space projectors";
  e.set.name = e.name;
  e.set.dim_a = e.set.dim_b = 4;
  e.set.states = {
      make_state(4, 4, {{0, 2, 1}, {1, 3, 1}, {2, 0, 1}, {3, 1, 1}}, "1"),
      make_state(4, 4, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1}}, "2"),
  };
  auto bob = block_measurement(Party::B, 4, {{0, 1}, {2, 3}});
  e.protocols.push_back(node(
      block_measurement(Party::A, 4, {{0, 1}, {2, 3}}),
      {node(bob, {leafn(1), leafn(0)}), node(bob, {leafn(0), leafn(1)})}));
  e.expected = {"yes", 2, false, "P0"};
  return e;
}

CatalogEntry build_yu() {
  CatalogEntry e;
  e.name = "yu-3x3";
  e.summary = "three rank-2 states told apart by a separable POVM, outside LOCC reach";
  e.set.name = e.name;
  e.set.dim_a = e.set.dim_b = 3;
  e.set.states = {
      make_state(3, 3, {{0, 0, 1}, {2, 2, 1}}, "1"),
      make_state(3, 3, {{0, 1, 1}, {1, 2, 1}}, "2"),
      make_state(3, 3, {{1, 0, 1}, {2, 1, 1}}, "3"),
  };
  const double beta = 2.0 + std::sqrt(3.0);
  const double alpha = (2.0 - std::sqrt(3.0)) / 4.0;
  const double s = std::pow(alpha, 0.25);
  const double sb = s * std::sqrt(beta);
  auto d3 = [&](double w0, double w1, double w2) {
    return diag_op(3, {{0, w0}, {1, w1}, {2, w2}});
  };
  SeparablePovm povm;
  povm.dim_a = povm.dim_b = 3;
  povm.outcomes = {
      {d3(s, 0, sb), d3(s, 0, sb), 0},  {d3(sb, 0, s), d3(sb, 0, s), 0},
      {d3(s, sb, 0), d3(0, s, sb), 1},  {d3(sb, s, 0), d3(0, sb, s), 1},
      {d3(0, s, sb), d3(s, sb, 0), 2},  {d3(0, sb, s), d3(sb, s, 0), 2},
  };
  e.povms.push_back(std::move(povm));
  e.expected = {"yes", 2, true, "SEP"};
  return e;
}

CatalogEntry build_beat_schmidt() {
  CatalogEntry e;
  e.name = "beat-schmidt-5x5";
  e.summary = "four states whose rank sum 12 beats the one-way limit 10, still fine two-way";
  e.set.name = e.name;
  e.set.dim_a = e.set.dim_b = 5;
  e.set.states = {
      make_state(5, 5, {{0, 0, 1}, {1, 1, 1}}, "1"),
      make_state(5, 5, {{0, 2, 1}, {1, 3, 1}, {2, 4, 1}}, "2"),
      make_state(5, 5, {{2, 0, 1}, {3, 1, 1}, {4, 2, 1}}, "3"),
      make_state(5, 5, {{0, 4, 1}, {2, 2, 1}, {3, 3, 1}, {4, 0, 1}}, "4"),
  };
  LocalMeasurement alice;
  alice.party = Party::A;
  alice.dim = 5;
  alice.kraus = {diag_op(5, {{0, 1}, {1, 1}, {2, 1}, {3, kHalfRt}}),
                 diag_op(5, {{3, kHalfRt}, {4, 1}})};
  alice.labels = {"A1", "A2"};
  LocalMeasurement bob;
  bob.party = Party::B;
  bob.dim = 5;
  bob.kraus = {diag_op(5, {{0, 1}, {1, 1}}),
               diag_op(5, {{2, 1}, {3, kHalfRt}}),
               diag_op(5, {{3, kHalfRt}, {4, 1}})};
  bob.labels = {"B1", "B2", "B3"};
  auto a_0123 = block_measurement(Party::A, 5, {{0, 1}, {2, 3}});
  auto a_1203 = block_measurement(Party::A, 5, {{1, 2}, {0, 3}});
  auto b_1203 = block_measurement(Party::B, 5, {{1, 2}, {0, 3}});
  e.protocols.push_back(node(
      alice,
      {node(bob,
            {node(a_0123, {leafn(0), leafn(2), err_leaf()}),
             node(a_0123, {leafn(1), leafn(3), err_leaf()}),
             node(a_1203, {leafn(1), leafn(3), err_leaf()})}),
       node(b_1203, {leafn(2), leafn(3), err_leaf()})}));
  e.expected = {"yes", 2, false, "K2"};
  return e;
}

CatalogEntry build_sum10() {
  CatalogEntry e;
  e.name = "sum10-3x3";
  e.summary = "six states in 3x3 with rank sum 10 > 9, distinguishable two-way at rank 1";
  e.set.name = e.name;
  e.set.dim_a = e.set.dim_b = 3;
  const double h = kHalfRt;
  const double t = 1.0 / 3.0;
  // Alice kets phi0 = (1,2,2)/3, phi1 = (2,1,-2)/3, phi2 = (2,-2,1)/3 form an
  // orthonormal basis; |0>+|1> = phi0+phi1 and |0>+|2> = phi0+phi2.
  e.set.states = {
      make_state(3, 3,
                 {{0, 0, h}, {0, 2, h * t}, {1, 2, 2 * h * t}, {2, 2, 2 * h * t},
                  {0, 1, 1}, {1, 1, 1}},
                 "1"),
      make_state(3, 3,
                 {{0, 0, h}, {0, 2, h * t}, {1, 2, 2 * h * t}, {2, 2, 2 * h * t},
                  {0, 1, -1}, {2, 1, -1}},
                 "2"),
      make_state(3, 3, {{1, 0, 1}}, "3"),
      make_state(3, 3, {{2, 0, 1}}, "4"),
      make_state(3, 3, {{0, 2, 2 * t}, {1, 2, t}, {2, 2, -2 * t}}, "5"),
      make_state(3, 3, {{0, 2, 2 * t}, {1, 2, -2 * t}, {2, 2, t}}, "6"),
  };
  LocalMeasurement bob_root;
  bob_root.party = Party::B;
  bob_root.dim = 3;
  bob_root.kraus = {diag_op(3, {{0, 1}, {1, kHalfRt}}),
                    diag_op(3, {{2, 1}, {1, kHalfRt}})};
  bob_root.labels = {"B1", "B2"};
  Vec phi0(3), phi1(3), phi2(3);
  phi0 << t, 2 * t, 2 * t;
  phi1 << 2 * t, t, -2 * t;
  phi2 << 2 * t, -2 * t, t;
  auto alice_std = block_measurement(Party::A, 3, {{0}, {1}, {2}});
  auto alice_phi = projector_measurement(
      Party::A, 3,
      {column_projector(phi0), column_projector(phi1), column_projector(phi2)});
  auto bob_pm01 = projector_measurement(
      Party::B, 3, {pm_projector(3, 0, 1, +1), pm_projector(3, 0, 1, -1)});
  auto bob_pm21 = projector_measurement(
      Party::B, 3, {pm_projector(3, 2, 1, +1), pm_projector(3, 2, 1, -1)});
  auto bob_10 = block_measurement(Party::B, 3, {{1}, {0}});
  auto bob_12 = block_measurement(Party::B, 3, {{1}, {2}});
  e.protocols.push_back(node(
      bob_root,
      {node(alice_std,
            {node(bob_pm01, {leafn(0), leafn(1), err_leaf()}),
             node(bob_10, {leafn(0), leafn(2), err_leaf()}),
             node(bob_10, {leafn(1), leafn(3), err_leaf()})}),
       node(alice_phi,
            {node(bob_pm21, {leafn(0), leafn(1), err_leaf()}),
             node(bob_12, {leafn(0), leafn(4), err_leaf()}),
             node(bob_12, {leafn(1), leafn(5), err_leaf()})})}));
  e.expected = {"yes", 1, false, "K2"};
  return e;
}

CatalogEntry build_ccsp() {
  CatalogEntry e;
  e.name = "ccsp-4x6";
  e.summary = "five states whose supports split level by level into a complete cascade";
  e.set.name = e.name;
  e.set.dim_a = 4;
  e.set.dim_b = 6;
  e.set.states = {
      make_state(4, 6, {{0, 0, 1}, {1, 1, 1}}, "1"),
      make_state(4, 6, {{0, 2, 1}, {1, 3, 1}}, "2"),
      make_state(4, 6, {{2, 0, 1}, {2, 2, 1}, {3, 1, 1}, {3, 3, 1}}, "3"),
      make_state(4, 6, {{2, 0, 1}, {2, 2, -1}, {3, 1, 1}, {3, 3, -1}}, "4"),
      make_state(4, 6, {{1, 4, 1}, {2, 5, 1}}, "5"),
  };
  e.protocols.push_back(
      partition_to_protocol(cascading_partition(e.set, Party::B), e.set));
  e.expected = {"yes", 2, true, "P2"};
  return e;
}

CatalogEntry build_not_ccsp() {
  CatalogEntry e;
  e.name = "not-ccsp-3x3";
  e.summary = "four product states with no support split, yet trivially distinguishable";
  e.set.name = e.name;
  e.set.dim_a = e.set.dim_b = 3;
  e.set.states = {
      make_state(3, 3, {{0, 0, 1}, {1, 0, 1}}, "1"),
      make_state(3, 3, {{2, 0, 1}, {2, 1, 1}}, "2"),
      make_state(3, 3, {{0, 1, 1}, {0, 2, 1}}, "3"),
      make_state(3, 3, {{1, 2, 1}, {2, 2, 1}}, "4"),
  };
  auto bob = block_measurement(Party::B, 3, {{0}, {1}, {2}});
  e.protocols.push_back(
      node(block_measurement(Party::A, 3, {{0}, {1}, {2}}),
           {node(bob, {leafn(0), leafn(2), leafn(2)}),
            node(bob, {leafn(0), err_leaf(), leafn(3)}),
            node(bob, {leafn(1), leafn(1), leafn(3)})}));
  e.expected = {"yes", 1, true, "P0"};
  return e;
}

CatalogEntry build_keep_rj() {
  CatalogEntry e;
  e.name = "keep-rj-counterexample-5x5";
  e.summary = "four rank-2 states passing the product-orthogonality test but defeating search";
  e.set.name = e.name;
  e.set.dim_a = e.set.dim_b = 5;
  e.set.states = {
      make_state(5, 5, {{0, 1, 1}, {1, 2, 1}}, "1"),
      make_state(5, 5, {{1, 3, 1}, {2, 4, 1}}, "2"),
      make_state(5, 5, {{2, 0, 1}, {3, 1, 1}}, "3"),
      make_state(5, 5, {{3, 2, 1}, {4, 3, 1}}, "4"),
  };
  e.expected = {"unknown-under-search", 2, false, ""};
  return e;
}

CatalogEntry build_bennett9() {
  CatalogEntry e;
  e.name = "bennett9";
  e.summary = "nine domino states, locally indistinguishable despite being product";
  e.set = bennett_domino_states();
  e.expected = {"unknown-under-search", 1, false, ""};
  return e;
}

CatalogEntry build_appc_5dim() {
  CatalogEntry e;
  e.name = "appc-5dim-3states";
  e.summary = "diagonal plus two shifts in 5x5, needing two-way back-and-forth";
  e.set.name = e.name;
  e.set.dim_a = e.set.dim_b = 5;
  for (int j = 0; j < 3; ++j) {
    int shift = j == 0 ? 0 : j + 1;  // 0, 2, 3
    vector<Term> terms;
    for (int k = 0; k < 5; ++k) terms.push_back({k, (k + shift) % 5, 1.0});
    e.set.states.push_back(make_state(5, 5, terms, std::to_string(j + 1)));
  }
  auto a01_234 = block_measurement(Party::A, 5, {{0, 1}, {2, 3, 4}});
  auto b_states1 = block_measurement(Party::B, 5, {{0, 1}, {2}, {3}, {4}});
  auto a_01 = block_measurement(Party::A, 5, {{0}, {1}});
  auto b_states2 = block_measurement(Party::B, 5, {{2, 3}, {4}, {0, 1}});
  auto a_23_4 = block_measurement(Party::A, 5, {{2, 3}, {4}});
  auto a_2_4 = block_measurement(Party::A, 5, {{2}, {4}});
  auto a_2_3_4 = block_measurement(Party::A, 5, {{2}, {3}, {4}});
  auto b_0_1 = block_measurement(Party::B, 5, {{0}, {1}});
  e.protocols.push_back(node(
      a01_234,
      {node(b_states1,
            {leafn(0), leafn(1),
             node(a_01, {leafn(2), leafn(1), err_leaf()}), leafn(2)}),
       node(b_states2,
            {node(a_23_4, {leafn(0), leafn(2), err_leaf()}),
             node(a_2_4, {leafn(1), leafn(0), err_leaf()}),
             node(a_2_3_4,
                  {leafn(2), node(b_0_1, {leafn(1), leafn(2), err_leaf()}),
                   leafn(1), err_leaf()})})}));
  e.expected = {"yes", 1, false, "P2"};
  return e;
}

CatalogEntry build_appd_5_2_mixed() {
  CatalogEntry e;
  e.name = "appd-5-2-mixed";
  e.summary = "diagonal plus scrambled shift in 5x5; residual ranks vary per outcome";
  e.set.name = e.name;
  e.set.dim_a = e.set.dim_b = 5;
  vector<Term> diag;
  for (int k = 0; k < 5; ++k) diag.push_back({k, k, 1.0});
  e.set.states = {
      make_state(5, 5, diag, "1"),
      make_state(5, 5, {{0, 2, 1}, {1, 3, 1}, {2, 0, 1}, {3, 4, 1}, {4, 1, 1}},
                 "2"),
  };
  const int declared[3][3] = {{0, 1, kUnreachable},
                              {1, 0, 1},
                              {1, kUnreachable, 0}};
  auto bob = block_measurement(Party::B, 5, {{0, 1}, {2, 3}, {4}});
  vector<ProtocolNode> kids;
  for (int l = 0; l < 3; ++l) {
    vector<ProtocolNode> leaves;
    for (int m = 0; m < 3; ++m) leaves.push_back(leafn(declared[l][m]));
    kids.push_back(node(bob, std::move(leaves)));
  }
  e.protocols.push_back(
      node(block_measurement(Party::A, 5, {{0, 1}, {2, 3}, {4}}), std::move(kids)));
  e.expected = {"yes", 1, false, "P0"};
  return e;
}

// ---------------------------------------------------------------------------
// Parameterized entries

CatalogEntry build_schmidt_sum_a(int da, int db, int r) {
  if (r < 1 || da < r || db < da)
    throw std::invalid_argument(
        "schmidt-sum-A: need 1 <= r <= da <= db (got da=" + std::to_string(da) +
        ", db=" + std::to_string(db) + ", r=" + std::to_string(r) + ")");
  int n_a = da / r, a = da - n_a * r, n_b = db / r;
  CatalogEntry e;
  e.name = canon_name("schmidt-sum-A", {da, db, r});
  e.summary = "full-rank shifted states saturating the rank-sum limit da*floor(db/r)";
  e.params_doc = "da,db,r";
  e.set.name = e.name;
  e.set.dim_a = da;
  e.set.dim_b = db;
  for (int j = 0; j < n_b; ++j) {
    vector<Term> terms;
    for (int k = 0; k < da; ++k) terms.push_back({k, (k + j * r) % db, 1.0});
    e.set.states.push_back(make_state(da, db, terms, std::to_string(j + 1)));
  }
  // Alice splits her space into floor(da/r) blocks of r rows; with a = da mod r
  // nonzero, the last block and the final r rows share weight 1/2 so the two
  // extra outcomes still resolve r rows each.
  LocalMeasurement alice;
  alice.party = Party::A;
  alice.dim = da;
  vector<vector<int>> row_sets;
  for (int l = 0; l + 1 < n_a; ++l) {
    alice.kraus.push_back(subset_projector(da, range_vec(l * r, (l + 1) * r)));
    row_sets.push_back(range_vec(l * r, (l + 1) * r));
  }
  {
    vector<std::pair<int, double>> w;
    for (int k = 0; k < r; ++k)
      w.push_back({(n_a - 1) * r + k, (a > 0 && k >= a) ? kHalfRt : 1.0});
    alice.kraus.push_back(diag_op(da, w));
    row_sets.push_back(range_vec((n_a - 1) * r, n_a * r));
  }
  if (a > 0) {
    vector<std::pair<int, double>> w;
    for (int k = 0; k < r; ++k)
      w.push_back({da - r + k, k < r - a ? kHalfRt : 1.0});
    alice.kraus.push_back(diag_op(da, w));
    row_sets.push_back(range_vec(da - r, da));
  }
  vector<ProtocolNode> kids;
  for (const auto& rows : row_sets) {
    vector<vector<int>> blocks;
    for (int j = 0; j < n_b; ++j) {
      vector<int> cols;
      for (int k : rows) cols.push_back((k + j * r) % db);
      blocks.push_back(std::move(cols));
    }
    auto bob = block_measurement(Party::B, db, blocks);
    vector<ProtocolNode> leaves;
    for (int j = 0; j < n_b; ++j) leaves.push_back(leafn(j));
    while (static_cast<int>(leaves.size()) < bob.outcomes())
      leaves.push_back(err_leaf());
    kids.push_back(node(bob, std::move(leaves)));
  }
  e.protocols.push_back(node(alice, std::move(kids)));
  e.expected = {"yes", r, r == da,
                a > 0 ? "K1" : (db % r == 0 ? "P0" : "P1")};
  return e;
}

CatalogEntry build_schmidt_sum_b(int da, int db, int r) {
  int n_a = r >= 1 ? da / r : 0, a = da - n_a * r;
  if (r < 1 || da <= db || n_a < 1 || db < r + a)
    throw std::invalid_argument(
        "schmidt-sum-B: need 1 <= r, db < da, da = n*r + a with r + a <= db "
        "(got da=" + std::to_string(da) + ", db=" + std::to_string(db) +
        ", r=" + std::to_string(r) + ")");
  int n_b = db / r;
  CatalogEntry e;
  e.name = canon_name("schmidt-sum-B", {da, db, r});
  e.summary = "block-shifted states (last band rank r+a) saturating da*floor(db/r)";
  e.params_doc = "da,db,r";
  e.set.name = e.name;
  e.set.dim_a = da;
  e.set.dim_b = db;
  for (int n = 0; n < n_a; ++n) {
    int kmax = (n == n_a - 1) ? r + a : r;
    for (int j = 0; j < n_b; ++j) {
      vector<Term> terms;
      for (int k = 0; k < kmax; ++k)
        terms.push_back({(k + n * r) % da, (k + j * r) % db, 1.0});
      e.set.states.push_back(
          make_state(da, db, terms, std::to_string(n * n_b + j + 1)));
    }
  }
  LocalMeasurement alice;
  alice.party = Party::A;
  alice.dim = da;
  struct Branch {
    int band;    // which group of states survives
    int k_base;  // first k-index of theirs that this outcome keeps
  };
  vector<Branch> branches;
  for (int l = 0; l + 1 < n_a; ++l) {
    alice.kraus.push_back(subset_projector(da, range_vec(l * r, (l + 1) * r)));
    branches.push_back({l, 0});
  }
  {
    vector<std::pair<int, double>> w;
    for (int k = 0; k < r; ++k)
      w.push_back({(n_a - 1) * r + k, (a > 0 && k >= a) ? kHalfRt : 1.0});
    alice.kraus.push_back(diag_op(da, w));
    branches.push_back({n_a - 1, 0});
  }
  if (a > 0) {
    vector<std::pair<int, double>> w;
    for (int k = 0; k < r; ++k)
      w.push_back({da - r + k, k < r - a ? kHalfRt : 1.0});
    alice.kraus.push_back(diag_op(da, w));
    branches.push_back({n_a - 1, a});
  }
  vector<ProtocolNode> kids;
  for (const auto& br : branches) {
    vector<vector<int>> blocks;
    for (int j = 0; j < n_b; ++j) {
      vector<int> cols;
      for (int k = br.k_base; k < br.k_base + r; ++k)
        cols.push_back((k + j * r) % db);
      blocks.push_back(std::move(cols));
    }
    auto bob = block_measurement(Party::B, db, blocks);
    vector<ProtocolNode> leaves;
    for (int j = 0; j < n_b; ++j) leaves.push_back(leafn(br.band * n_b + j));
    while (static_cast<int>(leaves.size()) < bob.outcomes())
      leaves.push_back(err_leaf());
    kids.push_back(node(bob, std::move(leaves)));
  }
  e.protocols.push_back(node(alice, std::move(kids)));
  e.expected = {"yes", r, false, a > 0 ? "K1" : (db % r == 0 ? "P0" : "P1")};
  return e;
}

CatalogEntry build_one_way_full_rank(int da, int db) {
  if (da < 1 || db < da)
    throw std::invalid_argument("one-way-full-rank: need 1 <= da <= db");
  CatalogEntry e;
  e.name = canon_name("one-way-full-rank", {da, db});
  e.summary = "db rank-da states distinguished cell by cell in the standard bases";
  e.params_doc = "da,db";
  e.set.name = e.name;
  e.set.dim_a = da;
  e.set.dim_b = db;
  for (int j = 0; j < db; ++j) {
    vector<Term> terms;
    for (int k = 0; k < da; ++k) terms.push_back({k, (j + k) % db, 1.0});
    e.set.states.push_back(make_state(da, db, terms, std::to_string(j + 1)));
  }
  vector<vector<int>> a_singles, b_singles;
  for (int k = 0; k < da; ++k) a_singles.push_back({k});
  for (int c = 0; c < db; ++c) b_singles.push_back({c});
  auto bob = block_measurement(Party::B, db, b_singles);
  vector<ProtocolNode> kids;
  for (int k = 0; k < da; ++k) {
    vector<ProtocolNode> leaves;
    for (int c = 0; c < db; ++c) leaves.push_back(leafn((c - k + db) % db));
    kids.push_back(node(bob, std::move(leaves)));
  }
  e.protocols.push_back(
      node(block_measurement(Party::A, da, a_singles), std::move(kids)));
  e.expected = {"yes", 1, da == 1, "P0"};
  return e;
}

CatalogEntry build_appc_threestates(int d) {
  if (d < 8 || d % 4 != 0)
    throw std::invalid_argument(
        "appc-threestates: dimension must be a multiple of 4 and >= 8 (got " +
        std::to_string(d) + ")");
  int h = d / 2, q = d / 4;
  CatalogEntry e;
  e.name = canon_name("appc-threestates", {d});
  e.summary = "diagonal state plus a +/- shifted pair; matched halves finish early";
  e.params_doc = "d";
  e.set.name = e.name;
  e.set.dim_a = e.set.dim_b = d;
  vector<Term> t1, t2, t3;
  for (int k = 0; k < d; ++k) {
    t1.push_back({k, k, 1.0});
    t2.push_back({k, (k + h) % d, 1.0});
    t3.push_back({k, (k + h) % d, k % 2 ? -1.0 : 1.0});
  }
  e.set.states = {make_state(d, d, t1, "1"), make_state(d, d, t2, "2"),
                  make_state(d, d, t3, "3")};
  auto halves_a = block_measurement(Party::A, d, {range_vec(0, h), range_vec(h, d)});
  auto halves_b = block_measurement(Party::B, d, {range_vec(0, h), range_vec(h, d)});
  // After mismatched halves, Bob resolves +/- pairs on his side, then Alice on
  // hers; (+,+) and (-,-) recover state 2, the mixed signs state 3.
  auto pm_stage = [&](int bob_base, int alice_base) {
    auto alice_for = [&](int first, int second) {
      auto am = projector_measurement(
          Party::A, d,
          {paired_proj(d, alice_base, q, +1), paired_proj(d, alice_base, q, -1)});
      return node(am, {leafn(first), leafn(second), err_leaf()});
    };
    auto bm = projector_measurement(
        Party::B, d,
        {paired_proj(d, bob_base, q, +1), paired_proj(d, bob_base, q, -1)});
    return node(bm, {alice_for(1, 2), alice_for(2, 1), err_leaf()});
  };
  e.protocols.push_back(
      node(halves_a, {node(halves_b, {leafn(0), pm_stage(h, 0)}),
                      node(halves_b, {pm_stage(0, h), leafn(0)})}));
  e.expected = {"yes", q, false, "P2"};
  return e;
}

CatalogEntry build_appd_shift(int d, int n) {
  if (d < 1 || n < 1 || d / n < 1 || d % (d / n) != 0)
    throw std::invalid_argument(
        "appd-shift: need d = m * floor(d/n) for whole blocks (got d=" +
        std::to_string(d) + ", n=" + std::to_string(n) + ")");
  int s = d / n, nblocks = d / s;
  CatalogEntry e;
  e.name = canon_name("appd-shift", {d, n});
  e.summary = "n cyclic shift states cut into aligned bands of floor(d/n) rows";
  e.params_doc = "d,n";
  e.set.name = e.name;
  e.set.dim_a = e.set.dim_b = d;
  for (int j = 0; j < n; ++j) {
    vector<Term> terms;
    for (int k = 0; k < d; ++k) terms.push_back({k, (k + j * s) % d, 1.0});
    e.set.states.push_back(make_state(d, d, terms, std::to_string(j + 1)));
  }
  vector<vector<int>> bands;
  for (int l = 0; l < nblocks; ++l) bands.push_back(range_vec(l * s, (l + 1) * s));
  auto bob = block_measurement(Party::B, d, bands);
  vector<ProtocolNode> kids;
  for (int l = 0; l < nblocks; ++l) {
    vector<ProtocolNode> leaves;
    for (int lp = 0; lp < nblocks; ++lp) {
      int j = (lp - l + nblocks) % nblocks;
      leaves.push_back(j < n ? leafn(j) : err_leaf());
    }
    kids.push_back(node(bob, std::move(leaves)));
  }
  e.protocols.push_back(
      node(block_measurement(Party::A, d, bands), std::move(kids)));
  e.expected = {"yes", s, s == d, "P0"};
  return e;
}

CatalogEntry build_block_diagonal(int da, int db, int r) {
  if (da < 1 || db < 1 || r < 1 || r > da || r > db)
    throw std::invalid_argument("block-diagonal: need 1 <= r <= min(da, db)");
  int n_a = da / r, n_b = db / r;
  CatalogEntry e;
  e.name = canon_name("block-diagonal", {da, db, r});
  e.summary = "one rank-r state per r x r block of the grid; counts hit the limit";
  e.params_doc = "da,db,r";
  e.set.name = e.name;
  e.set.dim_a = da;
  e.set.dim_b = db;
  for (int i = 0; i < n_a; ++i)
    for (int j = 0; j < n_b; ++j) {
      vector<Term> terms;
      for (int k = 0; k < r; ++k) terms.push_back({i * r + k, j * r + k, 1.0});
      e.set.states.push_back(
          make_state(da, db, terms, std::to_string(i * n_b + j + 1)));
    }
  vector<vector<int>> a_blocks, b_blocks;
  for (int i = 0; i < n_a; ++i) a_blocks.push_back(range_vec(i * r, (i + 1) * r));
  for (int j = 0; j < n_b; ++j) b_blocks.push_back(range_vec(j * r, (j + 1) * r));
  auto alice = block_measurement(Party::A, da, a_blocks);
  auto bob = block_measurement(Party::B, db, b_blocks);
  vector<ProtocolNode> kids;
  for (int i = 0; i < n_a; ++i) {
    vector<ProtocolNode> leaves;
    for (int j = 0; j < n_b; ++j) leaves.push_back(leafn(i * n_b + j));
    while (static_cast<int>(leaves.size()) < bob.outcomes())
      leaves.push_back(err_leaf());
    kids.push_back(node(bob, std::move(leaves)));
  }
  // Bob measures the same blocks in Alice's zero-probability remainder branch
  // too, keeping his schedule independent of her outcome.
  while (static_cast<int>(kids.size()) < alice.outcomes())
    kids.push_back(node(
        bob, vector<ProtocolNode>(static_cast<std::size_t>(bob.outcomes()),
                                  err_leaf())));
  e.protocols.push_back(node(alice, std::move(kids)));
  e.expected = {"yes", r, true, "P0"};
  return e;
}

struct EntryDef {
  std::string name;
  vector<std::string> param_names;
  vector<int> defaults;
};

const vector<EntryDef>& entry_defs() {
  static const vector<EntryDef> defs = {
      {"exstates-4x4", {}, {}},
      {"yu-3x3", {}, {}},
      {"beat-schmidt-5x5", {}, {}},
      {"sum10-3x3", {}, {}},
      {"ccsp-4x6", {}, {}},
      {"not-ccsp-3x3", {}, {}},
      {"keep-rj-counterexample-5x5", {}, {}},
      {"bennett9", {}, {}},
      {"schmidt-sum-A", {"da", "db", "r"}, {4, 6, 3}},
      {"schmidt-sum-B", {"da", "db", "r"}, {9, 7, 2}},
      {"one-way-full-rank", {"da", "db"}, {3, 4}},
      {"appc-threestates", {"d"}, {8}},
      {"appc-5dim-3states", {}, {}},
      {"appd-shift", {"d", "n"}, {6, 2}},
      {"appd-5-2-mixed", {}, {}},
      {"block-diagonal", {"da", "db", "r"}, {5, 5, 2}},
  };
  return defs;
}

CatalogEntry dispatch(const std::string& base,
                      const std::map<std::string, int>& params) {
  const EntryDef* def = nullptr;
  for (const auto& d : entry_defs())
    if (d.name == base) def = &d;
  if (!def) throw std::invalid_argument("unknown catalog entry '" + base + "'");
  for (const auto& [key, value] : params) {
    (void)value;
    bool known = false;
    for (const auto& p : def->param_names) known = known || p == key;
    if (!known)
      throw std::invalid_argument("entry '" + base + "' has no parameter '" +
                                  key + "'");
  }
  auto p = [&](int i) {
    return param(params, def->param_names[i], def->defaults[i]);
  };
  if (base == "exstates-4x4") return build_exstates();
  if (base == "yu-3x3") return build_yu();
  if (base == "beat-schmidt-5x5") return build_beat_schmidt();
  if (base == "sum10-3x3") return build_sum10();
  if (base == "ccsp-4x6") return build_ccsp();
  if (base == "not-ccsp-3x3") return build_not_ccsp();
  if (base == "keep-rj-counterexample-5x5") return build_keep_rj();
  if (base == "bennett9") return build_bennett9();
  if (base == "schmidt-sum-A") return build_schmidt_sum_a(p(0), p(1), p(2));
  if (base == "schmidt-sum-B") return build_schmidt_sum_b(p(0), p(1), p(2));
  if (base == "one-way-full-rank") return build_one_way_full_rank(p(0), p(1));
  if (base == "appc-threestates") return build_appc_threestates(p(0));
  if (base == "appc-5dim-3states") return build_appc_5dim();
  if (base == "appd-shift") return build_appd_shift(p(0), p(1));
  if (base == "appd-5-2-mixed") return build_appd_5_2_mixed();
  return build_block_diagonal(p(0), p(1), p(2));
}

// Splits "name(p1,p2)" into the base name and positional values.
bool parse_positional(const std::string& name, std::string& base,
                      vector<int>& vals) {
  auto open = name.find('(');
  if (open == std::string::npos) {
    base = name;
    return true;
  }
  if (name.back() != ')') return false;
  base = name.substr(0, open);
  std::string inner = name.substr(open + 1, name.size() - open - 2);
  std::istringstream in(inner);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) return false;
      vals.push_back(v);
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& d : entry_defs()) out.push_back(d.name);
  return out;
}

bool is_catalog_name(const std::string& name) {
  std::string base;
  vector<int> vals;
  if (!parse_positional(name, base, vals)) return false;
  for (const auto& d : entry_defs())
    if (d.name == base)
      return vals.empty() || vals.size() == d.param_names.size();
  return false;
}

CatalogEntry build(const std::string& name,
                   const std::map<std::string, int>& params) {
  std::string base;
  vector<int> vals;
  if (!parse_positional(name, base, vals))
    throw std::invalid_argument("malformed catalog name '" + name + "'");
  if (vals.empty()) return dispatch(base, params);
  if (!params.empty())
    throw std::invalid_argument(
        "give parameters either positionally or by name, not both");
  const EntryDef* def = nullptr;
  for (const auto& d : entry_defs())
    if (d.name == base) def = &d;
  if (!def) throw std::invalid_argument("unknown catalog entry '" + base + "'");
  if (vals.size() != def->param_names.size())
    throw std::invalid_argument("entry '" + base + "' takes " +
                                std::to_string(def->param_names.size()) +
                                " parameters");
  std::map<std::string, int> named;
  for (std::size_t i = 0; i < vals.size(); ++i)
    named[def->param_names[i]] = vals[i];
  return dispatch(base, named);
}

EntryCheck verify_entry(const CatalogEntry& e, Tolerance tol) {
  EntryCheck out;
  auto fail = [&](const std::string& msg) { out.notes.push_back(msg); };
  try {
    e.set.validate();
  } catch (const std::exception& ex) {
    fail(std::string("state set invalid: ") + ex.what());
    return out;
  }
  std::vector<Mat> coeffs;
  for (const auto& st : e.set.states) coeffs.push_back(st.coeff);
  if (!pairwise_orthogonal(coeffs, tol))
    fail("states are not mutually orthogonal");
  if (e.expected.distinguishable == "yes" && e.protocols.empty() &&
      e.povms.empty())
    fail("claimed distinguishable but provides no protocol");
  for (std::size_t i = 0; i < e.protocols.size(); ++i) {
    const auto& t = e.protocols[i];
    auto rep = verify_deterministic(t, e.set, e.expected.r_floor, tol);
    if (!rep.ok)
      for (const auto& f : rep.failures)
        fail("protocol " + std::to_string(i + 1) + " [" + path_string(f.path) +
             "] " + to_string(f.reason) + ": " + f.detail);
    if (e.expected.rank_preserving) {
      auto rp = verify_rank_preserving(t, e.set, tol);
      if (!rp.ok)
        fail("protocol " + std::to_string(i + 1) +
             " does not preserve the original Schmidt ranks");
    }
    if (!e.expected.protocol_class.empty() &&
        e.expected.protocol_class != "SEP") {
      std::string got = to_string(classify(t, tol));
      if (got != e.expected.protocol_class) {
        if (e.expected.protocol_class[0] == 'P' && got[0] == 'K')
          fail("protocol " + std::to_string(i + 1) + " " +
               to_string(FailureReason::non_projective_where_required));
        else
          fail("protocol " + std::to_string(i + 1) + " classifies as " + got +
               ", expected " + e.expected.protocol_class);
      }
    }
  }
  for (std::size_t i = 0; i < e.povms.size(); ++i) {
    auto rep = verify_sep(e.povms[i], e.set, e.expected.r_floor, tol);
    if (!rep.ok)
      for (const auto& f : rep.failures)
        fail("POVM " + std::to_string(i + 1) + " [" + path_string(f.path) +
             "] " + to_string(f.reason) + ": " + f.detail);
    if (e.expected.rank_preserving) {
      std::vector<int> floors;
      for (const auto& st : e.set.states)
        floors.push_back(schmidt_rank(st, tol));
      for (const auto& recs : rep.outcomes)
        for (int j : recs.survivors)
          if (recs.residual_ranks[j] < floors[j])
            fail("POVM " + std::to_string(i + 1) +
                 " lowers the rank of state " + e.set.states[j].label);
    }
  }
  out.ok = out.notes.empty();
  return out;
}

}  // namespace locc::catalog
