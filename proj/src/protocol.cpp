#include "locc/protocol.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>

namespace locc {

void ProtocolNode::validate(int dim_a, int dim_b) const {
  if (leaf()) {
    if (!children.empty())
      throw std::invalid_argument("protocol: leaf with children");
    return;
  }
  measurement->validate();
  int want = measurement->party == Party::A ? dim_a : dim_b;
  if (measurement->dim != want)
    throw std::invalid_argument("protocol: measurement dimension mismatch");
  if (static_cast<int>(children.size()) != measurement->outcomes())
    throw std::invalid_argument("protocol: child count != outcome count");
  for (const auto& c : children) c.validate(dim_a, dim_b);
}

std::string to_string(ProtocolClass c) {
  switch (c) {
    case ProtocolClass::P0: return "P0";
    case ProtocolClass::K0: return "K0";
    case ProtocolClass::P1: return "P1";
    case ProtocolClass::K1: return "K1";
    case ProtocolClass::P2: return "P2";
    case ProtocolClass::K2: return "K2";
  }
  return "?";
}

std::string to_string(FailureReason r) {
  switch (r) {
    case FailureReason::ambiguous: return "ambiguous";
    case FailureReason::wrong_state_survives: return "wrong-state-survives";
    case FailureReason::rank_too_low: return "rank-too-low";
    case FailureReason::incomplete_node: return "incomplete-node";
    case FailureReason::non_projective_where_required:
      return "non-projective-where-required";
  }
  return "?";
}

std::string path_string(const std::vector<PathStep>& path) {
  std::ostringstream out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out << ",";
    out << path[i].party << ":" << path[i].outcome + 1;
  }
  return out.str();
}

namespace {

void simulate_walk(const ProtocolNode& n, const StateSet& s, Tolerance tol,
                   std::vector<PathStep>& path, const Mat& a_total,
                   const Mat& b_total, std::vector<OutcomeRecord>& out) {
  if (n.leaf()) {
    OutcomeRecord rec;
    rec.path = path;
    rec.a_total = a_total;
    rec.b_total = b_total;
    rec.declared = n.declared;
    for (int j = 0; j < s.size(); ++j) {
      const auto& st = s.states[j];
      BipartiteState res = residual(st, a_total, b_total);
      double orig = st.norm();
      bool alive = orig > 0.0 && res.norm() > tol.abs * orig;
      rec.residual_ranks.push_back(alive ? schmidt_rank(res, tol) : 0);
      rec.probabilities.push_back(
          orig > 0.0 ? (res.norm() * res.norm()) / (orig * orig) : 0.0);
      if (alive) rec.survivors.push_back(j);
    }
    out.push_back(std::move(rec));
    return;
  }
  for (int l = 0; l < n.measurement->outcomes(); ++l) {
    const Mat& k = n.measurement->kraus[l];
    path.push_back({party_char(n.measurement->party), l});
    if (n.measurement->party == Party::A)
      simulate_walk(n.children[l], s, tol, path, k * a_total, b_total, out);
    else
      simulate_walk(n.children[l], s, tol, path, a_total, k * b_total, out);
    path.pop_back();
  }
}

void collect_incomplete(const ProtocolNode& n, Tolerance tol,
                        std::vector<PathStep>& path,
                        std::vector<Failure>& fails) {
  if (n.leaf()) return;
  if (!check_complete(*n.measurement, tol))
    fails.push_back({path, FailureReason::incomplete_node,
                     "sum K†K deviates from identity"});
  for (int l = 0; l < n.measurement->outcomes(); ++l) {
    path.push_back({party_char(n.measurement->party), l});
    collect_incomplete(n.children[l], tol, path, fails);
    path.pop_back();
  }
}

// Shared outcome check for tree and separable verifiers. floor(j) gives the
// minimal acceptable residual rank when state j is declared.
void check_outcome(const OutcomeRecord& rec, const StateSet& s,
                   const std::function<int(int)>& floor,
                   std::vector<Failure>& fails) {
  if (rec.survivors.empty()) return;  // zero-probability branch
  if (rec.declared != kUnreachable &&
      (rec.declared < 0 || rec.declared >= s.size()))
    throw std::invalid_argument("protocol: declared index out of range");
  if (rec.survivors.size() > 1) {
    std::string who;
    for (int j : rec.survivors) who += (who.empty() ? "" : ",") + s.states[j].label;
    fails.push_back({rec.path, FailureReason::ambiguous,
                     "states {" + who + "} all survive"});
    return;
  }
  int j = rec.survivors.front();
  if (j != rec.declared) {
    fails.push_back({rec.path, FailureReason::wrong_state_survives,
                     "state " + s.states[j].label + " survives, branch declares " +
                         (rec.declared == kUnreachable
                              ? std::string("unreachable")
                              : s.states[rec.declared].label)});
    return;
  }
  if (rec.residual_ranks[j] < floor(j)) {
    fails.push_back({rec.path, FailureReason::rank_too_low,
                     "residual rank " + std::to_string(rec.residual_ranks[j]) +
                         " < " + std::to_string(floor(j))});
  }
}

VerificationReport verify_tree(const ProtocolTree& t, const StateSet& s,
                               const std::function<int(int)>& floor,
                               Tolerance tol) {
  s.validate();
  t.validate(s.dim_a, s.dim_b);
  VerificationReport rep;
  std::vector<PathStep> path;
  collect_incomplete(t, tol, path, rep.failures);
  rep.outcomes = simulate(t, s, tol);
  for (const auto& rec : rep.outcomes) check_outcome(rec, s, floor, rep.failures);
  rep.ok = rep.failures.empty();
  return rep;
}

}  // namespace

std::vector<OutcomeRecord> simulate(const ProtocolTree& t, const StateSet& s,
                                    Tolerance tol) {
  s.validate();
  t.validate(s.dim_a, s.dim_b);
  std::vector<OutcomeRecord> out;
  std::vector<PathStep> path;
  simulate_walk(t, s, tol, path, Mat::Identity(s.dim_a, s.dim_a),
                Mat::Identity(s.dim_b, s.dim_b), out);
  return out;
}

VerificationReport verify_deterministic(const ProtocolTree& t,
                                        const StateSet& s, int r_min,
                                        Tolerance tol) {
  if (r_min < 0) throw std::invalid_argument("verify: r_min must be >= 0");
  return verify_tree(t, s, [r_min](int) { return r_min; }, tol);
}

VerificationReport verify_rank_preserving(const ProtocolTree& t,
                                          const StateSet& s, Tolerance tol) {
  std::vector<int> floors;
  for (const auto& st : s.states) floors.push_back(schmidt_rank(st, tol));
  return verify_tree(t, s, [floors](int j) { return floors[j]; }, tol);
}

VerificationReport verify_sep(const SeparablePovm& p, const StateSet& s,
                              int r_min, Tolerance tol) {
  s.validate();
  p.validate();
  if (p.dim_a != s.dim_a || p.dim_b != s.dim_b)
    throw std::invalid_argument("verify_sep: POVM and set dimensions disagree");
  VerificationReport rep;
  if (!check_sep_complete(p, tol))
    rep.failures.push_back({{}, FailureReason::incomplete_node,
                            "POVM elements do not sum to identity"});
  for (int m = 0; m < static_cast<int>(p.outcomes.size()); ++m) {
    const auto& o = p.outcomes[m];
    OutcomeRecord rec;
    rec.path = {{'S', m}};
    rec.a_total = o.a_op;
    rec.b_total = o.b_op;
    rec.declared = o.declares;
    for (int j = 0; j < s.size(); ++j) {
      const auto& st = s.states[j];
      BipartiteState res = residual(st, o.a_op, o.b_op);
      double orig = st.norm();
      bool alive = orig > 0.0 && res.norm() > tol.abs * orig;
      rec.residual_ranks.push_back(alive ? schmidt_rank(res, tol) : 0);
      rec.probabilities.push_back(
          orig > 0.0 ? (res.norm() * res.norm()) / (orig * orig) : 0.0);
      if (alive) rec.survivors.push_back(j);
    }
    check_outcome(rec, s, [r_min](int) { return r_min; }, rep.failures);
    rep.outcomes.push_back(std::move(rec));
  }
  rep.ok = rep.failures.empty();
  return rep;
}

namespace {

bool all_projective(const ProtocolNode& n, Tolerance tol) {
  if (n.leaf()) return true;
  if (!check_projective(*n.measurement, tol)) return false;
  for (const auto& c : n.children)
    if (!all_projective(c, tol)) return false;
  return true;
}

// Outcome matching up to relabeling: a permutation p with
// b.kraus[p[i]] == a.kraus[i] entrywise within atol.
std::optional<std::vector<int>> match_outcomes(const LocalMeasurement& a,
                                               const LocalMeasurement& b,
                                               double atol) {
  if (a.party != b.party || a.dim != b.dim || a.outcomes() != b.outcomes())
    return std::nullopt;
  std::vector<int> perm(a.outcomes(), -1);
  std::vector<bool> used(b.outcomes(), false);
  for (int i = 0; i < a.outcomes(); ++i) {
    for (int j = 0; j < b.outcomes(); ++j) {
      if (!used[j] && approx_equal(a.kraus[i], b.kraus[j], atol)) {
        perm[i] = j;
        used[j] = true;
        break;
      }
    }
    if (perm[i] < 0) return std::nullopt;
  }
  return perm;
}

// True iff party p's measurement choices depend only on p's own outcome
// history. `group` holds every subtree reachable under one fixed p-history;
// other-party branching is flattened away, and all of p's next measurements
// across the group must agree (up to outcome relabeling). If some branches end
// while p still measures in others, p's stopping rule itself depends on the
// other party's outcome, so the schedule is not fixed.
bool fixed_schedule(Party p, const std::vector<const ProtocolNode*>& group,
                    double atol) {
  std::vector<const ProtocolNode*> own;
  bool ends = false;
  std::function<void(const ProtocolNode*)> flatten = [&](const ProtocolNode* n) {
    if (n->leaf()) {
      ends = true;
      return;
    }
    if (n->measurement->party == p) {
      own.push_back(n);
      return;
    }
    for (const auto& c : n->children) flatten(&c);
  };
  for (const auto* n : group) flatten(n);
  if (own.empty()) return true;
  if (ends) return false;
  const auto& ref = *own.front()->measurement;
  std::vector<std::vector<int>> perms;
  for (const auto* n : own) {
    auto perm = match_outcomes(ref, *n->measurement, atol);
    if (!perm) return false;
    perms.push_back(*perm);
  }
  for (int i = 0; i < ref.outcomes(); ++i) {
    std::vector<const ProtocolNode*> next;
    for (std::size_t k = 0; k < own.size(); ++k)
      next.push_back(&own[k]->children[perms[k][i]]);
    if (!fixed_schedule(p, next, atol)) return false;
  }
  return true;
}

// No measurement by `first` occurs after the other party has measured.
bool one_way(const ProtocolNode& n, Party first, bool other_seen) {
  if (n.leaf()) return true;
  Party q = n.measurement->party;
  if (q == first && other_seen) return false;
  bool seen = other_seen || q != first;
  for (const auto& c : n.children)
    if (!one_way(c, first, seen)) return false;
  return true;
}

}  // namespace

ProtocolClass classify(const ProtocolTree& t, Tolerance tol) {
  if (t.leaf())
    return ProtocolClass::P0;
  t.measurement->validate();
  // Well-formedness against the measurement dimensions found at the root of
  // each party's first appearance.
  std::function<void(const ProtocolNode&)> wf = [&](const ProtocolNode& n) {
    if (n.leaf()) {
      if (!n.children.empty())
        throw std::invalid_argument("classify: leaf with children");
      return;
    }
    n.measurement->validate();
    if (static_cast<int>(n.children.size()) != n.measurement->outcomes())
      throw std::invalid_argument("classify: child count != outcome count");
    for (const auto& c : n.children) wf(c);
  };
  wf(t);

  bool projective = all_projective(t, tol);
  int comm;
  if (fixed_schedule(Party::A, {&t}, tol.abs) &&
      fixed_schedule(Party::B, {&t}, tol.abs))
    comm = 0;
  else if (one_way(t, Party::A, false) || one_way(t, Party::B, false))
    comm = 1;
  else
    comm = 2;
  switch (comm) {
    case 0: return projective ? ProtocolClass::P0 : ProtocolClass::K0;
    case 1: return projective ? ProtocolClass::P1 : ProtocolClass::K1;
    default: return projective ? ProtocolClass::P2 : ProtocolClass::K2;
  }
}

}  // namespace locc
