#include "locc/analysis.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace locc {

namespace {

std::string num_str(double v) {
  if (std::isinf(v)) return "inf";
  if (v == std::floor(v) && std::abs(v) < 1e15)
    return std::to_string(static_cast<long long>(v));
  std::ostringstream o;
  o << std::setprecision(6) << v;
  return o.str();
}

BoundReport make_report(std::string formula, double quantity, double bound) {
  BoundReport r;
  r.formula = std::move(formula);
  r.quantity = quantity;
  r.bound = bound;
  r.satisfied = quantity <= bound + 1e-12;
  r.detail = num_str(quantity) + (r.satisfied ? " <= " : " > ") + num_str(bound);
  return r;
}

std::vector<int> ranks_of(const StateSet& s, Tolerance tol) {
  std::vector<int> r;
  for (const auto& st : s.states) r.push_back(schmidt_rank(st, tol));
  return r;
}

}  // namespace

int nmax(int da, int db, int r) {
  if (da < 1 || db < 1 || r < 1)
    throw std::invalid_argument("nmax: arguments must be >= 1");
  return (da / r) * (db / r);
}

long multi_nmax(const std::vector<int>& dims, int r) {
  if (dims.size() < 2)
    throw std::invalid_argument("multi_nmax: need at least two parties");
  if (r < 1) throw std::invalid_argument("multi_nmax: r must be >= 1");
  long n = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("multi_nmax: bad dimension");
    n *= d / r;
  }
  return n;
}

BoundReport rank_sum_bound(const StateSet& s, int r, bool swap_roles,
                           Tolerance tol) {
  s.validate();
  if (r < 1) throw std::invalid_argument("rank_sum_bound: r must be >= 1");
  int sum = 0;
  for (int rk : ranks_of(s, tol)) sum += rk;
  int da = swap_roles ? s.dim_b : s.dim_a;
  int db = swap_roles ? s.dim_a : s.dim_b;
  return make_report("rank-sum", sum, static_cast<double>(da) * (db / r));
}

BoundReport identified_rank_bound(const StateSet& s, const Mat& a, const Mat& b,
                                  int j, Tolerance tol) {
  s.validate();
  if (j < 0 || j >= s.size())
    throw std::invalid_argument("identified_rank_bound: state index out of range");
  int kept = 0;
  int max_other = 0;
  for (int k = 0; k < s.size(); ++k) {
    BipartiteState res = residual(s.states[k], a, b);
    bool alive = res.norm() > tol.abs * s.states[k].norm();
    if (k == j) {
      if (!alive)
        throw std::invalid_argument(
            "identified_rank_bound: outcome annihilates the identified state");
      kept = schmidt_rank(res, tol);
    } else {
      if (alive)
        throw std::invalid_argument(
            "identified_rank_bound: outcome does not identify the given state");
      max_other = std::max(max_other, schmidt_rank(s.states[k], tol));
    }
  }
  return make_report("identified-rank", 2.0 * kept + max_other,
                     s.dim_a + s.dim_b);
}

BoundReport mean_rank_bound(const StateSet& s, int r_target, bool swap_roles,
                            Tolerance tol) {
  s.validate();
  if (s.size() < 1)
    throw std::invalid_argument("mean_rank_bound: empty state set");
  double sum = 0;
  for (int rk : ranks_of(s, tol)) sum += rk;
  double rbar = sum / s.size();
  int da = swap_roles ? s.dim_b : s.dim_a;
  int db = swap_roles ? s.dim_a : s.dim_b;
  return make_report("mean-rank", r_target + rbar,
                     da + static_cast<double>(db) / s.size());
}

double mean_rank_nbound(int db, int da, int r_max, double rbar) {
  double denom = r_max + rbar - da;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return db / denom;
}

BoundReport rank_square_bound(const StateSet& s, Tolerance tol) {
  s.validate();
  double sum = 0;
  for (int rk : ranks_of(s, tol)) sum += static_cast<double>(rk) * rk;
  return make_report("rank-squared", sum,
                     static_cast<double>(s.dim_a) * s.dim_b);
}

bool hat_rho_pairwise_orthogonal(const StateSet& s, Tolerance tol) {
  s.validate();
  std::vector<Mat> hats;
  for (const auto& st : s.states) hats.push_back(hat_rho(st));
  return pairwise_orthogonal(hats, tol);
}

namespace {

// Connected components of the non-orthogonality graph of one party's reduced
// density operators, restricted to `members`. Components come out ordered by
// their smallest state index.
std::vector<std::vector<int>> support_components(const StateSet& s,
                                                 const std::vector<int>& members,
                                                 Party p, Tolerance tol) {
  std::vector<Mat> rho;
  for (int m : members) rho.push_back(reduced_density(s.states[m], p));
  int n = static_cast<int>(members.size());
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    std::vector<int> stack{i};
    comp[i] = ncomp;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        if (comp[v] >= 0) continue;
        double thr = tol.abs * rho[u].norm() * rho[v].norm();
        if (std::abs((rho[u] * rho[v]).trace()) > thr) {
          comp[v] = ncomp;
          stack.push_back(v);
        }
      }
    }
    ++ncomp;
  }
  std::vector<std::vector<int>> out(ncomp);
  for (int i = 0; i < n; ++i) out[comp[i]].push_back(members[i]);
  return out;
}

PartitionTree cascade_from(const StateSet& s, Party first, Tolerance tol) {
  PartitionTree tree;
  for (int j = 0; j < s.size(); ++j) tree.root.members.push_back(j);
  Party p = first;
  while (true) {
    bool any_split = false;
    std::function<void(PartitionNode&)> level = [&](PartitionNode& g) {
      if (!g.children.empty()) {
        for (auto& c : g.children) level(c);
        return;
      }
      if (g.members.size() < 2) return;
      auto comps = support_components(s, g.members, p, tol);
      if (comps.size() < 2) return;
      g.split_party = p;
      for (auto& c : comps) {
        PartitionNode child;
        child.members = std::move(c);
        g.children.push_back(std::move(child));
      }
      any_split = true;
    };
    level(tree.root);
    if (!any_split) break;
    tree.level_parties.push_back(p);
    p = other(p);
  }
  tree.complete = true;
  std::function<void(const PartitionNode&)> leaves = [&](const PartitionNode& g) {
    if (g.children.empty()) {
      if (g.members.size() > 1) tree.complete = false;
      return;
    }
    for (const auto& c : g.children) leaves(c);
  };
  leaves(tree.root);
  return tree;
}

}  // namespace

PartitionTree cascading_partition(const StateSet& s, std::optional<Party> first,
                                  Tolerance tol) {
  s.validate();
  if (first) return cascade_from(s, *first, tol);
  PartitionTree a = cascade_from(s, Party::A, tol);
  if (a.complete) return a;
  PartitionTree b = cascade_from(s, Party::B, tol);
  if (b.complete) return b;
  return b.level_parties.size() > a.level_parties.size() ? b : a;
}

ProtocolTree partition_to_protocol(const PartitionTree& p, const StateSet& s,
                                   Tolerance tol) {
  if (!p.complete)
    throw std::invalid_argument("partition_to_protocol: partition is incomplete");
  s.validate();
  std::function<ProtocolNode(const PartitionNode&)> build =
      [&](const PartitionNode& g) -> ProtocolNode {
    if (g.children.empty()) {
      if (g.members.size() != 1)
        throw std::invalid_argument("partition_to_protocol: unsplit group");
      return ProtocolNode::make_leaf(g.members.front());
    }
    Party party = *g.split_party;
    int dim = party == Party::A ? s.dim_a : s.dim_b;
    std::vector<Mat> projs;
    for (const auto& child : g.children) {
      Mat acc = Mat::Zero(dim, dim);
      for (int m : child.members) acc += reduced_density(s.states[m], party);
      projs.push_back(support_projector(acc, tol));
    }
    LocalMeasurement meas = projector_measurement(party, dim, projs, tol);
    std::vector<ProtocolNode> kids;
    for (const auto& child : g.children) kids.push_back(build(child));
    // Remainder projector (if any) can never fire on states of this group.
    while (static_cast<int>(kids.size()) < meas.outcomes())
      kids.push_back(ProtocolNode::make_leaf(kUnreachable));
    return ProtocolNode::make_node(std::move(meas), std::move(kids));
  };
  return build(p.root);
}

PurificationResult purification_check(const StateSet& s, const Mat& ga,
                                      const Mat& gb, Tolerance tol) {
  s.validate();
  PurificationResult out;
  std::vector<Mat> res;
  for (int j = 0; j < s.size(); ++j) {
    BipartiteState r = residual(s.states[j], ga, gb);
    if (r.norm() > tol.abs * s.states[j].norm()) {
      out.survivors.push_back(j);
      res.push_back(r.coeff);
    }
  }
  if (res.empty()) return out;
  out.pure = true;
  for (std::size_t i = 0; i + 1 < res.size() && out.pure; ++i) {
    double ni = res[i].norm(), nj = res[i + 1].norm();
    double ov = std::abs((res[i].adjoint() * res[i + 1]).trace());
    // Proportionality = equality in Cauchy-Schwarz.
    if (ov < ni * nj * (1.0 - std::max(tol.abs, 1e-12))) out.pure = false;
  }
  if (out.pure)
    out.residual_rank = numeric_rank(res.front(), tol);
  return out;
}

StateSet bennett_domino_states() {
  StateSet s;
  s.name = "bennett9";
  s.dim_a = 3;
  s.dim_b = 3;
  const double h = 1.0 / std::sqrt(2.0);
  auto add = [&](const std::vector<Term>& terms, const std::string& label) {
    s.states.push_back(make_state(3, 3, terms, label));
  };
  add({{1, 1, 1.0}}, "1");
  add({{0, 0, h}, {0, 1, h}}, "2");
  add({{0, 0, h}, {0, 1, -h}}, "3");
  add({{2, 1, h}, {2, 2, h}}, "4");
  add({{2, 1, h}, {2, 2, -h}}, "5");
  add({{1, 0, h}, {2, 0, h}}, "6");
  add({{1, 0, h}, {2, 0, -h}}, "7");
  add({{0, 2, h}, {1, 2, h}}, "8");
  add({{0, 2, h}, {1, 2, -h}}, "9");
  return s;
}

bool domino_preserves_orthogonality(const Mat& a, Party party, Tolerance tol) {
  if (a.rows() != 3 || a.cols() != 3)
    throw std::invalid_argument("domino_preserves_orthogonality: need a 3x3 matrix");
  static const StateSet dominoes = bennett_domino_states();
  Mat ia = Mat::Identity(3, 3);
  std::vector<Mat> res;
  for (const auto& st : dominoes.states)
    res.push_back(party == Party::A ? residual(st, a, ia).coeff
                                    : residual(st, ia, a).coeff);
  return pairwise_orthogonal(res, tol);
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_double(std::uint64_t& state) {  // in [0, 1)
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// One scan sample: raw random matrix, or an exact scalar multiple of a random
// unitary every fourth draw, so both directions of the equivalence get hit.
bool sample_mismatch(std::uint64_t seed, std::size_t index, Tolerance tol) {
  std::uint64_t state = seed ^ (0xd1342543de82ef95ULL * (index + 1));
  Mat a(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      a(i, j) = Complex(2.0 * unit_double(state) - 1.0,
                        2.0 * unit_double(state) - 1.0);
  if (index % 4 == 3) {
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    double mag = 0.2 + 4.8 * unit_double(state);
    double ph = 2.0 * M_PI * unit_double(state);
    a = mag * Complex(std::cos(ph), std::sin(ph)) * q;
  }
  bool preserves = domino_preserves_orthogonality(a, Party::A, tol);
  bool prop_unitary = is_proportional_unitary(a, tol);
  return preserves != prop_unitary;
}

}  // namespace

ScanResult domino_equivalence_scan(std::size_t samples, std::uint64_t seed,
                                   Tolerance tol) {
  ScanResult out;
  out.checked = samples;
  long n = static_cast<long>(samples);
  std::size_t mis = 0;
#pragma omp parallel for schedule(static) reduction(+ : mis)
  for (long i = 0; i < n; ++i)
    if (sample_mismatch(seed, static_cast<std::size_t>(i), tol)) ++mis;
  out.mismatches = mis;
  return out;
}

ScanResult domino_equivalence_scan_serial(std::size_t samples,
                                          std::uint64_t seed, Tolerance tol) {
  ScanResult out;
  out.checked = samples;
  for (std::size_t i = 0; i < samples; ++i)
    if (sample_mismatch(seed, i, tol)) ++out.mismatches;
  return out;
}

}  // namespace locc
