#include "locc/search.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "locc/measurement.hpp"

namespace locc {

std::string to_string(SearchClass c) {
  switch (c) {
    case SearchClass::P0: return "P0";
    case SearchClass::P1: return "P1";
    case SearchClass::P2: return "P2";
  }
  return "?";
}

namespace {

using Mask = unsigned;
using Partition = std::vector<std::vector<int>>;

std::vector<int> bits_of(Mask m) {
  std::vector<int> out;
  for (int i = 0; m >> i; ++i)
    if ((m >> i) & 1u) out.push_back(i);
  return out;
}

Mask mask_of(const std::vector<int>& idx) {
  Mask m = 0;
  for (int i : idx) m |= 1u << i;
  return m;
}

void gen_partitions(const std::vector<int>& elems, std::size_t i, Partition& cur,
                    std::vector<Partition>& out) {
  if (i == elems.size()) {
    out.push_back(cur);
    return;
  }
  for (std::size_t k = 0; k < cur.size(); ++k) {
    cur[k].push_back(elems[i]);
    gen_partitions(elems, i + 1, cur, out);
    cur[k].pop_back();
  }
  cur.push_back({elems[i]});
  gen_partitions(elems, i + 1, cur, out);
  cur.pop_back();
}

// All set partitions of the indices in `m`, ascending block count, then in
// restricted-growth order; blocks are ordered by their smallest element.
std::vector<Partition> partitions_of(Mask m) {
  std::vector<Partition> out;
  const auto elems = bits_of(m);
  if (elems.empty()) return out;
  Partition cur;
  gen_partitions(elems, 0, cur, out);
  std::stable_sort(out.begin(), out.end(),
                   [](const Partition& a, const Partition& b) {
                     return a.size() < b.size();
                   });
  return out;
}

std::string block_label(const std::vector<int>& blk, bool remainder = false) {
  std::string s = "P{";
  for (int v : blk) s += std::to_string(v);
  s += "}";
  if (remainder) s += "*";
  return s;
}

using RankCache = std::vector<std::vector<signed char>>;

struct Engine {
  const StateSet& set;
  const SearchSpec& spec;
  Tolerance tol;
  int da = 0, db = 0, n = 0;
  Mask full_a = 0, full_b = 0;
  std::vector<Mat> coeff;              // basis-rotated coefficient matrices
  std::vector<double> cutoff2;         // squared survivor threshold per state
  std::vector<Eigen::MatrixXd> cell2;  // squared entry magnitudes
  std::vector<std::vector<Partition>> parts_a, parts_b;  // indexed by mask

  void init() {
    da = set.dim_a;
    db = set.dim_b;
    n = static_cast<int>(set.states.size());
    full_a = (1u << da) - 1u;
    full_b = (1u << db) - 1u;
    for (const auto& st : set.states) {
      Mat m = st.coeff;
      if (spec.basis_b.size() > 0) m = spec.basis_b.adjoint() * m;
      if (spec.basis_a.size() > 0) m = m * spec.basis_a.conjugate();
      coeff.push_back(m);
      cell2.push_back(m.cwiseAbs2());
      const double thr = tol.abs * m.norm();
      cutoff2.push_back(thr * thr);
    }
    parts_a.resize(full_a + 1);
    parts_b.resize(full_b + 1);
    for (Mask m = 1; m <= full_a; ++m) parts_a[m] = partitions_of(m);
    for (Mask m = 1; m <= full_b; ++m) parts_b[m] = partitions_of(m);
  }

  const std::vector<Partition>& partitions(Party p, Mask m) const {
    return p == Party::A ? parts_a[m] : parts_b[m];
  }

  double sub_norm2(int j, Mask ma, Mask mb) const {
    double t = 0;
    for (int bi = 0; bi < db; ++bi) {
      if (!((mb >> bi) & 1u)) continue;
      for (int ai = 0; ai < da; ++ai)
        if ((ma >> ai) & 1u) t += cell2[j](bi, ai);
    }
    return t;
  }

  bool survives(int j, Mask ma, Mask mb) const {
    return sub_norm2(j, ma, mb) > cutoff2[j];
  }

  std::vector<int> survivors(Mask ma, Mask mb) const {
    std::vector<int> out;
    for (int j = 0; j < n; ++j)
      if (survives(j, ma, mb)) out.push_back(j);
    return out;
  }

  int sub_rank(int j, Mask ma, Mask mb, RankCache& cache) const {
    if (ma == 0 || mb == 0) return 0;
    auto& slot = cache[j][(ma << 6) | mb];
    if (slot >= 0) return slot;
    const auto rows = bits_of(mb);
    const auto cols = bits_of(ma);
    Mat sub(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols.size(); ++c)
        sub(r, c) = coeff[j](rows[r], cols[c]);
    slot = static_cast<signed char>(numeric_rank(sub, tol));
    return slot;
  }

  RankCache fresh_cache() const {
    return RankCache(n, std::vector<signed char>(1u << 12, -1));
  }

  Mat block_projector(Party p, const std::vector<int>& blk) const {
    const int dim = p == Party::A ? da : db;
    const Mat& basis = p == Party::A ? spec.basis_a : spec.basis_b;
    if (basis.size() == 0) return subset_projector(dim, blk);
    Mat proj = Mat::Zero(dim, dim);
    for (int m : blk) proj += basis.col(m) * basis.col(m).adjoint();
    return proj;
  }

  // Measurement whose outcomes are the given blocks of `alive`, plus one
  // remainder outcome covering the rest of the space when `alive` is proper.
  LocalMeasurement blocks_measurement(Party p, const Partition& blocks,
                                      Mask alive) const {
    LocalMeasurement m;
    m.party = p;
    m.dim = p == Party::A ? da : db;
    for (const auto& blk : blocks) {
      m.kraus.push_back(block_projector(p, blk));
      m.labels.push_back(block_label(blk));
    }
    const Mask full = p == Party::A ? full_a : full_b;
    if (alive != full) {
      const auto rest = bits_of(full & ~alive);
      m.kraus.push_back(block_projector(p, rest));
      m.labels.push_back(block_label(rest, true));
    }
    return m;
  }
};

// Adaptive alternating-party search over still-alive index subsets.
struct AdaptiveWorker {
  const Engine& eng;
  std::uint64_t nodes = 0;
  RankCache cache;
  std::map<int, ProtocolNode> hits;
  std::set<int> misses;

  explicit AdaptiveWorker(const Engine& e) : eng(e), cache(e.fresh_cache()) {}

  static int key(Mask ma, Mask mb, int rounds_left, Party last) {
    return static_cast<int>(ma | (mb << 6) | (static_cast<Mask>(rounds_left) << 12) |
                            ((last == Party::A ? 0u : 1u) << 15));
  }

  std::optional<ProtocolNode> dfs(Mask ma, Mask mb, int rounds_left, Party last) {
    ++nodes;
    const int k = key(ma, mb, rounds_left, last);
    if (misses.count(k)) return std::nullopt;
    if (auto it = hits.find(k); it != hits.end()) return it->second;

    const auto surv = eng.survivors(ma, mb);
    if (surv.empty()) {
      misses.insert(k);
      return std::nullopt;
    }
    if (surv.size() == 1) {
      if (eng.sub_rank(surv[0], ma, mb, cache) >= eng.spec.r_min) {
        auto leaf = ProtocolNode::make_leaf(surv[0]);
        hits.emplace(k, leaf);
        return leaf;
      }
      misses.insert(k);
      return std::nullopt;
    }
    if (rounds_left == 0) {
      misses.insert(k);
      return std::nullopt;
    }
    if (eng.spec.prune) {
      for (int j : surv) {
        if (eng.sub_rank(j, ma, mb, cache) < eng.spec.r_min) {
          misses.insert(k);
          return std::nullopt;
        }
      }
    }
    for (Party p : {Party::A, Party::B}) {
      if (p == last) continue;
      const Mask alive = p == Party::A ? ma : mb;
      if (bits_of(alive).size() < 2) continue;
      for (const auto& part : eng.partitions(p, alive)) {
        if (part.size() < 2) continue;
        std::vector<ProtocolNode> children;
        bool feasible = true;
        for (const auto& blk : part) {
          const Mask bm = mask_of(blk);
          const Mask cma = p == Party::A ? bm : ma;
          const Mask cmb = p == Party::A ? mb : bm;
          if (eng.survivors(cma, cmb).empty()) {
            children.push_back(ProtocolNode::make_leaf(kUnreachable));
            continue;
          }
          auto child = dfs(cma, cmb, rounds_left - 1, p);
          if (!child) {
            feasible = false;
            break;
          }
          children.push_back(std::move(*child));
        }
        if (!feasible) continue;
        const Mask full = p == Party::A ? eng.full_a : eng.full_b;
        if (alive != full) children.push_back(ProtocolNode::make_leaf(kUnreachable));
        auto node = ProtocolNode::make_node(eng.blocks_measurement(p, part, alive),
                                            std::move(children));
        hits.emplace(k, node);
        return node;
      }
    }
    misses.insert(k);
    return std::nullopt;
  }
};

std::optional<ProtocolTree> try_fixed_pair(const Engine& eng, const Partition& pa,
                                           std::uint64_t& nodes) {
  RankCache cache = eng.fresh_cache();
  for (const auto& pb : eng.parts_b[eng.full_b]) {
    ++nodes;
    bool ok = true;
    std::vector<std::vector<int>> declared(pa.size(),
                                           std::vector<int>(pb.size(), kUnreachable));
    for (std::size_t ia = 0; ia < pa.size() && ok; ++ia) {
      const Mask maskA = mask_of(pa[ia]);
      for (std::size_t ib = 0; ib < pb.size() && ok; ++ib) {
        const Mask maskB = mask_of(pb[ib]);
        const auto surv = eng.survivors(maskA, maskB);
        if (surv.empty()) continue;
        if (surv.size() > 1 ||
            eng.sub_rank(surv[0], maskA, maskB, cache) < eng.spec.r_min) {
          ok = false;
          break;
        }
        declared[ia][ib] = surv[0];
      }
    }
    if (!ok) continue;
    std::vector<ProtocolNode> a_children;
    for (std::size_t ia = 0; ia < pa.size(); ++ia) {
      std::vector<ProtocolNode> b_children;
      for (std::size_t ib = 0; ib < pb.size(); ++ib)
        b_children.push_back(ProtocolNode::make_leaf(declared[ia][ib]));
      a_children.push_back(ProtocolNode::make_node(
          eng.blocks_measurement(Party::B, pb, eng.full_b), std::move(b_children)));
    }
    return ProtocolNode::make_node(eng.blocks_measurement(Party::A, pa, eng.full_a),
                                   std::move(a_children));
  }
  return std::nullopt;
}

std::optional<ProtocolTree> try_one_way(const Engine& eng, Party first,
                                        const Partition& pf, std::uint64_t& nodes) {
  RankCache cache = eng.fresh_cache();
  ++nodes;
  const Party second = other(first);
  const int second_dim = second == Party::A ? eng.da : eng.db;
  const Mask second_full = second == Party::A ? eng.full_a : eng.full_b;
  std::vector<ProtocolNode> children;
  for (const auto& blk : pf) {
    ++nodes;
    const Mask fm = mask_of(blk);
    const Mask ma = first == Party::A ? fm : eng.full_a;
    const Mask mb = first == Party::A ? eng.full_b : fm;
    const auto surv = eng.survivors(ma, mb);
    if (surv.empty()) {
      children.push_back(ProtocolNode::make_leaf(kUnreachable));
      continue;
    }
    if (surv.size() == 1) {
      if (eng.sub_rank(surv[0], ma, mb, cache) < eng.spec.r_min) return std::nullopt;
      children.push_back(ProtocolNode::make_leaf(surv[0]));
      continue;
    }
    // The second party must split the survivors with one measurement: their
    // supports on that side must be pairwise disjoint and keep enough rank.
    std::vector<Mask> supports;
    Mask used = 0;
    for (int j : surv) {
      Mask supp = 0;
      for (int i = 0; i < second_dim; ++i) {
        const Mask one = 1u << i;
        const Mask sma = second == Party::A ? one : ma;
        const Mask smb = second == Party::A ? mb : one;
        if (eng.sub_norm2(j, sma, smb) > eng.cutoff2[j]) supp |= one;
      }
      if (supp == 0 || (supp & used)) return std::nullopt;
      const Mask sma = second == Party::A ? supp : ma;
      const Mask smb = second == Party::A ? mb : supp;
      if (eng.sub_rank(j, sma, smb, cache) < eng.spec.r_min) return std::nullopt;
      supports.push_back(supp);
      used |= supp;
    }
    Partition blocks;
    std::vector<ProtocolNode> leaves;
    for (std::size_t t = 0; t < surv.size(); ++t) {
      blocks.push_back(bits_of(supports[t]));
      leaves.push_back(ProtocolNode::make_leaf(surv[t]));
    }
    if (used != second_full) leaves.push_back(ProtocolNode::make_leaf(kUnreachable));
    children.push_back(ProtocolNode::make_node(
        eng.blocks_measurement(second, blocks, used), std::move(leaves)));
  }
  return ProtocolNode::make_node(
      eng.blocks_measurement(first, pf, first == Party::A ? eng.full_a : eng.full_b),
      std::move(children));
}

std::optional<ProtocolTree> try_adaptive(const Engine& eng, Party p,
                                         const Partition& part,
                                         std::uint64_t& nodes) {
  AdaptiveWorker w(eng);
  ++w.nodes;
  std::vector<ProtocolNode> children;
  bool feasible = true;
  for (const auto& blk : part) {
    const Mask bm = mask_of(blk);
    const Mask cma = p == Party::A ? bm : eng.full_a;
    const Mask cmb = p == Party::A ? eng.full_b : bm;
    if (eng.survivors(cma, cmb).empty()) {
      children.push_back(ProtocolNode::make_leaf(kUnreachable));
      continue;
    }
    auto child = w.dfs(cma, cmb, eng.spec.max_rounds - 1, p);
    if (!child) {
      feasible = false;
      break;
    }
    children.push_back(std::move(*child));
  }
  nodes += w.nodes;
  if (!feasible) return std::nullopt;
  const Mask alive = p == Party::A ? eng.full_a : eng.full_b;
  return ProtocolNode::make_node(eng.blocks_measurement(p, part, alive),
                                 std::move(children));
}

void check_basis(const Mat& basis, int dim, const char* which) {
  if (basis.size() == 0) return;
  if (basis.rows() != dim || basis.cols() != dim)
    throw std::invalid_argument(std::string(which) + " basis has wrong shape");
  const Mat gram = basis.adjoint() * basis;
  if (!approx_equal(gram, Mat::Identity(dim, dim), 1e-8))
    throw std::invalid_argument(std::string(which) + " basis is not unitary");
}

}  // namespace

SearchResult search_protocols(const StateSet& s, const SearchSpec& spec,
                              Tolerance tol) {
  s.validate();
  if (s.dim_a > 6 || s.dim_b > 6)
    throw std::invalid_argument("search supports per-party dimensions up to 6");
  if (spec.max_rounds < 1 || spec.max_rounds > 4)
    throw std::invalid_argument("max_rounds must be between 1 and 4");
  if (spec.r_min < 0) throw std::invalid_argument("r_min must be non-negative");
  check_basis(spec.basis_a, s.dim_a, "alice");
  check_basis(spec.basis_b, s.dim_b, "bob");

  Engine eng{s, spec, tol};
  eng.init();

  SearchResult result;

  // Degenerate set: nothing to distinguish.
  if (spec.comm == SearchClass::P2) {
    const auto surv = eng.survivors(eng.full_a, eng.full_b);
    if (surv.size() <= 1) {
      result.nodes_explored = 1;
      RankCache cache = eng.fresh_cache();
      if (surv.size() == 1 &&
          eng.sub_rank(surv[0], eng.full_a, eng.full_b, cache) >= spec.r_min) {
        result.found = true;
        result.protocol = ProtocolNode::make_leaf(surv[0]);
      } else {
        result.family_exhausted = true;
      }
      return result;
    }
  }

  // Top-level work items, in deterministic enumeration order.
  struct Combo {
    Party party;
    int index;
  };
  std::vector<Combo> combos;
  switch (spec.comm) {
    case SearchClass::P0:
      for (std::size_t i = 0; i < eng.parts_a[eng.full_a].size(); ++i)
        combos.push_back({Party::A, static_cast<int>(i)});
      break;
    case SearchClass::P1:
      for (std::size_t i = 0; i < eng.parts_a[eng.full_a].size(); ++i)
        combos.push_back({Party::A, static_cast<int>(i)});
      for (std::size_t i = 0; i < eng.parts_b[eng.full_b].size(); ++i)
        combos.push_back({Party::B, static_cast<int>(i)});
      break;
    case SearchClass::P2:
      for (Party p : {Party::A, Party::B}) {
        const auto& parts = eng.partitions(p, p == Party::A ? eng.full_a : eng.full_b);
        for (std::size_t i = 0; i < parts.size(); ++i)
          if (parts[i].size() >= 2) combos.push_back({p, static_cast<int>(i)});
      }
      break;
  }

  const int n_combos = static_cast<int>(combos.size());
  std::vector<std::optional<ProtocolTree>> outcomes(n_combos);
  std::vector<std::uint64_t> node_counts(n_combos, 0);

#pragma omp parallel for schedule(dynamic) if (spec.parallel)
  for (int i = 0; i < n_combos; ++i) {
    const Combo c = combos[static_cast<std::size_t>(i)];
    const auto& parts =
        eng.partitions(c.party, c.party == Party::A ? eng.full_a : eng.full_b);
    const Partition& part = parts[static_cast<std::size_t>(c.index)];
    switch (spec.comm) {
      case SearchClass::P0:
        outcomes[i] = try_fixed_pair(eng, part, node_counts[i]);
        break;
      case SearchClass::P1:
        outcomes[i] = try_one_way(eng, c.party, part, node_counts[i]);
        break;
      case SearchClass::P2:
        outcomes[i] = try_adaptive(eng, c.party, part, node_counts[i]);
        break;
    }
  }

  for (int i = 0; i < n_combos; ++i) result.nodes_explored += node_counts[i];
  for (int i = 0; i < n_combos; ++i) {
    if (outcomes[i]) {
      result.found = true;
      result.protocol = std::move(*outcomes[i]);
      break;
    }
  }
  if (result.found) {
    const auto report = verify_deterministic(*result.protocol, s, spec.r_min, tol);
    if (!report.ok)
      throw std::logic_error("search produced a protocol that failed verification");
  } else {
    result.family_exhausted = true;
  }
  return result;
}

}  // namespace locc
