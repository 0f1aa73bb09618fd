#pragma once

#include <cstdint>
#include <optional>

#include "locc/protocol.hpp"

namespace locc {

/// Outcome of evaluating one inequality on a state set.
struct BoundReport {
  std::string formula;  // stable identifier, e.g. "rank-sum"
  double quantity = 0.0;
  double bound = 0.0;  // +infinity when the inequality is vacuous
  bool satisfied = false;
  std::string detail;  // human-readable, e.g. "12 > 10"
};

/// Largest number of states distinguishable while every residual keeps
/// Schmidt rank >= r: floor(da/r) * floor(db/r). Arguments must be >= 1.
int nmax(int da, int db, int r);

/// Multiparty version: product over parties of floor(D_p / r).
long multi_nmax(const std::vector<int>& dims, int r);

/// Sum of Schmidt ranks <= D_A * floor(D_B / r) when rank r must be kept
/// (Alice measuring first; swap_roles exchanges the parties).
BoundReport rank_sum_bound(const StateSet& s, int r, bool swap_roles = false,
                           Tolerance tol = {});

/// Given a product outcome (a, b) that annihilates every state except j:
/// twice the kept rank plus the largest other original rank is at most
/// D_A + D_B. Throws std::invalid_argument if (a, b) does not identify j.
BoundReport identified_rank_bound(const StateSet& s, const Mat& a, const Mat& b,
                                  int j, Tolerance tol = {});

/// r_target + mean(R_j) <= D_A + D_B / N (swap_roles exchanges the parties).
BoundReport mean_rank_bound(const StateSet& s, int r_target,
                            bool swap_roles = false, Tolerance tol = {});

/// N <= db / (r_max + rbar - da), +infinity when the denominator is
/// nonpositive (the bound is then vacuous).
double mean_rank_nbound(int db, int da, int r_max, double rbar);

/// Sum of squared Schmidt ranks <= D_A * D_B.
BoundReport rank_square_bound(const StateSet& s, Tolerance tol = {});

/// Necessary condition for rank-preserving discrimination: the operators
/// rho_A (x) rho_B of the states are pairwise orthogonal.
bool hat_rho_pairwise_orthogonal(const StateSet& s, Tolerance tol = {});

/// Node of a cascading support partition: a group of state indices, split into
/// children by connected components of the chosen party's reduced supports.
struct PartitionNode {
  std::vector<int> members;
  std::optional<Party> split_party;
  std::vector<PartitionNode> children;
};

struct PartitionTree {
  PartitionNode root;
  bool complete = false;                // every leaf a single state
  std::vector<Party> level_parties;     // party that acted at each level
};

/// Split groups of states by connected components of the non-orthogonality
/// graph of one party's reduced density operators, alternating parties level
/// by level until a level produces no split. With no `first` party given, both
/// orders are tried; a complete partition wins, otherwise the deeper one.
PartitionTree cascading_partition(const StateSet& s,
                                  std::optional<Party> first = std::nullopt,
                                  Tolerance tol = {});

/// Turn a complete cascading partition into a protocol tree of projective
/// measurements onto unions of the original reduced supports (plus remainder
/// projectors leading to error leaves). Throws if the partition is incomplete.
ProtocolTree partition_to_protocol(const PartitionTree& p, const StateSet& s,
                                   Tolerance tol = {});

struct PurificationResult {
  std::vector<int> survivors;
  bool pure = false;        // all surviving residuals proportional
  int residual_rank = 0;    // their common Schmidt rank (0 unless pure)
};

/// Behaviour of a state set under one product outcome (ga, gb): which states
/// survive, whether the survivors collapse onto one common pure state, and
/// that state's Schmidt rank.
PurificationResult purification_check(const StateSet& s, const Mat& ga,
                                      const Mat& gb, Tolerance tol = {});

/// The nine 3x3 domino states (four +/- pairs around a central |11>).
StateSet bennett_domino_states();

/// True iff applying `a` on the given party leaves all 36 pairs of domino
/// states mutually orthogonal (relative to the residual norms).
bool domino_preserves_orthogonality(const Mat& a, Party party = Party::A,
                                    Tolerance tol = {});

struct ScanResult {
  std::size_t checked = 0;
  std::size_t mismatches = 0;
};

/// Seeded random scan of 3x3 matrices testing that orthogonality preservation
/// of the domino set coincides with being proportional to a unitary. Every
/// fourth sample is an exact scalar multiple of a random unitary so both
/// directions of the equivalence are exercised. Each sample's generator is
/// seeded independently, so results do not depend on thread count.
ScanResult domino_equivalence_scan(std::size_t samples, std::uint64_t seed,
                                   Tolerance tol);

/// Single-threaded reference with identical semantics and results.
ScanResult domino_equivalence_scan_serial(std::size_t samples,
                                          std::uint64_t seed, Tolerance tol);

}  // namespace locc
