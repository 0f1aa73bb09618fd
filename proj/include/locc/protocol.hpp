#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locc/measurement.hpp"

namespace locc {

/// Leaf verdict marking a branch that should never occur with nonzero
/// probability (an "error" outcome).
inline constexpr int kUnreachable = -1;

/// Node of a protocol tree. Internal nodes carry one local measurement and one
/// child per outcome; leaves carry the index of the state they declare
/// (kUnreachable for branches asserted to have zero probability).
struct ProtocolNode {
  std::optional<LocalMeasurement> measurement;
  std::vector<ProtocolNode> children;
  int declared = kUnreachable;

  bool leaf() const { return !measurement.has_value(); }

  static ProtocolNode make_leaf(int declared_state) {
    ProtocolNode n;
    n.declared = declared_state;
    return n;
  }
  static ProtocolNode make_node(LocalMeasurement m,
                                std::vector<ProtocolNode> kids) {
    ProtocolNode n;
    n.measurement = std::move(m);
    n.children = std::move(kids);
    return n;
  }

  /// Throws std::invalid_argument if any node's child count disagrees with its
  /// outcome count or operator shapes are inconsistent with (dim_a, dim_b).
  void validate(int dim_a, int dim_b) const;
};

using ProtocolTree = ProtocolNode;

/// Communication classes: P = every measurement projective, K = general Kraus;
/// 0 = no conditioning on the other party's outcomes, 1 = one-way (one party
/// finishes before the other starts), 2 = two-way.
enum class ProtocolClass { P0, K0, P1, K1, P2, K2 };

std::string to_string(ProtocolClass c);

struct PathStep {
  char party = 'A';  // 'A', 'B', or 'S' for a separable-POVM outcome
  int outcome = 0;
};

/// One root-to-leaf branch of a simulated protocol: accumulated local
/// operators, per-state residual ranks and outcome probabilities, and the
/// leaf's declaration.
struct OutcomeRecord {
  std::vector<PathStep> path;
  Mat a_total;
  Mat b_total;
  int declared = kUnreachable;
  std::vector<int> residual_ranks;
  std::vector<double> probabilities;  // given each input state (normalized)
  std::vector<int> survivors;         // states with nonvanishing residual
};

std::string path_string(const std::vector<PathStep>& path);

enum class FailureReason {
  ambiguous,
  wrong_state_survives,
  rank_too_low,
  incomplete_node,
  non_projective_where_required,
};

std::string to_string(FailureReason r);

struct Failure {
  std::vector<PathStep> path;
  FailureReason reason;
  std::string detail;
};

struct VerificationReport {
  bool ok = false;
  std::vector<OutcomeRecord> outcomes;
  std::vector<Failure> failures;
};

/// Walk every branch and report the accumulated operators, residual Schmidt
/// ranks, and probabilities for each state of the set. Deterministic: branches
/// are visited in outcome order.
std::vector<OutcomeRecord> simulate(const ProtocolTree& t, const StateSet& s,
                                    Tolerance tol = {});

/// Deterministic discrimination check: every measurement complete; on every
/// branch of nonzero probability exactly the declared state survives, with
/// residual Schmidt rank >= r_min. Zero-probability branches are skipped.
VerificationReport verify_deterministic(const ProtocolTree& t,
                                        const StateSet& s, int r_min,
                                        Tolerance tol = {});

/// Same check with a per-state floor: the declared state's residual rank must
/// be >= its own original Schmidt rank.
VerificationReport verify_rank_preserving(const ProtocolTree& t,
                                          const StateSet& s,
                                          Tolerance tol = {});

/// One-shot separable-POVM analogue of verify_deterministic.
VerificationReport verify_sep(const SeparablePovm& p, const StateSet& s,
                              int r_min, Tolerance tol = {});

/// Classify a well-formed tree into P0/K0/P1/K1/P2/K2, returning the lowest
/// applicable class. Stable under relabeling of outcome order.
ProtocolClass classify(const ProtocolTree& t, Tolerance tol = {});

}  // namespace locc
