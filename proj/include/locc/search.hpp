#pragma once

#include <cstdint>

#include "locc/protocol.hpp"

namespace locc {

enum class SearchClass { P0, P1, P2 };

std::string to_string(SearchClass c);

/// Family searched: projective measurements whose outcomes are unions of the
/// given per-party orthonormal basis vectors (standard basis by default).
/// P0 = one fixed partition per party, P1 = one party finishes first and the
/// other completes per branch, P2 = alternating adaptive partitions of the
/// still-alive subset, at most max_rounds measurements deep.
struct SearchSpec {
  SearchClass comm = SearchClass::P2;
  int r_min = 1;
  int max_rounds = 4;  // P2 path depth; must be 1..4
  Mat basis_a;         // columns orthonormal; empty = standard basis
  Mat basis_b;
  bool prune = true;     // drop branches where a survivor's rank fell below r_min
  bool parallel = true;  // shard top-level partitions across threads
};

struct SearchResult {
  bool found = false;
  bool family_exhausted = false;
  std::uint64_t nodes_explored = 0;
  std::optional<ProtocolTree> protocol;
};

/// Exhaustive deterministic search for a protocol of the given family that
/// distinguishes the set while keeping residual Schmidt rank >= r_min.
/// Partitions are enumerated by ascending block count; the enumeration-first
/// protocol is returned and independently re-verified before being reported.
/// Serial and parallel modes return identical results. Per-party dimensions
/// must be <= 6.
SearchResult search_protocols(const StateSet& s, const SearchSpec& spec,
                              Tolerance tol = {});

}  // namespace locc
