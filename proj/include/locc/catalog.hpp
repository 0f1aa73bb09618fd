#pragma once

#include <map>
#include <string>
#include <vector>

#include "locc/protocol.hpp"

namespace locc::catalog {

/// What an entry is claimed to satisfy; re-verified from scratch by tests and
/// `catalog verify` (no cached verdicts).
struct Expected {
  std::string distinguishable;   // "yes" or "unknown-under-search"
  int r_floor = 1;               // rank floor its protocols must meet
  bool rank_preserving = false;  // protocols keep every original Schmidt rank
  std::string protocol_class;    // "P0".."K2", "SEP", or "" when no protocol
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::string params_doc;  // "" for fixed entries
  StateSet set;
  std::vector<ProtocolTree> protocols;
  std::vector<SeparablePovm> povms;
  Expected expected;
};

/// All base entry names, fixed and parameterized.
std::vector<std::string> names();

/// True if `name` (base name, or "name(p1,p2,...)" positional form) denotes a
/// catalog entry.
bool is_catalog_name(const std::string& name);

/// Build an entry by base name plus named parameters (missing ones take the
/// entry's defaults), or by the positional "name(p1,p2,...)" form. Throws
/// std::invalid_argument for unknown names or invalid parameters.
CatalogEntry build(const std::string& name,
                   const std::map<std::string, int>& params = {});

struct EntryCheck {
  bool ok = false;
  std::vector<std::string> notes;  // failure descriptions, empty when ok
};

/// Re-derive the entry's claims: state orthogonality, every listed protocol or
/// POVM verifying at the expected rank floor (and preserving original ranks
/// when claimed), and the protocol class matching.
EntryCheck verify_entry(const CatalogEntry& e, Tolerance tol = {});

}  // namespace locc::catalog
