#include "locc/cli.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "locc/analysis.hpp"
#include "locc/catalog.hpp"
#include "locc/io.hpp"
#include "locc/search.hpp"

namespace locc::cli {

namespace {

StateSet load_states(const std::string& name) {
  if (catalog::is_catalog_name(name)) return catalog::build(name).set;
  return io::state_set_from_json(io::load_json_file(name));
}

Mat load_mat(const std::string& path) {
  return io::mat_from_json(io::load_json_file(path));
}

std::string state_name(const StateSet& s, int j) {
  if (j == kUnreachable) return "error";
  const auto& label = s.states[static_cast<std::size_t>(j)].label;
  return label.empty() ? "#" + std::to_string(j) : label;
}

void print_tree(const ProtocolTree& t, const StateSet& s, std::ostream& out,
                int depth = 0) {
  const std::string ind(static_cast<std::size_t>(depth) * 2, ' ');
  if (t.leaf()) {
    out << ind << "declare " << state_name(s, t.declared) << "\n";
    return;
  }
  out << ind << party_char(t.measurement->party) << " measures:\n";
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    std::string lbl = i < t.measurement->labels.size() && !t.measurement->labels[i].empty()
                          ? t.measurement->labels[i]
                          : "outcome " + std::to_string(i + 1);
    out << ind << "  [" << lbl << "]\n";
    print_tree(t.children[i], s, out, depth + 2);
  }
}

void print_verification(const VerificationReport& r, const StateSet& s,
                        std::ostream& out) {
  out << "verified: " << (r.ok ? "yes" : "no") << "\n";
  for (const auto& o : r.outcomes) {
    if (o.survivors.empty()) continue;
    out << "  [" << path_string(o.path) << "] declares "
        << state_name(s, o.declared) << ";";
    for (int j : o.survivors)
      out << " " << state_name(s, j) << " survives (rank "
          << o.residual_ranks[static_cast<std::size_t>(j)]
          << ", p=" << o.probabilities[static_cast<std::size_t>(j)] << ")";
    out << "\n";
  }
  for (const auto& f : r.failures)
    out << "  FAIL [" << path_string(f.path) << "] " << to_string(f.reason)
        << ": " << f.detail << "\n";
}

void print_partition_node(const PartitionNode& n, const StateSet& s,
                          std::ostream& out, int depth = 0) {
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "{";
  for (std::size_t i = 0; i < n.members.size(); ++i)
    out << (i ? "," : "") << state_name(s, n.members[i]);
  out << "}";
  if (n.split_party) out << " split by " << party_char(*n.split_party);
  out << "\n";
  for (const auto& c : n.children) print_partition_node(c, s, out, depth + 1);
}

std::vector<BoundReport> necessary_bounds(const StateSet& s, int r,
                                          bool swap_roles, Tolerance tol) {
  std::vector<BoundReport> out;
  BoundReport count;
  count.formula = "state-count";
  count.quantity = s.size();
  count.bound = nmax(s.dim_a, s.dim_b, r);
  count.satisfied = count.quantity <= count.bound + 1e-12;
  count.detail = std::to_string(s.size()) + (count.satisfied ? " <= " : " > ") +
                 std::to_string(nmax(s.dim_a, s.dim_b, r));
  out.push_back(count);
  out.push_back(rank_sum_bound(s, r, swap_roles, tol));
  out.push_back(mean_rank_bound(s, r, swap_roles, tol));
  out.push_back(rank_square_bound(s, tol));
  BoundReport hat;
  hat.formula = "hat-rho-orthogonal";
  const bool orth = hat_rho_pairwise_orthogonal(s, tol);
  hat.quantity = orth ? 1 : 0;
  hat.bound = 1;
  hat.satisfied = orth;
  hat.detail = orth ? "all rho_A (x) rho_B pairs orthogonal"
                    : "some rho_A (x) rho_B pair overlaps";
  out.push_back(hat);
  return out;
}

// Which protocols an inequality constrains; separable POVMs can beat them all.
std::string bound_scope(const std::string& formula) {
  if (formula == "state-count") return "any LOCC keeping rank r";
  if (formula == "rank-sum" || formula == "mean-rank") return "one-way LOCC";
  return "rank-preserving LOCC";
}

SearchClass parse_class(std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), ::toupper);
  if (v == "P0") return SearchClass::P0;
  if (v == "P1") return SearchClass::P1;
  if (v == "P2") return SearchClass::P2;
  throw std::runtime_error("unknown protocol class: " + v +
                           " (expected P0, P1, or P2)");
}

Party parse_party(std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), ::toupper);
  if (v == "A") return Party::A;
  if (v == "B") return Party::B;
  throw std::runtime_error("party must be A or B");
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Toolkit for LOCC discrimination of orthogonal bipartite states "
               "with Schmidt-rank preservation"};
  app.name("locc");
  app.require_subcommand(1);

  bool json = false;
  double tol_rel = 1e-9;
  double tol_abs = 1e-9;
  app.add_flag("--json", json, "emit machine-readable JSON");
  app.add_option("--tol-rel", tol_rel, "relative tolerance (rank cutoffs)")
      ->envname("LOCC_LAB_TOL_REL")
      ->capture_default_str();
  app.add_option("--tol-abs", tol_abs, "absolute tolerance (residual cutoffs)")
      ->envname("LOCC_LAB_TOL_ABS")
      ->capture_default_str();

  int rc = 0;
  const auto tol = [&] { return Tolerance{tol_rel, tol_abs}; };

  // ---- catalog ----
  auto* cat = app.add_subcommand("catalog", "browse and re-verify built-in sets");
  cat->fallthrough();
  cat->require_subcommand(1);

  auto* cat_list = cat->add_subcommand("list", "list entry names");
  cat_list->fallthrough();
  cat_list->callback([&] {
    if (json) {
      io::Json arr = io::Json::array();
      for (const auto& n : catalog::names()) {
        auto e = catalog::build(n);
        arr.push_back({{"name", n}, {"summary", e.summary}, {"params", e.params_doc}});
      }
      out << arr.dump(2) << "\n";
      return;
    }
    for (const auto& n : catalog::names()) {
      auto e = catalog::build(n);
      out << n;
      if (!e.params_doc.empty()) out << "(" << e.params_doc << ")";
      out << "  -  " << e.summary << "\n";
    }
  });

  std::string show_name;
  std::vector<std::string> show_params;
  auto* cat_show = cat->add_subcommand("show", "describe one entry");
  cat_show->fallthrough();
  cat_show->add_option("name", show_name, "entry name, e.g. appd-shift(6,2)")
      ->required();
  cat_show->add_option("--params", show_params,
                       "named parameter overrides, e.g. --params dim=6 shift=2");
  cat_show->callback([&] {
    std::map<std::string, int> params;
    for (const auto& kv : show_params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("--params expects key=value, got: " + kv);
      params[kv.substr(0, eq)] = std::stoi(kv.substr(eq + 1));
    }
    auto e = catalog::build(show_name, params);
    if (json) {
      io::Json j{{"name", e.name},
                 {"summary", e.summary},
                 {"params", e.params_doc},
                 {"set", io::to_json(e.set)},
                 {"protocols", e.protocols.size()},
                 {"povms", e.povms.size()},
                 {"expected",
                  {{"distinguishable", e.expected.distinguishable},
                   {"r_floor", e.expected.r_floor},
                   {"rank_preserving", e.expected.rank_preserving},
                   {"protocol_class", e.expected.protocol_class}}}};
      out << j.dump(2) << "\n";
      return;
    }
    out << e.name << ": " << e.summary << "\n";
    if (!e.params_doc.empty()) out << "parameters: " << e.params_doc << "\n";
    out << "dimensions: " << e.set.dim_a << " x " << e.set.dim_b << ", states: "
        << e.set.size() << "\n";
    out << "expected: distinguishable=" << e.expected.distinguishable
        << " r_floor=" << e.expected.r_floor
        << " rank_preserving=" << (e.expected.rank_preserving ? "yes" : "no");
    if (!e.expected.protocol_class.empty())
      out << " class=" << e.expected.protocol_class;
    out << "\n";
    out << "protocols: " << e.protocols.size() << ", povms: " << e.povms.size()
        << "\n\n";
    out << io::to_json(e.set).dump(2) << "\n\n";
    out << render_grid(e.set);
  });

  std::string verify_name;
  bool verify_all = false;
  auto* cat_verify = cat->add_subcommand("verify", "re-derive an entry's claims");
  cat_verify->fallthrough();
  cat_verify->add_option("name", verify_name, "entry name");
  cat_verify->add_flag("--all", verify_all, "verify every entry at its defaults");
  cat_verify->callback([&] {
    std::vector<std::string> targets;
    if (verify_all)
      targets = catalog::names();
    else if (!verify_name.empty())
      targets.push_back(verify_name);
    else
      throw std::runtime_error("give an entry name or --all");
    io::Json arr = io::Json::array();
    bool all_ok = true;
    for (const auto& n : targets) {
      auto e = catalog::build(n);
      auto chk = catalog::verify_entry(e, tol());
      all_ok = all_ok && chk.ok;
      if (json) {
        arr.push_back({{"name", n}, {"ok", chk.ok}, {"notes", chk.notes}});
      } else {
        out << n << ": " << (chk.ok ? "ok" : "FAILED") << "\n";
        for (const auto& note : chk.notes) out << "  " << note << "\n";
      }
    }
    if (json) out << arr.dump(2) << "\n";
    rc = all_ok ? 0 : 2;
  });

  // ---- render ----
  std::string render_states;
  auto* rend = app.add_subcommand("render", "print the amplitude grid of a set");
  rend->fallthrough();
  rend->add_option("--states", render_states, "catalog name or JSON file")
      ->required();
  rend->callback([&] {
    auto s = load_states(render_states);
    if (json)
      out << io::Json(grid_labels(s)).dump(2) << "\n";
    else
      out << render_grid(s);
  });

  // ---- verify ----
  std::string v_states, v_protocol, v_povm;
  int v_rmin = -1;
  bool v_rank_preserving = false;
  auto* ver = app.add_subcommand(
      "verify", "check a protocol tree or separable POVM against a state set");
  ver->fallthrough();
  ver->add_option("--states", v_states, "catalog name or JSON file")->required();
  ver->add_option("--protocol", v_protocol, "protocol tree JSON file");
  ver->add_option("--povm", v_povm, "separable POVM JSON file");
  ver->add_option("--rmin", v_rmin,
                  "required residual Schmidt rank (default: catalog floor or 1)");
  ver->add_flag("--rank-preserving", v_rank_preserving,
                "require every state to keep its own original Schmidt rank");
  ver->callback([&] {
    auto s = load_states(v_states);
    if (v_protocol.empty() && v_povm.empty()) {
      if (!catalog::is_catalog_name(v_states))
        throw std::runtime_error(
            "provide --protocol or --povm (only catalog entries carry built-ins)");
      auto e = catalog::build(v_states);
      catalog::EntryCheck chk;
      if (v_rmin >= 0 || v_rank_preserving) {
        // Explicit floor: re-check the built-in evidence at the requested rank.
        if (e.protocols.empty() && e.povms.empty())
          throw std::runtime_error("entry '" + e.name +
                                   "' has no built-in protocol or POVM");
        chk.ok = true;
        const int floor = v_rmin < 0 ? 1 : v_rmin;
        const auto fail = [&](const std::string& note) {
          chk.ok = false;
          chk.notes.push_back(note);
        };
        for (std::size_t i = 0; i < e.protocols.size(); ++i) {
          auto rep = v_rank_preserving
                         ? verify_rank_preserving(e.protocols[i], e.set, tol())
                         : verify_deterministic(e.protocols[i], e.set, floor,
                                                tol());
          for (const auto& f : rep.failures)
            fail("protocol " + std::to_string(i + 1) + " [" +
                 path_string(f.path) + "] " + to_string(f.reason) + ": " +
                 f.detail);
        }
        for (std::size_t i = 0; i < e.povms.size(); ++i) {
          auto rep = verify_sep(e.povms[i], e.set, floor, tol());
          for (const auto& f : rep.failures)
            fail("POVM " + std::to_string(i + 1) + " [" + path_string(f.path) +
                 "] " + to_string(f.reason) + ": " + f.detail);
          if (v_rank_preserving)
            for (const auto& rec : rep.outcomes)
              for (int j : rec.survivors)
                if (rec.residual_ranks[j] < schmidt_rank(e.set.states[j]))
                  fail("POVM " + std::to_string(i + 1) +
                       " lowers the rank of state " + e.set.states[j].label);
        }
      } else {
        chk = catalog::verify_entry(e, tol());
      }
      if (json) {
        out << io::Json{{"name", e.name}, {"ok", chk.ok}, {"notes", chk.notes}}
                   .dump(2)
            << "\n";
      } else {
        out << e.name << ": " << (chk.ok ? "ok" : "FAILED") << "\n";
        for (const auto& note : chk.notes) out << "  " << note << "\n";
      }
      rc = chk.ok ? 0 : 2;
      return;
    }
    if (!v_protocol.empty() && !v_povm.empty())
      throw std::runtime_error("give only one of --protocol/--povm");
    int floor = v_rmin;
    if (floor < 0)
      floor = catalog::is_catalog_name(v_states)
                  ? catalog::build(v_states).expected.r_floor
                  : 1;
    VerificationReport rep;
    std::string klass;
    if (!v_protocol.empty()) {
      auto t = io::protocol_from_json(io::load_json_file(v_protocol));
      rep = v_rank_preserving ? verify_rank_preserving(t, s, tol())
                              : verify_deterministic(t, s, floor, tol());
      klass = to_string(classify(t, tol()));
    } else {
      if (v_rank_preserving)
        throw std::runtime_error("--rank-preserving applies to --protocol only");
      auto p = io::povm_from_json(io::load_json_file(v_povm));
      rep = verify_sep(p, s, floor, tol());
    }
    if (json) {
      auto j = io::to_json(rep);
      if (!klass.empty()) j["class"] = klass;
      out << j.dump(2) << "\n";
    } else {
      print_verification(rep, s, out);
      if (!klass.empty()) out << "class: " << klass << "\n";
    }
    rc = rep.ok ? 0 : 2;
  });

  // ---- bounds / check-necessary ----
  std::string b_states;
  int b_r = 1;
  bool b_swap = false, b_rank_preserving = false, b_one_way = false;
  const auto add_bound_opts = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("--states", b_states, "catalog name or JSON file")->required();
    sub->add_option("--r", b_r, "Schmidt rank every residual must keep")
        ->capture_default_str();
    sub->add_flag("--swap-roles", b_swap, "exchange the parties in the bounds");
  };
  const auto run_bounds = [&](bool gate) {
    auto s = load_states(b_states);
    auto reports = necessary_bounds(s, b_r, b_swap, tol());
    if (json) {
      io::Json arr = io::Json::array();
      for (const auto& b : reports) {
        auto j = io::to_json(b);
        j["scope"] = bound_scope(b.formula);
        arr.push_back(j);
      }
      out << arr.dump(2) << "\n";
    } else {
      for (const auto& b : reports) {
        out << b.formula << ": " << b.detail
            << (b.satisfied ? " (satisfied)" : " (violated)") << "  ["
            << bound_scope(b.formula) << "]\n";
      }
    }
    bool ok = true;
    for (const auto& b : reports) {
      const auto scope = bound_scope(b.formula);
      const bool applies = !gate || scope == "any LOCC keeping rank r" ||
                           (b_one_way && scope == "one-way LOCC") ||
                           (b_rank_preserving && scope == "rank-preserving LOCC");
      if (applies) ok = ok && b.satisfied;
    }
    rc = ok ? 0 : 2;
  };
  auto* bnd = app.add_subcommand("bounds", "evaluate the counting inequalities");
  add_bound_opts(bnd);
  bnd->callback([&] { run_bounds(false); });
  auto* nec = app.add_subcommand(
      "check-necessary",
      "gate on the necessary conditions (exit 2 when any is violated)");
  add_bound_opts(nec);
  nec->add_flag("--one-way", b_one_way,
                "also gate on the one-way limits (rank-sum, mean-rank)");
  nec->add_flag("--rank-preserving", b_rank_preserving,
                "also gate on full rank preservation (rank-squared, hat-rho)");
  nec->callback([&] { run_bounds(true); });

  // ---- partition ----
  std::string p_states, p_first, p_emit;
  auto* part = app.add_subcommand(
      "partition", "cascading support partition of a state set");
  part->fallthrough();
  part->add_option("--states", p_states, "catalog name or JSON file")->required();
  part->add_option("--first", p_first, "party that measures first (A or B)");
  part->add_option("--emit-protocol", p_emit,
                   "also write the induced protocol tree to this JSON file");
  part->callback([&] {
    auto s = load_states(p_states);
    std::optional<Party> first;
    if (!p_first.empty()) first = parse_party(p_first);
    auto ptree = cascading_partition(s, first, tol());
    std::optional<ProtocolTree> proto;
    if (ptree.complete) proto = partition_to_protocol(ptree, s, tol());
    if (json) {
      auto j = io::to_json(ptree);
      if (proto) j["protocol"] = io::to_json(*proto);
      out << j.dump(2) << "\n";
    } else {
      out << "complete: " << (ptree.complete ? "yes" : "no") << "\n";
      out << "levels:";
      for (Party p : ptree.level_parties) out << " " << party_char(p);
      out << "\n";
      print_partition_node(ptree.root, s, out);
      if (proto) {
        out << "protocol:\n";
        print_tree(*proto, s, out, 1);
      }
    }
    if (proto && !p_emit.empty()) io::save_json_file(p_emit, io::to_json(*proto));
    rc = ptree.complete ? 0 : 2;
  });

  // ---- search ----
  std::string s_states, s_class = "P2", s_basis, s_basis_a, s_basis_b, s_emit;
  int s_rmin = 1, s_rounds = 4;
  bool s_serial = false, s_no_prune = false;
  auto* sch = app.add_subcommand(
      "search", "exhaustive search for a basis-aligned projective protocol");
  sch->fallthrough();
  sch->add_option("--states", s_states, "catalog name or JSON file")->required();
  sch->add_option("--class", s_class, "protocol family: P0, P1, or P2")
      ->capture_default_str();
  sch->add_option("--rmin", s_rmin, "required residual Schmidt rank")
      ->capture_default_str();
  sch->add_option("--max-rounds", s_rounds, "measurement depth limit (1..4)")
      ->capture_default_str();
  auto* basis_opt = sch->add_option(
      "--basis", s_basis, "JSON file {\"a\": matrix, \"b\": matrix}; both optional");
  sch->add_option("--basis-a", s_basis_a, "unitary JSON file; search in its columns")
      ->excludes(basis_opt);
  sch->add_option("--basis-b", s_basis_b, "unitary JSON file; search in its columns")
      ->excludes(basis_opt);
  sch->add_flag("--serial", s_serial, "single-threaded (identical results)");
  sch->add_flag("--no-prune", s_no_prune, "disable rank-based pruning");
  sch->add_option("--emit-protocol", s_emit,
                  "write the found protocol tree to this JSON file");
  sch->callback([&] {
    auto s = load_states(s_states);
    SearchSpec spec;
    spec.comm = parse_class(s_class);
    spec.r_min = s_rmin;
    spec.max_rounds = s_rounds;
    if (!s_basis.empty()) {
      auto j = io::load_json_file(s_basis);
      if (j.contains("a")) spec.basis_a = io::mat_from_json(j.at("a"));
      if (j.contains("b")) spec.basis_b = io::mat_from_json(j.at("b"));
    }
    if (!s_basis_a.empty()) spec.basis_a = load_mat(s_basis_a);
    if (!s_basis_b.empty()) spec.basis_b = load_mat(s_basis_b);
    spec.parallel = !s_serial;
    spec.prune = !s_no_prune;
    auto res = search_protocols(s, spec, tol());
    std::string klass;
    if (res.found) klass = to_string(classify(*res.protocol, tol()));
    if (json) {
      auto j = io::to_json(res);
      if (!klass.empty()) j["class"] = klass;
      out << j.dump(2) << "\n";
    } else {
      out << "found: " << (res.found ? "yes" : "no") << "\n";
      out << "family exhausted: " << (res.family_exhausted ? "yes" : "no") << "\n";
      out << "nodes explored: " << res.nodes_explored << "\n";
      if (res.found) {
        out << "class: " << klass << "\n";
        print_tree(*res.protocol, s, out);
      }
    }
    if (res.found && !s_emit.empty())
      io::save_json_file(s_emit, io::to_json(*res.protocol));
    rc = res.found ? 0 : 2;
  });

  // ---- purify-check ----
  std::string pu_states, pu_ga, pu_gb;
  auto* pur = app.add_subcommand(
      "purify-check",
      "survivors and purity of a set under one product outcome (a, b)");
  pur->fallthrough();
  pur->add_option("--states", pu_states, "catalog name or JSON file")->required();
  pur->add_option("--gamma-a", pu_ga, "Alice operator JSON file")->required();
  pur->add_option("--gamma-b", pu_gb, "Bob operator JSON file")->required();
  pur->callback([&] {
    auto s = load_states(pu_states);
    auto res = purification_check(s, load_mat(pu_ga), load_mat(pu_gb), tol());
    if (json) {
      out << io::to_json(res).dump(2) << "\n";
    } else {
      out << "survivors:";
      for (int j : res.survivors) out << " " << state_name(s, j);
      out << "\npure: " << (res.pure ? "yes" : "no") << "\n";
      out << "residual-rank: " << res.residual_rank << "\n";
    }
    rc = res.pure ? 0 : 2;
  });

  // ---- domino-check ----
  std::string d_matrix, d_party = "A";
  std::size_t d_scan = 0;
  std::uint64_t d_seed = 1234567891ULL;
  bool d_serial = false;
  auto* dom = app.add_subcommand(
      "domino-check",
      "orthogonality preservation on the 3x3 domino set vs. proportional "
      "unitarity");
  dom->fallthrough();
  dom->add_option("--matrix", d_matrix, "3x3 operator JSON file to test");
  dom->add_option("--party", d_party, "party the operator acts on (A or B)")
      ->capture_default_str();
  dom->add_option("--scan", d_scan, "random-sample count for the equivalence scan");
  dom->add_option("--seed", d_seed, "scan seed")->capture_default_str();
  dom->add_flag("--serial", d_serial, "single-threaded scan (identical results)");
  dom->callback([&] {
    const bool have_matrix = !d_matrix.empty();
    const bool have_scan = d_scan > 0;
    if (have_matrix == have_scan)
      throw std::runtime_error("give exactly one of --matrix or --scan N");
    if (have_matrix) {
      Mat a = load_mat(d_matrix);
      const bool preserves =
          domino_preserves_orthogonality(a, parse_party(d_party), tol());
      const bool prop_unitary = is_proportional_unitary(a, tol());
      const bool consistent = preserves == prop_unitary;
      if (json) {
        out << io::Json{{"preserves_orthogonality", preserves},
                        {"proportional_unitary", prop_unitary},
                        {"consistent", consistent}}
                   .dump(2)
            << "\n";
      } else {
        out << "preserves-orthogonality: " << (preserves ? "yes" : "no") << "\n";
        out << "proportional-unitary: " << (prop_unitary ? "yes" : "no") << "\n";
        out << "consistent: " << (consistent ? "yes" : "no") << "\n";
      }
      rc = consistent ? 0 : 2;
      return;
    }
    const auto res = d_serial ? domino_equivalence_scan_serial(d_scan, d_seed, tol())
                              : domino_equivalence_scan(d_scan, d_seed, tol());
    if (json)
      out << io::to_json(res).dump(2) << "\n";
    else
      out << "checked: " << res.checked << "\nmismatches: " << res.mismatches
          << "\n";
    rc = res.mismatches == 0 ? 0 : 2;
  });

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace locc::cli
