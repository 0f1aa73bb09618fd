#include "locc/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace locc::io {

namespace {

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::runtime_error("complex value must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json path_step_json(const std::vector<PathStep>& path) { return path_string(path); }

}  // namespace

Json to_json(const Mat& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      data.push_back(complex_to_json(m(r, c)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Mat mat_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols))
    throw std::runtime_error("matrix data length does not match rows*cols");
  Mat m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(data[k++]);
  return m;
}

namespace {

Party party_from_json(const Json& j) {
  const auto p = j.get<std::string>();
  if (p == "A") return Party::A;
  if (p == "B") return Party::B;
  throw std::runtime_error("party must be \"A\" or \"B\"");
}

}  // namespace

Json to_json(const StateSet& s) {
  Json states = Json::array();
  for (const auto& st : s.states) {
    Json terms = Json::array();
    for (Eigen::Index n = 0; n < st.coeff.rows(); ++n)
      for (Eigen::Index m = 0; m < st.coeff.cols(); ++m)
        if (st.coeff(n, m) != Complex(0, 0))
          terms.push_back(Json{{"a", m},
                               {"b", n},
                               {"re", st.coeff(n, m).real()},
                               {"im", st.coeff(n, m).imag()}});
    states.push_back(Json{{"label", st.label}, {"terms", terms}});
  }
  return Json{{"name", s.name},
              {"dims", Json::array({s.dim_a, s.dim_b})},
              {"states", states}};
}

StateSet state_set_from_json(const Json& j) {
  StateSet s;
  s.name = j.value("name", std::string{});
  const auto& dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 2)
    throw std::runtime_error("dims must be a [DA, DB] pair");
  s.dim_a = dims[0].get<int>();
  s.dim_b = dims[1].get<int>();
  for (const auto& st : j.at("states")) {
    std::vector<Term> terms;
    for (const auto& t : st.at("terms"))
      terms.push_back({t.at("a").get<int>(), t.at("b").get<int>(),
                       Complex(t.at("re").get<double>(),
                               t.value("im", 0.0))});
    s.states.push_back(
        make_state(s.dim_a, s.dim_b, terms, st.value("label", std::string{})));
  }
  s.validate();
  return s;
}

Json to_json(const LocalMeasurement& m) {
  Json kraus = Json::array();
  for (const auto& k : m.kraus) kraus.push_back(to_json(k));
  return Json{{"party", std::string(1, party_char(m.party))},
              {"kraus", kraus},
              {"labels", m.labels}};
}

LocalMeasurement measurement_from_json(const Json& j) {
  LocalMeasurement m;
  m.party = party_from_json(j.at("party"));
  for (const auto& k : j.at("kraus")) m.kraus.push_back(mat_from_json(k));
  if (m.kraus.empty()) throw std::runtime_error("measurement has no outcomes");
  m.dim = static_cast<int>(m.kraus.front().rows());
  if (j.contains("labels")) m.labels = j.at("labels").get<std::vector<std::string>>();
  m.validate();
  return m;
}

Json to_json(const SeparablePovm& p) {
  Json outcomes = Json::array();
  for (const auto& o : p.outcomes)
    outcomes.push_back(Json{{"a", to_json(o.a_op)},
                            {"b", to_json(o.b_op)},
                            {"declares", o.declares}});
  return Json{{"dims", Json::array({p.dim_a, p.dim_b})}, {"outcomes", outcomes}};
}

SeparablePovm povm_from_json(const Json& j) {
  SeparablePovm p;
  const auto& dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 2)
    throw std::runtime_error("dims must be a [DA, DB] pair");
  p.dim_a = dims[0].get<int>();
  p.dim_b = dims[1].get<int>();
  for (const auto& o : j.at("outcomes")) {
    SepOutcome s;
    s.a_op = mat_from_json(o.at("a"));
    s.b_op = mat_from_json(o.at("b"));
    s.declares = o.value("declares", -1);
    p.outcomes.push_back(std::move(s));
  }
  p.validate();
  return p;
}

Json to_json(const ProtocolTree& t) {
  if (t.leaf()) return Json{{"leaf", t.declared}};
  Json children = Json::array();
  for (const auto& c : t.children) children.push_back(to_json(c));
  return Json{{"party", std::string(1, party_char(t.measurement->party))},
              {"measurement", to_json(*t.measurement)},
              {"children", children}};
}

ProtocolTree protocol_from_json(const Json& j) {
  if (j.contains("leaf")) return ProtocolNode::make_leaf(j.at("leaf").get<int>());
  auto m = measurement_from_json(j.at("measurement"));
  if (j.contains("party") && party_from_json(j.at("party")) != m.party)
    throw std::runtime_error("node party disagrees with its measurement");
  std::vector<ProtocolNode> children;
  for (const auto& c : j.at("children")) children.push_back(protocol_from_json(c));
  return ProtocolNode::make_node(std::move(m), std::move(children));
}

Json to_json(const VerificationReport& r) {
  Json outcomes = Json::array();
  for (const auto& o : r.outcomes)
    outcomes.push_back(Json{{"path", path_step_json(o.path)},
                            {"declared", o.declared},
                            {"survivors", o.survivors},
                            {"residual_ranks", o.residual_ranks},
                            {"probabilities", o.probabilities}});
  Json failures = Json::array();
  for (const auto& f : r.failures)
    failures.push_back(Json{{"path", path_step_json(f.path)},
                            {"reason", to_string(f.reason)},
                            {"detail", f.detail}});
  return Json{{"ok", r.ok}, {"outcomes", outcomes}, {"failures", failures}};
}

Json to_json(const BoundReport& r) {
  return Json{{"formula", r.formula},
              {"quantity", finite_or_null(r.quantity)},
              {"bound", finite_or_null(r.bound)},
              {"satisfied", r.satisfied},
              {"detail", r.detail}};
}

namespace {
Json partition_node_json(const PartitionNode& n) {
  Json out{{"members", n.members}};
  out["split"] = n.split_party ? Json(std::string(1, party_char(*n.split_party)))
                               : Json(nullptr);
  Json children = Json::array();
  for (const auto& c : n.children) children.push_back(partition_node_json(c));
  out["children"] = children;
  return out;
}
}  // namespace

Json to_json(const PartitionTree& t) {
  Json levels = Json::array();
  for (Party p : t.level_parties) levels.push_back(std::string(1, party_char(p)));
  return Json{{"complete", t.complete},
              {"levels", levels},
              {"root", partition_node_json(t.root)}};
}

Json to_json(const SearchResult& r) {
  Json out{{"found", r.found},
           {"family_exhausted", r.family_exhausted},
           {"nodes_explored", r.nodes_explored}};
  out["protocol"] = r.protocol ? to_json(*r.protocol) : Json(nullptr);
  return out;
}

Json to_json(const ScanResult& r) {
  return Json{{"checked", r.checked}, {"mismatches", r.mismatches}};
}

Json to_json(const PurificationResult& r) {
  return Json{{"survivors", r.survivors},
              {"pure", r.pure},
              {"residual_rank", r.residual_rank}};
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw std::runtime_error("cannot parse " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace locc::io
