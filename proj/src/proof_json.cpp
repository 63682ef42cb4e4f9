#include <json.hpp>

#include "riq/parser.hpp"
#include "riq/sequent.hpp"

namespace riq {

namespace {

using nlohmann::json;

json labels_json(const std::vector<Label>& ls) {
  json out = json::array();
  for (Label x : ls) out.push_back(render(x));
  return out;
}

std::vector<Label> labels_from(const json& j) {
  std::vector<Label> out;
  for (const auto& s : j) out.push_back(parse_label(s.get<std::string>()));
  return out;
}

Role role_from(const std::string& s) {
  if (s.empty()) throw Error("empty role in witness");
  if (s.back() == '-') return make_role(s.substr(0, s.size() - 1), true);
  return make_role(s);
}

json to_json(const ProofNode& n) {
  json w = json::object();
  const Witness& wt = n.witness;
  if (wt.principal != kNone) w["principal"] = wt.principal;
  if (wt.partner != kNone) w["partner"] = wt.partner;
  if (wt.neq) w["neq"] = render(*wt.neq);
  if (!wt.targets.empty()) w["targets"] = labels_json(wt.targets);
  if (!wt.fresh.empty()) w["fresh"] = labels_json(wt.fresh);
  if (!wt.eq_path.empty()) w["eq_path"] = labels_json(wt.eq_path);
  if (!wt.paths.empty()) {
    json paths = json::array();
    for (const auto& p : wt.paths) {
      json word = json::array();
      for (const auto& r : p.word) word.push_back(render(r));
      paths.push_back({{"target", render(p.target)}, {"word", word}, {"path", labels_json(p.path)}});
    }
    w["paths"] = paths;
  }
  json premises = json::array();
  for (const auto& p : n.premises) premises.push_back(to_json(p));
  return {{"rule", rule_name(n.rule)}, {"sequent", render(n.conclusion)}, {"witness", w}, {"premises", premises}};
}

ProofNode from_json(const json& j) {
  ProofNode n;
  auto tag = parse_rule_name(j.at("rule").get<std::string>());
  if (!tag) throw Error("unknown rule '" + j.at("rule").get<std::string>() + "'");
  n.rule = *tag;
  n.conclusion = parse_sequent(j.at("sequent").get<std::string>());
  const json& w = j.at("witness");
  if (w.contains("principal")) n.witness.principal = w["principal"].get<std::size_t>();
  if (w.contains("partner")) n.witness.partner = w["partner"].get<std::size_t>();
  if (w.contains("neq")) {
    Sequent s = parse_sequent(w["neq"].get<std::string>() + " |- x0 : A");
    for (const auto& a : s.antecedent) n.witness.neq = a;
  }
  if (w.contains("targets")) n.witness.targets = labels_from(w["targets"]);
  if (w.contains("fresh")) n.witness.fresh = labels_from(w["fresh"]);
  if (w.contains("eq_path")) n.witness.eq_path = labels_from(w["eq_path"]);
  if (w.contains("paths")) {
    for (const auto& p : w["paths"]) {
      PathWitness pw;
      pw.target = parse_label(p.at("target").get<std::string>());
      for (const auto& r : p.at("word")) pw.word.push_back(role_from(r.get<std::string>()));
      pw.path = labels_from(p.at("path"));
      n.witness.paths.push_back(std::move(pw));
    }
  }
  for (const auto& p : j.at("premises")) n.premises.push_back(from_json(p));
  return n;
}

}  // namespace

std::string render(const ProofNode& p) {
  json doc = {{"format", "riq-proof-1"}, {"proof", to_json(p)}};
  return doc.dump(2);
}

ProofNode parse_proof(const std::string& json_text) {
  try {
    json doc = json::parse(json_text);
    if (doc.value("format", "") != "riq-proof-1") throw Error("not a riq proof document");
    return from_json(doc.at("proof"));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed proof JSON: ") + e.what());
  }
}

}  // namespace riq
