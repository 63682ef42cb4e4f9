#include "riq/definability.hpp"

#include "riq/semantics.hpp"

namespace riq {

std::set<std::string> concept_signature(const Ontology& o, const Concept& c) {
  std::set<std::string> out = concept_names(c);
  for (const auto& g : o.tbox) {
    auto n = concept_names(g);
    out.insert(n.begin(), n.end());
  }
  return out;
}

Concept rename_concept(const Concept& c, const std::map<std::string, std::string>& mapping) {
  auto fresh = [&](const std::string& n) {
    auto it = mapping.find(n);
    return it == mapping.end() ? n : it->second;
  };
  switch (c.kind()) {
    case ConceptKind::Name:
      return c.is_top() ? c : Concept::name(fresh(c.atom()));
    case ConceptKind::NegName:
      return Concept::neg_name(fresh(c.atom()));
    case ConceptKind::And:
      if (c.is_bottom()) return c;
      return Concept::conj(rename_concept(c.left(), mapping), rename_concept(c.right(), mapping));
    case ConceptKind::Or:
      if (c.is_top()) return c;
      return Concept::disj(rename_concept(c.left(), mapping), rename_concept(c.right(), mapping));
    case ConceptKind::Exists:
      return Concept::exists(c.role(), rename_concept(c.body(), mapping));
    case ConceptKind::Forall:
      return Concept::forall(c.role(), rename_concept(c.body(), mapping));
    case ConceptKind::AtMost:
      return Concept::at_most(c.count(), c.role(), rename_concept(c.body(), mapping));
    case ConceptKind::AtLeast:
      return Concept::at_least(c.count(), c.role(), rename_concept(c.body(), mapping));
  }
  throw Error("unknown concept kind");
}

Ontology rename_ontology(const Ontology& o, const std::map<std::string, std::string>& mapping) {
  std::vector<Concept> tbox;
  for (const auto& g : o.tbox) tbox.push_back(rename_concept(g, mapping));
  return make_ontology(std::move(tbox), o.rbox, o.declared_roles);
}

Renamed rename_outside_theta(const Ontology& o, const Concept& c, const std::set<std::string>& theta) {
  std::set<std::string> names = concept_signature(o, c);
  for (const auto& n : theta) {
    if (!names.count(n)) throw Error("theta name " + n + " does not occur in the concept or ontology");
  }
  ThetaRenaming r;
  r.theta = theta;
  std::set<std::string> taken = names;
  for (const auto& n : names) {
    if (theta.count(n)) continue;
    std::string fresh = n + "'";
    while (taken.count(fresh)) fresh += "'";
    taken.insert(fresh);
    r.mapping[n] = fresh;
  }
  return Renamed{rename_ontology(o, r.mapping), rename_concept(c, r.mapping), std::move(r)};
}

ProveResult is_implicitly_definable(const Ontology& o, const Concept& c, const std::set<std::string>& theta,
                                    const ProverLimits& limits) {
  Renamed rn = rename_outside_theta(o, c, theta);
  return subsumes(ontology_union(o, rn.o_theta), c, rn.c_theta, limits);
}

DefinitionCheck verify_definition(const Ontology& o, const Concept& c, const Concept& def,
                                  const std::set<std::string>& theta, const ProverLimits& limits) {
  DefinitionCheck out;
  out.signature_ok = true;
  for (const auto& n : concept_names(def)) {
    if (!theta.count(n)) {
      out.signature_ok = false;
      out.message = "concept name " + n + " is outside theta";
    }
  }
  out.sub_proved = subsumes(o, c, def, limits).verdict == Verdict::Proved;
  out.sup_proved = subsumes(o, def, c, limits).verdict == Verdict::Proved;
  if (!out.sub_proved && out.message.empty()) out.message = "C <= definition not proved";
  if (!out.sup_proved && out.message.empty()) out.message = "definition <= C not proved";
  out.oracle_ran = true;
  OracleOptions opts;
  opts.samples = 2000;
  for (const auto& goal : {subsumption_goal(o, c, def), subsumption_goal(o, def, c)}) {
    if (find_countermodel_bounded(o, goal, opts).model) {
      out.oracle_ok = false;
      if (out.message.empty()) out.message = "bounded counter-model found";
    }
  }
  return out;
}

DefinitionResult explicit_definition(const Ontology& o, const Concept& c, const std::set<std::string>& theta,
                                     const ProverLimits& limits) {
  Renamed rn = rename_outside_theta(o, c, theta);
  ProveResult implicit = subsumes(ontology_union(o, rn.o_theta), c, rn.c_theta, limits);
  if (implicit.verdict == Verdict::Refuted) throw Error("not implicitly definable");
  if (implicit.verdict == Verdict::Unknown) throw Undecided("implicit definability unknown: " + implicit.reason);

  InterpolationResult ip = compute_concept_interpolant(o, rn.o_theta, c, rn.c_theta, limits);
  if (ip.verdict != Verdict::Proved || !ip.interpolant) {
    throw Undecided("interpolation failed: " + ip.message);
  }
  Concept def = *ip.interpolant;
  DefinitionCheck check = verify_definition(o, c, def, theta, limits);
  return DefinitionResult{def, std::move(rn), std::move(implicit), std::move(ip), std::move(check)};
}

}  // namespace riq
