#include "riq/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "riq/definability.hpp"
#include "riq/interpolation.hpp"
#include "riq/parser.hpp"
#include "riq/prover.hpp"
#include "riq/rsystem.hpp"
#include "riq/semantics.hpp"
#include "riq/sequent.hpp"

namespace riq {

namespace {

struct Common {
  std::string ontology;
  bool strict = false;
  std::size_t max_steps = 0;
  std::size_t max_labels = 0;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (text.empty() || text.back() != '\n') f << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Ontology load(const std::string& path, bool strict) {
  if (path.empty()) return make_ontology({}, {});
  ParseOptions opts;
  opts.strict = strict;
  return load_ontology(path, opts);
}

Concept concept_arg(const std::string& text, const Ontology& o, bool strict) {
  ParseOptions opts;
  opts.strict = strict;
  opts.known_roles = &o.declared_roles;
  Concept c = parse_concept(text, opts);
  require_simple_counts(o, c);
  return c;
}

ProverLimits limits_of(const Common& c) {
  ProverLimits l = default_limits();
  if (c.max_steps) l.max_steps = c.max_steps;
  if (c.max_labels) l.max_labels = c.max_labels;
  return l;
}

void add_limits(CLI::App* cmd, Common& c) {
  cmd->add_option("--max-steps", c.max_steps, "Rule applications before giving up");
  cmd->add_option("--max-labels", c.max_labels, "Labels allowed on one branch");
}

int exit_of(Verdict v) {
  switch (v) {
    case Verdict::Proved: return kExitProved;
    case Verdict::Refuted: return kExitRefuted;
    case Verdict::Unknown: return kExitUnknown;
  }
  return kExitError;
}

std::string verdict_line(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "Proved";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Unknown: return "Unknown";
  }
  return "";
}

std::set<std::string> split_names(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.insert(item);
  }
  return out;
}

std::string join(const std::set<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

std::string render_word(const Word& w) {
  std::string out;
  for (const auto& r : w) out += (out.empty() ? "" : " ") + render(r);
  return out.empty() ? "(empty)" : out;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reasoning toolkit for the description logic RIQ", "riq"};
  app.require_subcommand(1);

  Common common;
  std::string sub, sup, goal_text, emit_proof, emit_model, proof_path, model_path;
  std::string o1_path, o2_path, emit_interp, concept_text, theta_text, emit_def, emit_proofs, sequent_text;
  std::size_t max_domain = 3;

  auto add_check = [&](const std::string& name, const std::string& help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    cmd->add_option("-o,--ontology", common.ontology, "Ontology file");
    cmd->add_option("--sub", sub, "Subsumee concept")->required();
    cmd->add_option("--sup", sup, "Subsumer concept")->required();
    cmd->add_option("--emit-proof", emit_proof, "Write the proof as JSON");
    cmd->add_option("--emit-model", emit_model, "Write the counter-model as JSON");
    cmd->add_flag("--strict", common.strict, "Require declared roles");
    add_limits(cmd, common);
    return cmd;
  };
  CLI::App* check = add_check("check", "Decide an ontology-mediated subsumption");
  CLI::App* prove_cmd = add_check("prove", "Like check, writing the proof (default proof.json)");

  CLI::App* verify = app.add_subcommand("verify", "Re-check an emitted proof or counter-model");
  verify->add_option("-o,--ontology", common.ontology, "Ontology file");
  verify->add_option("--proof", proof_path, "Proof JSON");
  verify->add_option("--model", model_path, "Counter-model JSON");
  verify->add_option("--goal", goal_text, "Subsumption \"C <= D\" the model should refute");

  CLI::App* model = app.add_subcommand("model", "Search for a bounded counter-model");
  model->add_option("-o,--ontology", common.ontology, "Ontology file");
  model->add_option("--goal", goal_text, "Subsumption \"C <= D\"")->required();
  model->add_option("--max-domain", max_domain, "Largest domain size")->check(CLI::Range(1, 6));
  model->add_option("--emit-model", emit_model, "Write the counter-model as JSON");

  CLI::App* interp = app.add_subcommand("interpolate", "Compute a concept interpolant");
  interp->add_option("--o1", o1_path, "First ontology");
  interp->add_option("--o2", o2_path, "Second ontology");
  interp->add_option("--sub", sub, "Subsumee concept")->required();
  interp->add_option("--sup", sup, "Subsumer concept")->required();
  interp->add_option("--emit-interp", emit_interp, "Write the interpolation sequents as JSON");
  add_limits(interp, common);

  CLI::App* define = app.add_subcommand("define", "Explicit definition of an implicitly definable concept");
  define->add_option("-o,--ontology", common.ontology, "Ontology file");
  define->add_option("--concept", concept_text, "Concept to define")->required();
  define->add_option("--theta", theta_text, "Comma-separated concept names allowed in the definition");
  define->add_option("--emit-def", emit_def, "Write the definition");
  define->add_option("--emit-proofs", emit_proofs, "Directory for the implicit-check and interpolation proofs");
  add_limits(define, common);

  CLI::App* info = app.add_subcommand("info", "Show roles, regularity, productions and reachability");
  info->add_option("-o,--ontology", common.ontology, "Ontology file")->required();
  info->add_option("--sequent", sequent_text, "Sequent whose propagation graph to print");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (check->parsed() || prove_cmd->parsed()) {
      if (prove_cmd->parsed() && emit_proof.empty()) emit_proof = "proof.json";
      Ontology o = load(common.ontology, common.strict);
      Concept c = concept_arg(sub, o, common.strict);
      Concept d = concept_arg(sup, o, common.strict);
      ProveResult r = subsumes(o, c, d, limits_of(common));
      out << verdict_line(r.verdict) << "\n";
      out << "steps: " << r.steps << "\n";
      if (r.proof) {
        out << "proof size: " << proof_size(*r.proof) << "\n";
        if (!emit_proof.empty()) write_file(emit_proof, render(*r.proof));
      }
      if (r.countermodel) {
        std::string json = model_to_json(r.countermodel->interpretation, &r.countermodel->assignment);
        out << json << "\n";
        if (!emit_model.empty()) write_file(emit_model, json);
      }
      if (r.verdict == Verdict::Unknown) out << "reason: " << r.reason << "\n";
      return exit_of(r.verdict);
    }

    if (verify->parsed()) {
      if (proof_path.empty() && model_path.empty()) throw Error("verify needs --proof or --model");
      Ontology o = load(common.ontology, false);
      bool ok = true;
      if (!proof_path.empty()) {
        ProofNode p = parse_proof(read_file(proof_path));
        ProofCheck pc = check_proof_detailed(o, p);
        out << "proof: " << (pc.ok ? "valid" : "invalid: " + pc.message) << "\n";
        ok = ok && pc.ok;
      }
      if (!model_path.empty()) {
        CounterModel cm = model_from_json(read_file(model_path));
        bool good = is_model(cm.interpretation, o);
        std::string why = good ? "" : "not a model of the ontology";
        if (good && !goal_text.empty()) {
          RawGCI g = parse_goal(goal_text);
          good = falsifies(cm.interpretation, cm.assignment, o, subsumption_goal(o, g.sub, g.sup));
          if (!good) why = "does not refute the goal";
        }
        out << "model: " << (good ? "valid" : "invalid: " + why) << "\n";
        ok = ok && good;
      }
      return ok ? 0 : kExitRefuted;
    }

    if (model->parsed()) {
      Ontology o = load(common.ontology, false);
      RawGCI g = parse_goal(goal_text);
      OracleOptions opts;
      opts.max_domain = max_domain;
      OracleResult r = find_countermodel_bounded(o, subsumption_goal(o, g.sub, g.sup), opts);
      if (r.model) {
        std::string json = model_to_json(r.model->interpretation, &r.model->assignment);
        out << json << "\n";
        if (!emit_model.empty()) write_file(emit_model, json);
        return kExitRefuted;
      }
      out << "none up to " << max_domain << (r.exhaustive ? "" : " (sampled)") << "\n";
      return kExitUnknown;
    }

    if (interp->parsed()) {
      Ontology o1 = load(o1_path, false);
      Ontology o2 = load(o2_path, false);
      Ontology both = ontology_union(o1, o2);
      Concept c = concept_arg(sub, both, false);
      Concept d = concept_arg(sup, both, false);
      ProverLimits limits = limits_of(common);
      InterpolationResult r = compute_concept_interpolant(o1, o2, c, d, limits);
      out << verdict_line(r.verdict) << "\n";
      if (!r.interpolant) {
        if (!r.message.empty()) out << "reason: " << r.message << "\n";
        return exit_of(r.verdict);
      }
      out << "interpolant: " << render(*r.interpolant) << "\n";
      out << "invariants: " << (r.invariants_ok ? "ok" : "violated: " + r.message) << "\n";
      InterpolantCheck v = verify_interpolant(o1, o2, c, d, *r.interpolant, limits);
      out << "verification: " << (v.ok() ? "ok" : "failed: " + v.message) << "\n";
      if (!emit_interp.empty()) write_file(emit_interp, interpolant_to_json(r.sequents, r.interpolant));
      return v.ok() && r.invariants_ok ? kExitProved : kExitError;
    }

    if (define->parsed()) {
      Ontology o = load(common.ontology, false);
      Concept c = concept_arg(concept_text, o, false);
      std::set<std::string> theta = split_names(theta_text);
      std::optional<DefinitionResult> found;
      try {
        found = explicit_definition(o, c, theta, limits_of(common));
      } catch (const Undecided&) {
        throw;
      } catch (const Error& e) {
        if (std::string(e.what()) != "not implicitly definable") throw;
        out << "Refuted\nnot implicitly definable\n";
        return kExitRefuted;
      }
      DefinitionResult& r = *found;
      out << "definition: " << render(r.definition) << "\n";
      out << "theta: {" << join(theta) << "}\n";
      out << "verification: " << (r.check.ok() ? "ok" : "failed: " + r.check.message) << "\n";
      if (!emit_def.empty()) write_file(emit_def, render(r.definition));
      if (!emit_proofs.empty()) {
        std::filesystem::create_directories(emit_proofs);
        if (r.implicit.proof) write_file(emit_proofs + "/implicit.json", render(*r.implicit.proof));
        if (r.interpolation.proof) write_file(emit_proofs + "/interpolation.json", render(*r.interpolation.proof));
      }
      return r.check.ok() ? kExitProved : kExitError;
    }

    if (info->parsed()) {
      Ontology o = load(common.ontology, false);
      Signature sig = signature_of(o);
      out << "concept names: " << join(sig.concepts) << "\n";
      out << "roles: " << join(sig.roles) << "\n";
      out << "simple roles: " << join(simple_roles(o.rbox, sig.roles)) << "\n";
      out << "regular: " << (o.regularity.regular ? "yes" : "no: " + o.regularity.message) << "\n";
      for (const auto& [a, b] : o.regularity.order) out << "  " << a << " < " << b << "\n";
      RSystem g = build_rsystem(o);
      out << "productions:\n";
      for (const auto& p : g.productions) out << "  " << render(p.lhs) << " -> " << render_word(p.rhs) << "\n";
      if (!sequent_text.empty()) {
        Sequent s = parse_sequent(sequent_text);
        Propagation prop = compute_propagation(g, s);
        out << "classes:\n";
        for (std::size_t i = 0; i < prop.graph.nodes.classes.size(); ++i) {
          out << "  [" << i << "]";
          for (Label x : prop.graph.nodes.classes[i]) out << " " << render(x);
          out << "\n";
        }
        out << "reach:\n";
        for (const auto& r : prop.reach.roles()) {
          for (const auto& [u, v] : prop.reach.pairs(r)) out << "  " << render(r) << ": " << u << " -> " << v << "\n";
        }
      }
      return 0;
    }
  } catch (const Undecided& e) {
    err << "riq: " << e.what() << "\n";
    return kExitUnknown;
  } catch (const std::exception& e) {
    err << "riq: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace riq
