#include "gca/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gca/domino.hpp"
#include "gca/error.hpp"
#include "gca/fo.hpp"
#include "gca/local_rule.hpp"
#include "gca/mso.hpp"
#include "gca/verify.hpp"

namespace gca {

namespace {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return Json::parse(buf.str());
}

LabeledGraph load_graph(const std::string& path) {
  return LabeledGraph::from_json(read_json_file(path));
}

// A rule argument is a JSON file when it looks like a path, a builtin name
// otherwise ("coloring:2", "life_plain", ...).
RulePtr load_rule(const std::string& spec) {
  if (spec.find('/') != std::string::npos ||
      (spec.size() > 5 && spec.compare(spec.size() - 5, 5, ".json") == 0) ||
      std::filesystem::exists(spec))
    return rule_from_json(read_json_file(spec));
  return rule_from_name(spec);
}

std::string formula_text(const RunConfig& cfg) {
  if (!cfg.formula_file.empty()) {
    std::ifstream in(cfg.formula_file);
    if (!in) throw IoError("cannot read " + cfg.formula_file);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string s = buf.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
  }
  if (cfg.formula.empty())
    throw ValidationError("a formula is required (--formula/--formula-file)");
  return cfg.formula;
}

Json base_doc(const std::string& command) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

void emit(const RunConfig& cfg, std::ostream& out, const Json& doc) {
  std::string text = doc.dump(2) + "\n";
  if (!cfg.out_path.empty()) {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) throw IoError("cannot write " + cfg.out_path);
    f << text;
  } else {
    out << text;
  }
}

std::vector<int> parse_sides(const std::string& text) {
  std::vector<int> sides;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || v <= 0)
      throw ValidationError("--sides wants positive integers, got \"" + item +
                            "\"");
    sides.push_back(v);
  }
  if (sides.empty()) throw ValidationError("--sides must not be empty");
  return sides;
}

std::vector<int> parse_domino_config(const LabeledGraph& g,
                                     const DominoSpec& d,
                                     const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t a = item.find_first_not_of(" \t");
    size_t b = item.find_last_not_of(" \t");
    out.push_back(d.state_index(
        a == std::string::npos ? std::string() : item.substr(a, b - a + 1)));
  }
  if (static_cast<int>(out.size()) != g.vertex_count())
    throw ValidationError("configuration lists " +
                          std::to_string(out.size()) + " states for " +
                          std::to_string(g.vertex_count()) + " vertices");
  return out;
}

std::string domino_config_names(const DominoSpec& d,
                                const std::vector<int>& states) {
  std::string out;
  for (size_t i = 0; i < states.size(); ++i) {
    if (i) out += ",";
    out += d.states[states[i]];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subcommand handlers.  Each returns the process exit code.

int do_mso_check(const RunConfig& cfg, std::ostream& out) {
  LabeledGraph g = load_graph(cfg.graph_path);
  MsoFormula f = parse_mso(formula_text(cfg));
  Json j = base_doc("mso-check");
  j["result"] = mso_check(g, f);
  emit(cfg, out, j);
  return 0;
}

int do_fo_check(const RunConfig& cfg, std::ostream& out) {
  LabeledGraph g = load_graph(cfg.graph_path);
  RulePtr rule = load_rule(cfg.rule_spec);
  FoFormula phi = parse_fo(formula_text(cfg));
  GlobalMap map(g, rule);
  auto table =
      TransitionTable::build(map, cfg.budget_configs, 1, cfg.cache_dir);
  Json j = base_doc("fo-check");
  j["result"] = fo_check(table, phi);
  j["states"] = rule->states().size();
  j["configs"] = table.size();
  emit(cfg, out, j);
  return 0;
}

int do_simulate(const RunConfig& cfg, std::ostream& out) {
  LabeledGraph g = load_graph(cfg.graph_path);
  GlobalMap map(g, load_rule(cfg.rule_spec));
  std::vector<int> states = map.parse_states(cfg.config_text);
  Json traj = Json::array();
  traj.push_back(map.format_states(states));
  for (uint64_t i = 0; i < cfg.steps; ++i) {
    states = map.apply(states);
    traj.push_back(map.format_states(states));
  }
  Json j = base_doc("simulate");
  j["steps"] = cfg.steps;
  j["trajectory"] = std::move(traj);
  emit(cfg, out, j);
  return 0;
}

int do_orbit(const RunConfig& cfg, std::ostream& out) {
  LabeledGraph g = load_graph(cfg.graph_path);
  GlobalMap map(g, load_rule(cfg.rule_spec));
  std::vector<int> states = map.parse_states(cfg.config_text);
  OrbitResult res = orbit(map, states, cfg.max_steps);
  Json j = base_doc("orbit");
  j["conclusive"] = res.conclusive;
  if (res.conclusive) {
    j["transient"] = res.transient;
    j["period"] = res.period;
    constexpr size_t cap = 256;
    Json seq = Json::array();
    std::vector<int> buf(g.vertex_count());
    for (size_t i = 0; i < res.sequence.size() && i < cap; ++i) {
      decode_config(res.sequence[i], map.num_states(), buf);
      seq.push_back(map.format_states(buf));
    }
    j["sequence"] = std::move(seq);
    j["sequence_truncated"] = res.sequence.size() > cap;
  }
  emit(cfg, out, j);
  return 0;
}

int do_translate_to_mso(const RunConfig& cfg, std::ostream& out) {
  RulePtr rule = load_rule(cfg.rule_spec);
  FoFormula phi = parse_fo(formula_text(cfg));
  FoFormula expanded = expand_counting(phi);
  std::vector<std::string> sigma, delta;
  if (!cfg.graph_path.empty()) {
    LabeledGraph g = load_graph(cfg.graph_path);
    sigma = g.sigma();
    delta = g.delta();
  }
  MsoFormula tau =
      foca_to_mso(expanded, rule, sigma, delta, cfg.budget_multisets);
  Json j = base_doc("translate foca-to-mso");
  j["fo"] = to_string(phi);
  j["expanded"] = to_string(expanded);
  j["mso"] = to_string(tau);
  emit(cfg, out, j);
  return 0;
}

int do_translate_to_foca(const RunConfig& cfg, std::ostream& out) {
  MsoFormula psi = parse_mso(formula_text(cfg));
  MsoToFocaResult r = cfg.connected
                          ? mso_to_foca_connected(psi, cfg.budget_states)
                          : mso_to_foca(psi, cfg.budget_states);
  Json j = base_doc("translate mso-to-foca");
  j["variant"] = cfg.connected ? "connected" : "general";
  j["mso"] = to_string(psi);
  j["fo"] = to_string(r.phi);
  j["states"] = r.rule->states().size();
  Json goods = Json::array();
  for (const auto& gi : r.good) goods.push_back(to_string(gi));
  j["good"] = std::move(goods);
  j["truth"] = to_string(r.truth);
  j["rule"] = r.rule->to_json();
  emit(cfg, out, j);
  return 0;
}

int do_verify(const RunConfig& cfg, std::ostream& out) {
  Corpus corpus = load_corpus(cfg.corpus_name, cfg.seed);
  if (corpus.kind != CorpusKind::Graphs)
    throw ValidationError("corpus " + cfg.corpus_name +
                          " does not hold graphs");
  VerifyOptions opt;
  opt.connected_variant = cfg.mode == "connected";
  opt.state_budget = cfg.budget_states;
  opt.config_budget = cfg.budget_configs;
  opt.multiset_budget = cfg.budget_multisets;
  opt.jobs = cfg.jobs;
  opt.timings = !cfg.no_timings;
  opt.cache_dir = cfg.cache_dir;

  TranslationReport rep;
  if (!cfg.fo_formula.empty()) {
    if (cfg.rule_spec.empty())
      throw ValidationError("verify --fo needs --rule");
    rep = verify_fo(parse_fo(cfg.fo_formula), load_rule(cfg.rule_spec),
                    corpus.graphs, opt);
  } else if (!cfg.formula.empty()) {
    rep = verify_mso(parse_mso(cfg.formula), corpus.graphs, opt);
  } else {
    throw ValidationError("verify needs --mso or --fo");
  }

  Json j = base_doc("verify");
  j["corpus"] = cfg.corpus_name;
  Json body = rep.to_json(opt.timings);
  for (auto& [key, value] : body.items()) j[key] = std::move(value);
  emit(cfg, out, j);
  return rep.disagreed > 0 || rep.probe_violations > 0 ? 1 : 0;
}

int do_domino_check(const RunConfig& cfg, std::ostream& out) {
  LabeledGraph g = load_graph(cfg.graph_path);
  DominoSpec d = DominoSpec::from_json(read_json_file(cfg.domino_path));
  std::vector<int> states = parse_domino_config(g, d, cfg.config_text);
  Json j = base_doc("domino check");
  j["valid"] = is_valid(g, d, states);
  emit(cfg, out, j);
  return 0;
}

int do_domino_solve(const RunConfig& cfg, std::ostream& out) {
  LabeledGraph g = load_graph(cfg.graph_path);
  DominoSpec d = DominoSpec::from_json(read_json_file(cfg.domino_path));
  auto found = solve_domino(g, d, cfg.require_s0);
  Json j = base_doc("domino solve");
  j["found"] = found.has_value();
  if (found) j["config"] = domino_config_names(d, *found);
  emit(cfg, out, j);
  return 0;
}

int do_domino_to_rule(const RunConfig& cfg, std::ostream& out) {
  DominoSpec d = DominoSpec::from_json(read_json_file(cfg.domino_path));
  Json j = base_doc("domino to-rule");
  j["rule"] = domino_to_rule(d)->to_json();
  emit(cfg, out, j);
  return 0;
}

int do_domino_from_rule(const RunConfig& cfg, std::ostream& out) {
  RulePtr rule = load_rule(cfg.rule_spec);
  std::vector<int> sides = parse_sides(cfg.sides);
  DominoSpec d = rule_to_domino(rule, sides);
  Json j = base_doc("domino from-rule");
  j["sides"] = sides;
  j["domino"] = d.to_json();
  emit(cfg, out, j);
  return 0;
}

int do_domino_seeded(const RunConfig& cfg, std::ostream& out) {
  DominoSpec d = DominoSpec::from_json(read_json_file(cfg.domino_path));
  std::string s0 = cfg.s0;
  if (s0.empty()) {
    if (!d.s0) throw ValidationError("no seed state: pass --s0 or put \"s0\" in the spec");
    s0 = d.states[*d.s0];
  } else {
    d.s0 = d.state_index(s0);
  }
  Json j = base_doc("domino seeded");
  j["s0"] = s0;
  j["rule"] = seeded_rule(d, s0)->to_json();
  if (!cfg.graph_path.empty()) {
    LabeledGraph g = load_graph(cfg.graph_path);
    auto found = solve_domino(g, d, true);
    j["found"] = found.has_value();
    if (found) j["config"] = domino_config_names(d, *found);
  }
  emit(cfg, out, j);
  return 0;
}

int do_corpus_list(const RunConfig& cfg, std::ostream& out) {
  Json arr = Json::array();
  for (const auto& info : builtin_corpora()) {
    Json e;
    e["name"] = info.name;
    e["kind"] = info.kind == CorpusKind::Graphs     ? "graphs"
                : info.kind == CorpusKind::Formulas ? "formulas"
                                                    : "rules";
    e["size"] = info.size;
    e["summary"] = info.summary;
    arr.push_back(std::move(e));
  }
  Json j = base_doc("corpus list");
  j["corpora"] = std::move(arr);
  emit(cfg, out, j);
  return 0;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  if (cfg.subcommand == "mso-check") return do_mso_check(cfg, out);
  if (cfg.subcommand == "fo-check") return do_fo_check(cfg, out);
  if (cfg.subcommand == "simulate") return do_simulate(cfg, out);
  if (cfg.subcommand == "orbit") return do_orbit(cfg, out);
  if (cfg.subcommand == "translate foca-to-mso")
    return do_translate_to_mso(cfg, out);
  if (cfg.subcommand == "translate mso-to-foca")
    return do_translate_to_foca(cfg, out);
  if (cfg.subcommand == "verify") return do_verify(cfg, out);
  if (cfg.subcommand == "domino check") return do_domino_check(cfg, out);
  if (cfg.subcommand == "domino solve") return do_domino_solve(cfg, out);
  if (cfg.subcommand == "domino to-rule") return do_domino_to_rule(cfg, out);
  if (cfg.subcommand == "domino from-rule")
    return do_domino_from_rule(cfg, out);
  if (cfg.subcommand == "domino seeded") return do_domino_seeded(cfg, out);
  if (cfg.subcommand == "corpus list") return do_corpus_list(cfg, out);
  throw ValidationError("no subcommand given");
}

int fail(std::ostream& out, std::ostream& err, const std::string& code,
         const std::string& message) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["error"] = {{"code", code}, {"message", message}};
  out << j.dump(2) << "\n";
  err << "error (" << code << "): " << message << "\n";
  return 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv(kCacheDirEnv)) cfg.cache_dir = env;

  CLI::App app{"cellular automata on labeled graphs", "gca"};
  app.require_subcommand(0, 1);

  auto positive = CLI::PositiveNumber;
  auto name_cmd = [&cfg](CLI::App* sub, const std::string& name) {
    sub->callback([&cfg, name] { cfg.subcommand = name; });
  };
  auto add_formula = [&](CLI::App* sub) {
    auto* opt = sub->add_option("--formula", cfg.formula, "formula text");
    sub->add_option("--formula-file", cfg.formula_file,
                    "file holding the formula")
        ->excludes(opt);
  };
  auto add_cache = [&](CLI::App* sub) {
    sub->add_option("--cache-dir", cfg.cache_dir,
                    "transition-table cache directory (default "
                    "$GCA_CACHE_DIR)");
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_path, "write the JSON result here");
  };
  auto add_config_budget = [&](CLI::App* sub) {
    sub->add_option("--budget-configs", cfg.budget_configs,
                    "largest materialized configuration space")
        ->check(positive);
  };

  auto* mso = app.add_subcommand("mso-check",
                                 "model-check an MSO sentence on a graph");
  mso->add_option("--graph", cfg.graph_path, "graph JSON file")->required();
  add_formula(mso);
  add_out(mso);
  name_cmd(mso, "mso-check");

  auto* foc = app.add_subcommand(
      "fo-check", "model-check an orbit formula for a rule on a graph");
  foc->add_option("--graph", cfg.graph_path, "graph JSON file")->required();
  foc->add_option("--rule", cfg.rule_spec, "rule JSON file or builtin name")
      ->required();
  add_formula(foc);
  add_config_budget(foc);
  add_cache(foc);
  add_out(foc);
  name_cmd(foc, "fo-check");

  auto* sim = app.add_subcommand("simulate", "advance a configuration");
  sim->add_option("--graph", cfg.graph_path, "graph JSON file")->required();
  sim->add_option("--rule", cfg.rule_spec, "rule JSON file or builtin name")
      ->required();
  sim->add_option("--config", cfg.config_text,
                  "initial configuration \"s0,s1,...\"")
      ->required();
  sim->add_option("--steps", cfg.steps, "number of steps")->required();
  add_out(sim);
  name_cmd(sim, "simulate");

  auto* orb = app.add_subcommand(
      "orbit", "transient and period of a configuration's orbit");
  orb->add_option("--graph", cfg.graph_path, "graph JSON file")->required();
  orb->add_option("--rule", cfg.rule_spec, "rule JSON file or builtin name")
      ->required();
  orb->add_option("--config", cfg.config_text,
                  "initial configuration \"s0,s1,...\"")
      ->required();
  orb->add_option("--max-steps", cfg.max_steps,
                  "give up if the orbit stays open this long")
      ->check(positive);
  add_out(orb);
  name_cmd(orb, "orbit");

  auto* tr = app.add_subcommand("translate",
                                "move between orbit and graph logic");
  tr->require_subcommand(1);
  auto* t2m = tr->add_subcommand(
      "foca-to-mso", "orbit formula + rule -> graph sentence (counting "
                     "atoms are expanded first)");
  t2m->add_option("--rule", cfg.rule_spec, "rule JSON file or builtin name")
      ->required();
  add_formula(t2m);
  t2m->add_option("--graph", cfg.graph_path,
                  "graph supplying alphabets for generic rules");
  t2m->add_option("--budget-multisets", cfg.budget_multisets,
                  "largest pattern domain enumerated")
      ->check(positive);
  add_out(t2m);
  name_cmd(t2m, "translate foca-to-mso");

  auto* t2f = tr->add_subcommand("mso-to-foca",
                                 "graph sentence -> rule + orbit formula");
  add_formula(t2f);
  t2f->add_flag("--connected", cfg.connected,
                "use the connected-graph construction");
  t2f->add_option("--budget-states", cfg.budget_states,
                  "largest translated alphabet")
      ->check(positive);
  add_out(t2f);
  name_cmd(t2f, "translate mso-to-foca");

  auto* ver = app.add_subcommand(
      "verify", "compare a formula against its translation over a corpus");
  auto* vmso = ver->add_option("--mso", cfg.formula, "MSO sentence text");
  ver->add_option("--fo", cfg.fo_formula, "orbit formula text")
      ->excludes(vmso);
  ver->add_option("--rule", cfg.rule_spec,
                  "rule JSON file or builtin name (with --fo)");
  ver->add_option("--corpus", cfg.corpus_name,
                  "builtin:<name> or corpus JSON file")
      ->required();
  ver->add_option("--mode", cfg.mode, "mso-to-foca variant")
      ->check(CLI::IsMember({"general", "connected"}));
  ver->add_option("--jobs", cfg.jobs, "corpus-level worker count")
      ->check(positive);
  ver->add_option("--budget-states", cfg.budget_states,
                  "largest translated alphabet")
      ->check(positive);
  add_config_budget(ver);
  ver->add_option("--budget-multisets", cfg.budget_multisets,
                  "largest pattern domain enumerated")
      ->check(positive);
  ver->add_flag("--no-timings", cfg.no_timings,
                "omit wall-clock fields for byte-identical reports");
  ver->add_option("--seed", cfg.seed, "seed for sampled corpora");
  add_cache(ver);
  add_out(ver);
  name_cmd(ver, "verify");

  auto* dom = app.add_subcommand("domino", "domino problems and reductions");
  dom->require_subcommand(1);
  auto* dch = dom->add_subcommand("check",
                                  "validate a configuration against a spec");
  dch->add_option("--graph", cfg.graph_path, "graph JSON file")->required();
  dch->add_option("--domino", cfg.domino_path, "domino spec JSON file")
      ->required();
  dch->add_option("--config", cfg.config_text,
                  "configuration \"s0,s1,...\"")
      ->required();
  add_out(dch);
  name_cmd(dch, "domino check");

  auto* dso = dom->add_subcommand("solve", "search for a valid configuration");
  dso->add_option("--graph", cfg.graph_path, "graph JSON file")->required();
  dso->add_option("--domino", cfg.domino_path, "domino spec JSON file")
      ->required();
  dso->add_flag("--require-s0", cfg.require_s0,
                "only accept configurations containing the seed state");
  add_out(dso);
  name_cmd(dso, "domino solve");

  auto* dtr = dom->add_subcommand(
      "to-rule", "rule whose fixed points are the valid configurations");
  dtr->add_option("--domino", cfg.domino_path, "domino spec JSON file")
      ->required();
  add_out(dtr);
  name_cmd(dtr, "domino to-rule");

  auto* dfr = dom->add_subcommand(
      "from-rule", "higher-block spec of a rule on a torus");
  dfr->add_option("--rule", cfg.rule_spec, "rule JSON file or builtin name")
      ->required();
  dfr->add_option("--sides", cfg.sides, "torus sides, e.g. \"4\" or \"4,4\"")
      ->required();
  add_out(dfr);
  name_cmd(dfr, "domino from-rule");

  auto* dse = dom->add_subcommand(
      "seeded", "seeded rule for a spec; solves when a graph is given");
  dse->add_option("--domino", cfg.domino_path, "domino spec JSON file")
      ->required();
  dse->add_option("--s0", cfg.s0, "seed state (falls back to the spec)");
  dse->add_option("--graph", cfg.graph_path,
                  "also solve the seeded instance on this graph");
  add_out(dse);
  name_cmd(dse, "domino seeded");

  auto* cor = app.add_subcommand("corpus", "inspect instance corpora");
  cor->require_subcommand(1);
  auto* clist = cor->add_subcommand("list", "names, kinds and sizes");
  add_out(clist);
  name_cmd(clist, "corpus list");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return fail(out, err, "usage", e.what());
  }

  try {
    return dispatch(cfg, out);
  } catch (const BudgetError& e) {
    return fail(out, err, "budget-exceeded", e.what());
  } catch (const ParseError& e) {
    return fail(out, err, "parse-error", e.what());
  } catch (const IoError& e) {
    return fail(out, err, "unreadable-input", e.what());
  } catch (const Json::parse_error& e) {
    return fail(out, err, "malformed-json", e.what());
  } catch (const Json::exception& e) {
    return fail(out, err, "invalid-input", e.what());
  } catch (const ValidationError& e) {
    std::string code = std::string(e.what()).find("unknown corpus") !=
                               std::string::npos
                           ? "unknown-corpus"
                           : "invalid-input";
    return fail(out, err, code, e.what());
  } catch (const Error& e) {
    return fail(out, err, "invalid-input", e.what());
  }
}

}  // namespace gca
