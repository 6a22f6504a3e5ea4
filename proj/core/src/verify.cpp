#include "gca/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include "gca/error.hpp"
#include "gca/fo.hpp"

namespace gca {

namespace {

constexpr size_t kWitnessConfigCap = 16;
constexpr size_t kProbeWitnessCap = 8;

MsoFormula matrix_of(MsoFormula f) {
  while (f->op == Op::Forall || f->op == Op::Exists) f = f->kids[0];
  return f;
}

/// good_i with y_1..y_{i-1} existentially closed; y_i stays free.  The
/// chain/step atoms of each seq pin every reopened variable to a successor
/// walk from y_i, so evaluating the closure for a fixed y_i is cheap.
FoFormula good_closure(const FoFormula& good_i, int i) {
  FoFormula f = good_i;
  for (int j = 1; j < i; ++j) f = make_exists("y" + std::to_string(j), f);
  return f;
}

void run_indexed(int count, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex emu;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(emu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

void fill_shape(InstanceResult& r, int index, const LabeledGraph& g) {
  r.index = index;
  r.vertices = g.vertex_count();
  r.edges = g.edge_count();
  r.connected = is_connected(g);
}

std::string config_to_names(const GlobalMap& map, int num_states,
                            uint64_t index) {
  std::vector<int> states(map.graph().vertex_count());
  decode_config(index, num_states, states);
  return map.format_states(states);
}

/// Rebuilds the matrix assignment from a decoded configuration.  `ok` drops
/// when some first-order component does not pick exactly one vertex.
struct DecodedAlpha {
  bool ok = true;
  MsoAssignment alpha;
};

DecodedAlpha decode_alpha(const LayeredStateSpace& space,
                          const std::vector<int>& states) {
  DecodedAlpha out;
  for (int b = 1; b <= space.block_count(); ++b) {
    const QuantBlock& block = space.blocks()[b - 1];
    for (int comp = 1; comp <= static_cast<int>(block.vars.size()); ++comp) {
      const std::string& var = block.vars[comp - 1];
      if (block.first_order) {
        int chosen = -1, hits = 0;
        for (size_t v = 0; v < states.size(); ++v)
          if (space.variable_value(states[v], b, comp) == 1) {
            chosen = static_cast<int>(v);
            ++hits;
          }
        if (hits != 1) {
          out.ok = false;
          return out;
        }
        out.alpha.vertex[var] = chosen;
      } else {
        uint64_t mask = 0;
        for (size_t v = 0; v < states.size(); ++v)
          if (space.variable_value(states[v], b, comp) == 1)
            mask |= uint64_t{1} << v;
        out.alpha.vertex_set[var] = mask;
      }
    }
  }
  return out;
}

struct MsoInstanceOutcome {
  InstanceResult result;
  std::vector<Json> witnesses;
};

MsoInstanceOutcome run_mso_instance(int index, const LabeledGraph& g,
                                    const MsoFormula& psi,
                                    const MsoToFocaResult& tr,
                                    const MsoFormula& matrix,
                                    const VerifyOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  MsoInstanceOutcome out;
  InstanceResult& r = out.result;
  fill_shape(r, index, g);

  r.direct = mso_check(g, psi);
  GlobalMap map(g, tr.rule);
  auto table = TransitionTable::build(map, opt.config_budget, 1,
                                      opt.cache_dir);
  r.configs = table.size();
  r.translated = fo_check(table, tr.phi);
  r.agree = r.direct == r.translated;

  const auto& space = tr.space;
  int n = space.block_count();
  int num_states = map.num_states();

  // Configurations admissible as y_n, gathered either by the probes or
  // lazily for a disagreement witness.
  std::vector<uint64_t> last_good;
  auto scan_good = [&](int i, size_t cap,
                       const std::function<void(uint64_t)>& hit) {
    FoFormula cl = good_closure(tr.good[i - 1], i);
    std::string yi = "y" + std::to_string(i);
    size_t found = 0;
    for (uint64_t c = 0; c < table.size() && found < cap; ++c) {
      FoAssignment beta;
      beta.config[yi] = c;
      if (!fo_check(table, cl, beta)) continue;
      ++found;
      hit(c);
    }
  };

  if (opt.lemma_probes) {
    for (int i = 1; i <= n; ++i) {
      bool fo = space.first_order_block(i);
      int comps = space.block_size(i);
      int li = space.lambda(i);
      scan_good(i, table.size(), [&](uint64_t c) {
        ++r.good_checked;
        std::vector<int> states(g.vertex_count());
        decode_config(c, num_states, states);
        bool uniform = true;
        for (int s : states) {
          const auto& in = space.info(s);
          if (in.kind != LayeredStateSpace::StateKind::Layer ||
              in.type != li)
            uniform = false;
        }
        bool one_hot = true;
        if (fo)
          for (int comp = 1; comp <= comps; ++comp) {
            int hits = 0;
            for (int s : states)
              if (space.variable_value(s, i, comp) == 1) ++hits;
            if (hits != 1) one_hot = false;
          }
        if (!uniform || !one_hot) {
          ++r.good_violations;
          if (out.witnesses.size() < kProbeWitnessCap) {
            Json w;
            w["kind"] = "good-probe";
            w["graph_index"] = index;
            w["block"] = i;
            w["configuration"] = map.format_states(states);
            w["uniform_type"] = uniform;
            w["one_chosen_vertex"] = one_hot;
            out.witnesses.push_back(std::move(w));
          }
        }
        if (i == n) last_good.push_back(c);
      });
    }

    std::string yn = "y" + std::to_string(n);
    for (uint64_t c : last_good) {
      std::vector<int> states(g.vertex_count());
      decode_config(c, num_states, states);
      auto dec = decode_alpha(space, states);
      if (!dec.ok) continue;  // counted by the good probe already
      ++r.truth_checked;
      FoAssignment beta;
      beta.config[yn] = c;
      bool via_rule = fo_check(table, tr.truth, beta);
      bool via_matrix = mso_check(g, matrix, dec.alpha);
      if (via_rule != via_matrix) {
        ++r.truth_violations;
        if (out.witnesses.size() < kProbeWitnessCap) {
          Json w;
          w["kind"] = "truth-probe";
          w["graph_index"] = index;
          w["configuration"] = map.format_states(states);
          w["truth"] = via_rule;
          w["matrix"] = via_matrix;
          out.witnesses.push_back(std::move(w));
        }
      }
    }
  }

  if (!r.agree) {
    Json w;
    w["kind"] = "disagreement";
    w["graph_index"] = index;
    w["formula"] = to_string(psi);
    w["companion"] = to_string(tr.phi);
    w["direct"] = r.direct;
    w["translated"] = r.translated;
    w["graph"] = g.to_json();
    Json certs = Json::array();
    if (opt.lemma_probes) {
      for (size_t k = 0; k < last_good.size() && k < kWitnessConfigCap; ++k)
        certs.push_back(config_to_names(map, num_states, last_good[k]));
    } else {
      scan_good(n, kWitnessConfigCap, [&](uint64_t c) {
        certs.push_back(config_to_names(map, num_states, c));
      });
    }
    w["good_configurations"] = std::move(certs);
    out.witnesses.push_back(std::move(w));
  }

  r.millis = std::chrono::duration<double, std::milli>(
                 std::chrono::steady_clock::now() - t0)
                 .count();
  return out;
}

}  // namespace

Json TranslationReport::to_json(bool timings) const {
  Json j;
  j["direction"] = direction;
  if (!variant.empty()) j["variant"] = variant;
  j["formula"] = formula;
  j["translated"] = translated;
  if (!rule.is_null()) j["rule"] = rule;
  j["states"] = states;
  j["agreed"] = agreed;
  j["disagreed"] = disagreed;
  j["probe_violations"] = probe_violations;
  Json arr = Json::array();
  for (const auto& r : instances) {
    Json e;
    e["index"] = r.index;
    e["vertices"] = r.vertices;
    e["edges"] = r.edges;
    e["connected"] = r.connected;
    e["direct"] = r.direct;
    e["translated"] = r.translated;
    e["agree"] = r.agree;
    e["configs"] = r.configs;
    if (direction == "mso-to-foca") {
      e["good_checked"] = r.good_checked;
      e["good_violations"] = r.good_violations;
      e["truth_checked"] = r.truth_checked;
      e["truth_violations"] = r.truth_violations;
    }
    if (timings) e["millis"] = r.millis;
    arr.push_back(std::move(e));
  }
  j["instances"] = std::move(arr);
  j["witnesses"] = witnesses;
  return j;
}

TranslationReport verify_mso(const MsoFormula& psi,
                             const std::vector<LabeledGraph>& corpus,
                             const VerifyOptions& opt) {
  MsoToFocaResult tr = opt.connected_variant
                           ? mso_to_foca_connected(psi, opt.state_budget)
                           : mso_to_foca(psi, opt.state_budget);
  MsoFormula matrix = matrix_of(tr.prenexed);

  TranslationReport rep;
  rep.direction = "mso-to-foca";
  rep.variant = opt.connected_variant ? "connected" : "general";
  rep.formula = to_string(psi);
  rep.translated = to_string(tr.phi);
  rep.states = tr.rule->states().size();
  rep.instances.resize(corpus.size());

  std::vector<std::vector<Json>> witness_slots(corpus.size());
  run_indexed(static_cast<int>(corpus.size()), opt.jobs, [&](int i) {
    auto out = run_mso_instance(i, corpus[i], psi, tr, matrix, opt);
    rep.instances[i] = out.result;
    witness_slots[i] = std::move(out.witnesses);
  });

  for (auto& slot : witness_slots)
    for (auto& w : slot) rep.witnesses.push_back(std::move(w));
  for (const auto& r : rep.instances) {
    (r.agree ? rep.agreed : rep.disagreed)++;
    rep.probe_violations += r.good_violations + r.truth_violations;
  }
  return rep;
}

TranslationReport verify_fo(const FoFormula& phi, const RulePtr& f,
                            const std::vector<LabeledGraph>& corpus,
                            const VerifyOptions& opt) {
  TranslationReport rep;
  rep.direction = "foca-to-mso";
  rep.formula = to_string(phi);
  rep.rule = f->to_json();
  rep.states = f->states().size();
  rep.instances.resize(corpus.size());

  // One image formula per distinct alphabet (pinned rules resolve their
  // own; generic rules read the graph's).  Corpora are homogeneous, so
  // this map almost always has a single entry.
  std::map<std::string, MsoFormula> images;
  auto image_for = [&](const LabeledGraph& g) -> const MsoFormula& {
    std::string key;
    for (const auto& s : g.sigma()) key += s + ",";
    key += "|";
    for (const auto& d : g.delta()) key += d + ",";
    auto it = images.find(key);
    if (it == images.end())
      it = images
               .emplace(key, foca_to_mso(phi, f, g.sigma(), g.delta(),
                                         opt.multiset_budget))
               .first;
    return it->second;
  };
  for (const auto& g : corpus) image_for(g);
  if (!images.empty()) rep.translated = to_string(images.begin()->second);

  std::vector<std::vector<Json>> witness_slots(corpus.size());
  run_indexed(static_cast<int>(corpus.size()), opt.jobs, [&](int i) {
    auto t0 = std::chrono::steady_clock::now();
    const LabeledGraph& g = corpus[i];
    InstanceResult r;
    fill_shape(r, i, g);
    GlobalMap map(g, f);
    auto table = TransitionTable::build(map, opt.config_budget, 1,
                                        opt.cache_dir);
    r.configs = table.size();
    r.direct = fo_check(table, phi);
    r.translated = mso_check(g, image_for(g));
    r.agree = r.direct == r.translated;
    if (!r.agree) {
      Json w;
      w["kind"] = "disagreement";
      w["graph_index"] = i;
      w["formula"] = to_string(phi);
      w["image"] = to_string(image_for(g));
      w["direct"] = r.direct;
      w["translated"] = r.translated;
      w["graph"] = g.to_json();
      Json orbit = Json::array();
      for (uint64_t c = 0; c < table.size() && c < 64; ++c) {
        Json step;
        step["config"] = config_to_names(map, map.num_states(), c);
        step["next"] =
            config_to_names(map, map.num_states(), table.successor(c));
        orbit.push_back(std::move(step));
      }
      w["orbit"] = std::move(orbit);
      witness_slots[i].push_back(std::move(w));
    }
    r.millis = std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
    rep.instances[i] = r;
  });

  for (auto& slot : witness_slots)
    for (auto& w : slot) rep.witnesses.push_back(std::move(w));
  for (const auto& r : rep.instances) (r.agree ? rep.agreed : rep.disagreed)++;
  return rep;
}

CounterexampleProbe find_connectivity_counterexample(
    const std::vector<std::string>& sentences,
    const std::vector<LabeledGraph>& graphs, const VerifyOptions& opt) {
  CounterexampleProbe out;
  for (const auto& text : sentences) {
    MsoFormula psi = parse_mso(text);
    MsoToFocaResult con = mso_to_foca_connected(psi, opt.state_budget);
    MsoToFocaResult gen = mso_to_foca(psi, opt.state_budget);
    for (size_t gi = 0; gi < graphs.size(); ++gi) {
      const LabeledGraph& g = graphs[gi];
      if (is_connected(g)) continue;
      bool want = mso_check(g, psi);
      GlobalMap mc(g, con.rule);
      auto tc = TransitionTable::build(mc, opt.config_budget, 1,
                                       opt.cache_dir);
      if (fo_check(tc, con.phi) == want) continue;
      GlobalMap mg(g, gen.rule);
      auto tg = TransitionTable::build(mg, opt.config_budget, 1,
                                       opt.cache_dir);
      if (fo_check(tg, gen.phi) != want) continue;
      out.found = true;
      out.sentence = text;
      out.graph_index = static_cast<int>(gi);
      Json w;
      w["sentence"] = text;
      w["graph_index"] = static_cast<int>(gi);
      w["graph"] = g.to_json();
      w["direct"] = want;
      w["connected_variant"] = !want;
      w["general_variant"] = want;
      out.witness = std::move(w);
      return out;
    }
  }
  return out;
}

}  // namespace gca
