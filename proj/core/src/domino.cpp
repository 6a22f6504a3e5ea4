#include "gca/domino.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "gca/config_space.hpp"
#include "gca/error.hpp"
#include "gca/graph_gen.hpp"

namespace gca {
namespace {

// Pattern-domain guard for the higher-block recodings.
constexpr uint64_t kMaxBallPatterns = 1u << 20;
constexpr uint64_t kMaxRecodedPairs = 10'000'000;

bool pair_in(const std::vector<std::pair<int, int>>& pairs, int a, int b) {
  return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(a, b));
}

}  // namespace

int DominoSpec::state_index(const std::string& name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end())
    throw ValidationError("domino spec has no state named \"" + name + "\"");
  return static_cast<int>(it - states.begin());
}

bool DominoSpec::pair_allowed(const std::string& label, int a, int b) const {
  auto it = pairs.find(label);
  if (it == pairs.end()) return true;  // unconstrained label
  return pair_in(it->second, a, b);
}

DominoSpec DominoSpec::from_json(const Json& j) {
  DominoSpec d;
  if (!j.is_object() || !j.contains("states") || !j["states"].is_array())
    throw ValidationError("domino JSON needs a \"states\" array");
  for (const auto& s : j["states"]) {
    if (!s.is_string())
      throw ValidationError("domino JSON states must be strings");
    d.states.push_back(s.get<std::string>());
  }
  for (size_t i = 0; i < d.states.size(); ++i)
    for (size_t k = i + 1; k < d.states.size(); ++k)
      if (d.states[i] == d.states[k])
        throw ValidationError("duplicate domino state \"" + d.states[i] +
                              "\"");
  const Json pairs = j.value("pairs", Json::object());
  for (const auto& [label, list] : pairs.items()) {
    std::vector<std::pair<int, int>> ps;
    if (!list.is_array())
      throw ValidationError("domino pairs for \"" + label +
                            "\" must be an array");
    for (const auto& pr : list) {
      if (!pr.is_array() || pr.size() != 2)
        throw ValidationError("domino pair must be a two-element array");
      ps.emplace_back(d.state_index(pr[0].get<std::string>()),
                      d.state_index(pr[1].get<std::string>()));
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    d.pairs[label] = std::move(ps);
  }
  if (j.contains("s0")) d.s0 = d.state_index(j["s0"].get<std::string>());
  return d;
}

Json DominoSpec::to_json() const {
  Json jp = Json::object();
  for (const auto& [label, list] : pairs) {
    Json arr = Json::array();
    for (auto [a, b] : list)
      arr.push_back(Json::array({states[a], states[b]}));
    jp[label] = std::move(arr);
  }
  Json j{{"states", states}, {"pairs", std::move(jp)}};
  if (s0) j["s0"] = states[*s0];
  return j;
}

bool is_valid(const LabeledGraph& g, const DominoSpec& d,
              std::span<const int> states) {
  for (size_t a = 0; a < g.delta().size(); ++a) {
    auto it = d.pairs.find(g.delta()[a]);
    if (it == d.pairs.end()) continue;
    for (int v = 0; v < g.vertex_count(); ++v)
      for (int u : g.out(static_cast<int>(a), v))
        if (!pair_in(it->second, states[v], states[u])) return false;
  }
  return true;
}

namespace {

// Backtracking with per-vertex candidate masks; |S| is capped at 64 states
// which every spec in reach of the solver satisfies.
struct DominoSearch {
  const LabeledGraph& g;
  const DominoSpec& d;
  bool require_s0;
  int n_states;
  // allowed_to[a][s]: mask of states permitted after s across an a-edge;
  // allowed_from[a][s]: mask of states permitted before s.
  std::vector<std::vector<uint64_t>> allowed_to, allowed_from;
  std::vector<uint64_t> domain;
  std::vector<int> assignment;

  explicit DominoSearch(const LabeledGraph& graph, const DominoSpec& spec,
                        bool seed)
      : g(graph), d(spec), require_s0(seed) {
    n_states = static_cast<int>(d.states.size());
    if (n_states == 0) throw ValidationError("domino spec has no states");
    if (n_states > 64)
      throw BudgetError("domino solver handles at most 64 states, spec has " +
                        std::to_string(n_states));
    if (require_s0 && !d.s0)
      throw ValidationError("seeded solve needs the spec to name s0");
    uint64_t full = n_states == 64 ? ~uint64_t{0}
                                   : (uint64_t{1} << n_states) - 1;
    size_t n_labels = g.delta().size();
    allowed_to.assign(n_labels, std::vector<uint64_t>(n_states, full));
    allowed_from.assign(n_labels, std::vector<uint64_t>(n_states, full));
    for (size_t a = 0; a < n_labels; ++a) {
      auto it = d.pairs.find(g.delta()[a]);
      if (it == d.pairs.end()) continue;
      std::fill(allowed_to[a].begin(), allowed_to[a].end(), 0);
      std::fill(allowed_from[a].begin(), allowed_from[a].end(), 0);
      for (auto [x, y] : it->second) {
        allowed_to[a][x] |= uint64_t{1} << y;
        allowed_from[a][y] |= uint64_t{1} << x;
      }
    }
    domain.assign(g.vertex_count(), full);
    assignment.assign(g.vertex_count(), -1);
  }

  bool s0_still_reachable(int next) const {
    if (!require_s0) return true;
    uint64_t bit = uint64_t{1} << *d.s0;
    for (int v = 0; v < next; ++v)
      if (assignment[v] == *d.s0) return true;
    for (int v = next; v < g.vertex_count(); ++v)
      if (domain[v] & bit) return true;
    return false;
  }

  bool run(int v) {
    if (v == g.vertex_count()) return true;
    uint64_t candidates = domain[v];
    while (candidates) {
      int s = std::countr_zero(candidates);
      candidates &= candidates - 1;
      assignment[v] = s;
      // Forward checking: narrow the unassigned endpoints of every edge at
      // v and remember what we clobbered for the undo.
      std::vector<std::pair<int, uint64_t>> undo;
      bool dead = false;
      for (size_t a = 0; a < g.delta().size() && !dead; ++a) {
        for (int u : g.out(static_cast<int>(a), v)) {
          if (assignment[u] >= 0) {
            if (!((allowed_to[a][s] >> assignment[u]) & 1)) dead = true;
          } else {
            undo.emplace_back(u, domain[u]);
            domain[u] &= allowed_to[a][s];
            if (!domain[u]) dead = true;
          }
          if (dead) break;
        }
        if (dead) break;
        for (int u : g.in(static_cast<int>(a), v)) {
          if (assignment[u] >= 0) {
            if (!((allowed_from[a][s] >> assignment[u]) & 1)) dead = true;
          } else {
            undo.emplace_back(u, domain[u]);
            domain[u] &= allowed_from[a][s];
            if (!domain[u]) dead = true;
          }
          if (dead) break;
        }
      }
      if (!dead && s0_still_reachable(v + 1) && run(v + 1)) return true;
      for (auto it = undo.rbegin(); it != undo.rend(); ++it)
        domain[it->first] = it->second;
      assignment[v] = -1;
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<int>> solve_domino(const LabeledGraph& g,
                                             const DominoSpec& d,
                                             bool require_s0) {
  DominoSearch search(g, d, require_s0);
  if (!search.run(0)) return std::nullopt;
  return search.assignment;
}

namespace {

// Picks an extension name not colliding with existing state names.
std::string fresh_name(std::string base,
                       const std::vector<std::string>& taken) {
  while (std::find(taken.begin(), taken.end(), base) != taken.end())
    base += "_";
  return base;
}

// Letter-indexed view of a spec's constraints, fixed at binding time.
struct BoundPairs {
  bool bound = false;
  // One entry per letter: nullptr = unconstrained.
  std::vector<const std::vector<std::pair<int, int>>*> per_letter;
  std::vector<std::string> delta;

  void bind(const DominoSpec& spec, std::vector<std::string> graph_delta) {
    bound = true;
    delta = std::move(graph_delta);
    per_letter.clear();
    for (const auto& label : delta) {
      auto it = spec.pairs.find(label);
      per_letter.push_back(it == spec.pairs.end() ? nullptr : &it->second);
    }
  }
};

class DominoRule final : public LocalRule {
public:
  explicit DominoRule(DominoSpec spec) : spec_(std::move(spec)) {
    if (spec_.states.empty())
      throw ValidationError("domino spec has no states");
    states_ = spec_.states;
    // A one-state alphabet has no distinct "wrong" state to move to, so the
    // working alphabet gains a sink that keeps oscillating back.
    if (states_.size() == 1)
      states_.push_back(fresh_name("sink", states_));
  }

  const std::vector<std::string>& states() const override { return states_; }
  int radius() const override { return 1; }
  int cap() const override { return 1; }
  const std::vector<std::string>& required_delta() const override {
    return bound_.bound ? bound_.delta : kEmpty_;
  }

  std::shared_ptr<const LocalRule> bind(
      const std::vector<std::string>&,
      const std::vector<std::string>& delta) const override {
    auto copy = std::make_shared<DominoRule>(spec_);
    copy->bound_.bind(copy->spec_, delta);
    return copy;
  }

  int apply(int, const CappedMultiset& p) const override {
    if (!bound_.bound)
      throw Error("domino rule applied without a graph binding");
    int s = p.center_state();
    int n = static_cast<int>(spec_.states.size());
    bool ok = s < n;  // the sink state is never content
    if (ok) {
      for (const auto& e : p.entries()) {
        if (e.word == 0) continue;
        const auto* ps = bound_.per_letter[e.word - 1];
        if (e.state >= n || (ps && !pair_in(*ps, s, e.state))) {
          ok = false;
          break;
        }
      }
    }
    return ok ? s : (s + 1) % static_cast<int>(states_.size());
  }

  Json to_json() const override {
    return Json{{"kind", "domino"}, {"spec", spec_.to_json()}};
  }
  std::string fingerprint_payload() const override {
    std::string payload = "domino:" + spec_.to_json().dump();
    if (bound_.bound)
      for (const auto& l : bound_.delta) payload += "@" + l;
    return payload;
  }

private:
  DominoSpec spec_;
  std::vector<std::string> states_;
  BoundPairs bound_;
  static const std::vector<std::string> kEmpty_;
};

const std::vector<std::string> DominoRule::kEmpty_;

class SeededDominoRule final : public LocalRule {
public:
  SeededDominoRule(DominoSpec spec, int s0) : spec_(std::move(spec)), s0_(s0) {
    states_ = spec_.states;
    t_ = static_cast<int>(states_.size());
    states_.push_back(fresh_name("t", states_));
    e0_ = t_ + 1;
    states_.push_back(fresh_name("e0", states_));
    states_.push_back(fresh_name("e1", states_));
  }

  const std::vector<std::string>& states() const override { return states_; }
  int radius() const override { return 1; }
  int cap() const override { return 1; }
  const std::vector<std::string>& required_delta() const override {
    return bound_.bound ? bound_.delta : kEmpty_;
  }

  std::shared_ptr<const LocalRule> bind(
      const std::vector<std::string>&,
      const std::vector<std::string>& delta) const override {
    auto copy = std::make_shared<SeededDominoRule>(spec_, s0_);
    copy->bound_.bind(copy->spec_, delta);
    return copy;
  }

  int apply(int, const CappedMultiset& p) const override {
    if (!bound_.bound)
      throw Error("domino rule applied without a graph binding");
    int s = p.center_state();
    if (s >= e0_) return s == e0_ ? e0_ + 1 : e0_;  // e_i -> e_{1-i}
    if (s == t_) return s0_;
    // rho maps t back to s0 and neighbors carrying error states always
    // violate the constraint.
    for (const auto& e : p.entries()) {
      if (e.word == 0) continue;
      if (e.state >= e0_) return e0_;
      int other = e.state == t_ ? s0_ : e.state;
      const auto* ps = bound_.per_letter[e.word - 1];
      if (ps && !pair_in(*ps, s, other)) return e0_;
    }
    return s;
  }

  Json to_json() const override {
    return Json{{"kind", "domino_seeded"},
                {"spec", spec_.to_json()},
                {"s0", spec_.states[s0_]}};
  }
  std::string fingerprint_payload() const override {
    std::string payload = "domino_seeded:" + std::to_string(s0_) + ":" +
                          spec_.to_json().dump();
    if (bound_.bound)
      for (const auto& l : bound_.delta) payload += "@" + l;
    return payload;
  }

private:
  DominoSpec spec_;
  int s0_;
  int t_;
  int e0_;
  std::vector<std::string> states_;
  BoundPairs bound_;
  static const std::vector<std::string> kEmpty_;
};

const std::vector<std::string> SeededDominoRule::kEmpty_;

}  // namespace

RulePtr domino_to_rule(const DominoSpec& d) {
  return std::make_shared<DominoRule>(d);
}

RulePtr seeded_rule(const DominoSpec& d, const std::string& s0) {
  return std::make_shared<SeededDominoRule>(d, d.state_index(s0));
}

LabeledGraph domino_torus(std::span<const int> sides) {
  if (sides.empty())
    throw ValidationError("higher-block recoding needs at least one side");
  if (sides.size() == 1) return cycle_graph(sides[0]);
  if (sides.size() == 2) return torus_graph(sides[0], sides[1]);
  return torus_graph_nd(std::vector<int>(sides.begin(), sides.end()));
}

namespace {

// Sorted list of torus vertices within distance `radius` of vertex 0.
std::vector<int> ball_vertices(const LabeledGraph& g, int radius) {
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<int> frontier{0}, ball{0};
  seen[0] = 1;
  for (int step = 0; step < radius; ++step) {
    std::vector<int> next;
    for (int v : frontier)
      for (size_t a = 0; a < g.delta().size(); ++a)
        for (int u : g.out(static_cast<int>(a), v))
          if (!seen[u]) {
            seen[u] = 1;
            next.push_back(u);
            ball.push_back(u);
          }
    frontier = std::move(next);
  }
  std::sort(ball.begin(), ball.end());
  return ball;
}

struct RecodingContext {
  LabeledGraph torus;
  GlobalMap map;
  std::vector<int> ball;        // sorted torus vertex ids
  std::vector<int> ball_pos;    // torus vertex -> position in ball (or -1)
  int center_pos;
  int n_states;

  RecodingContext(const RulePtr& f, std::span<const int> sides)
      : torus(domino_torus(sides)), map(torus, f) {
    if (f->required_sigma().size() > 1)
      throw ValidationError(
          "higher-block recoding needs a uniform rule (one vertex label)");
    for (int side : sides)
      if (side <= 2 * f->radius()) {
        std::ostringstream os;
        os << "radius-" << f->radius() << " ball wraps on torus side " << side
           << " (need side > " << 2 * f->radius() << ")";
        throw ValidationError(os.str());
      }
    ball = ball_vertices(torus, f->radius());
    ball_pos.assign(torus.vertex_count(), -1);
    for (size_t i = 0; i < ball.size(); ++i) ball_pos[ball[i]] = i;
    center_pos = ball_pos[0];
    n_states = map.num_states();
  }

  // Applies the rule at torus vertex 0 on a configuration that carries
  // `p` on the ball; vertices outside the ball are never read.
  int apply_center(std::span<const int> p) {
    std::vector<int> states(torus.vertex_count(), 0);
    for (size_t i = 0; i < ball.size(); ++i) states[ball[i]] = p[i];
    PatternScratch scratch;
    CappedMultiset pat;
    map.pattern_at(states, 0, scratch, pat);
    return map.rule().apply(map.sigma_at(0), pat);
  }

  // Within-ball a-labeled edges as (from, to) ball position pairs.
  std::vector<std::vector<std::pair<int, int>>> ball_edges() const {
    std::vector<std::vector<std::pair<int, int>>> edges(torus.delta().size());
    for (size_t a = 0; a < torus.delta().size(); ++a)
      for (int v : ball)
        for (int u : torus.out(static_cast<int>(a), v))
          if (ball_pos[u] >= 0)
            edges[a].emplace_back(ball_pos[v], ball_pos[u]);
    return edges;
  }

  uint64_t pattern_count() const {
    uint64_t n = 1;
    for (size_t i = 0; i < ball.size(); ++i) {
      n *= n_states;
      if (n > kMaxBallPatterns)
        throw BudgetError("ball pattern domain exceeds " +
                          std::to_string(kMaxBallPatterns) + " entries");
    }
    return n;
  }
};

std::string join_pattern(const std::vector<std::string>& names,
                         std::span<const int> p) {
  std::string out;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += '|';
    out += names[p[i]];
  }
  return out;
}

}  // namespace

DominoSpec rule_to_domino(const RulePtr& f, std::span<const int> sides) {
  RecodingContext ctx(f, sides);
  uint64_t total = ctx.pattern_count();
  const auto& names = f->states();

  // Locally-fixed ball patterns become the recoded states.
  std::vector<std::vector<int>> fixed;
  std::vector<int> p(ctx.ball.size());
  for (uint64_t idx = 0; idx < total; ++idx) {
    decode_config(idx, ctx.n_states, p);
    if (ctx.apply_center(p) == p[ctx.center_pos]) fixed.push_back(p);
  }

  DominoSpec d;
  for (const auto& q : fixed) d.states.push_back(join_pattern(names, q));

  if (static_cast<uint64_t>(fixed.size()) * fixed.size() > kMaxRecodedPairs)
    throw BudgetError("recoded pair enumeration exceeds " +
                      std::to_string(kMaxRecodedPairs) + " entries");

  // Moving along a δ-edge must shift the ball pattern: p at the edge head
  // agrees with p' at the tail for every in-ball δ-edge.
  auto edges = ctx.ball_edges();
  for (size_t a = 0; a < ctx.torus.delta().size(); ++a) {
    std::vector<std::pair<int, int>> allowed;
    for (size_t i = 0; i < fixed.size(); ++i)
      for (size_t j = 0; j < fixed.size(); ++j) {
        bool ok = true;
        for (auto [from, to] : edges[a])
          if (fixed[i][to] != fixed[j][from]) {
            ok = false;
            break;
          }
        if (ok) allowed.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    d.pairs[ctx.torus.delta()[a]] = std::move(allowed);
  }
  return d;
}

SeededRecoding rule_to_seeded_domino(const RulePtr& f,
                                     std::span<const int> sides) {
  RecodingContext ctx(f, sides);
  uint64_t total = ctx.pattern_count();
  if (total > kMaxBallPatterns / total)
    throw BudgetError("seeded recoding pattern domain exceeds " +
                      std::to_string(kMaxBallPatterns) + " entries");
  const auto& names = f->states();

  // States are (fixed-point ball, preimage ball) pairs: the first component
  // is locally fixed and the rule maps the second one onto its center.
  std::vector<std::vector<int>> fst, snd;
  std::vector<int> p(ctx.ball.size()), q(ctx.ball.size());
  std::vector<int> center_of;  // cache of apply_center over all patterns
  center_of.reserve(total);
  for (uint64_t idx = 0; idx < total; ++idx) {
    decode_config(idx, ctx.n_states, p);
    center_of.push_back(ctx.apply_center(p));
  }
  SeededRecoding r;
  for (uint64_t i = 0; i < total; ++i) {
    decode_config(i, ctx.n_states, p);
    if (center_of[i] != p[ctx.center_pos]) continue;
    for (uint64_t j = 0; j < total; ++j) {
      if (center_of[j] != p[ctx.center_pos]) continue;
      decode_config(j, ctx.n_states, q);
      fst.push_back(p);
      snd.push_back(q);
      std::string name;
      for (size_t pos = 0; pos < p.size(); ++pos) {
        if (pos) name += '|';
        name += names[p[pos]] + ":" + names[q[pos]];
      }
      r.spec.states.push_back(name);
      if (q[ctx.center_pos] != p[ctx.center_pos])
        r.markers.push_back(name);
    }
  }

  if (static_cast<uint64_t>(fst.size()) * fst.size() > kMaxRecodedPairs)
    throw BudgetError("recoded pair enumeration exceeds " +
                      std::to_string(kMaxRecodedPairs) + " entries");

  auto edges = ctx.ball_edges();
  for (size_t a = 0; a < ctx.torus.delta().size(); ++a) {
    std::vector<std::pair<int, int>> allowed;
    for (size_t i = 0; i < fst.size(); ++i)
      for (size_t j = 0; j < fst.size(); ++j) {
        bool ok = true;
        for (auto [from, to] : edges[a]) {
          if (fst[i][to] != fst[j][from] || snd[i][to] != snd[j][from]) {
            ok = false;
            break;
          }
        }
        if (ok) allowed.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    r.spec.pairs[ctx.torus.delta()[a]] = std::move(allowed);
  }
  return r;
}

RulePtr domino_rule_from_json(const Json& j) {
  if (!j.contains("spec"))
    throw ValidationError("domino rule JSON needs a \"spec\" object");
  DominoSpec spec = DominoSpec::from_json(j["spec"]);
  std::string kind = j.value("kind", std::string());
  if (kind == "domino") return domino_to_rule(spec);
  if (!j.contains("s0") || !j["s0"].is_string())
    throw ValidationError("seeded domino rule JSON needs an \"s0\" string");
  return seeded_rule(spec, j["s0"].get<std::string>());
}

}  // namespace gca
