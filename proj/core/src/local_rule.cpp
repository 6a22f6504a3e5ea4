#include "gca/local_rule.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

#include "gca/domino.hpp"
#include "gca/error.hpp"
#include "gca/translate.hpp"

namespace gca {
namespace {

const std::vector<std::string> kNoLabels;

std::vector<std::string> numeric_states(int n) {
  std::vector<std::string> s;
  s.reserve(n);
  for (int i = 0; i < n; ++i) s.push_back(std::to_string(i));
  return s;
}

// Canonical comparison key for table lookup.
std::string pattern_key(int sigma, const CappedMultiset& p) {
  std::ostringstream os;
  os << sigma;
  for (const auto& e : p.entries())
    os << '|' << e.word << ',' << e.state << ',' << e.count;
  return os.str();
}

class IdentityRule final : public LocalRule {
public:
  explicit IdentityRule(int n) : states_(numeric_states(n)) {
    if (n < 1) throw ValidationError("identity rule needs >= 1 state");
  }
  const std::vector<std::string>& states() const override { return states_; }
  int radius() const override { return 0; }
  int cap() const override { return 1; }
  int apply(int, const CappedMultiset& p) const override {
    return p.center_state();
  }
  Json to_json() const override {
    return Json{{"kind", "builtin"},
                {"name", "identity"},
                {"params", {{"states", static_cast<int>(states_.size())}}}};
  }
  std::string fingerprint_payload() const override {
    return "builtin:identity:" + std::to_string(states_.size());
  }

private:
  std::vector<std::string> states_;
};

class ColoringRule final : public LocalRule {
public:
  explicit ColoringRule(int k) : k_(k), states_(numeric_states(k)) {
    if (k < 2) throw ValidationError("coloring rule needs k >= 2");
  }
  const std::vector<std::string>& states() const override { return states_; }
  int radius() const override { return 1; }
  int cap() const override { return 1; }
  bool symmetric_neighborhood() const override { return true; }
  int apply(int, const CappedMultiset& p) const override {
    int c = p.center_state();
    // Words of length 1 are every non-empty word at radius 1, so scanning
    // past the center entry sees exactly the per-label neighbor states.
    for (const auto& e : p.entries())
      if (e.word != 0 && e.state == c) return (c + 1) % k_;
    return c;
  }
  Json to_json() const override {
    return Json{{"kind", "builtin"},
                {"name", "coloring"},
                {"params", {{"k", k_}}}};
  }
  std::string fingerprint_payload() const override {
    return "builtin:coloring:" + std::to_string(k_);
  }

private:
  int k_;
  std::vector<std::string> states_;
};

// States 0,1 blink; a0,a1,a2 fall to 0 next to a blinker, else advance
// cyclically.  Indices: 0,1 are the blinkers, 2+i is a_i.
class ConnectivityRule final : public LocalRule {
public:
  ConnectivityRule() : states_{"0", "1", "a0", "a1", "a2"} {}
  const std::vector<std::string>& states() const override { return states_; }
  int radius() const override { return 1; }
  int cap() const override { return 1; }
  bool symmetric_neighborhood() const override { return true; }
  int apply(int, const CappedMultiset& p) const override {
    int c = p.center_state();
    if (c < 2) return 1 - c;
    for (const auto& e : p.entries())
      if (e.word != 0 && e.state < 2) return 0;
    return 2 + (c - 2 + 1) % 3;
  }
  Json to_json() const override {
    return Json{{"kind", "builtin"}, {"name", "connectivity"},
                {"params", Json::object()}};
  }
  std::string fingerprint_payload() const override {
    return "builtin:connectivity";
  }

private:
  std::vector<std::string> states_;
};

// Shared birth/survival step: alive cells survive on 2 or 3 live
// neighbours, dead cells are born on exactly 3.
int life_step(int center, int live) {
  if (center == 1) return (live == 2 || live == 3) ? 1 : 0;
  return live == 3 ? 1 : 0;
}

class LifeCayleyRule final : public LocalRule {
public:
  LifeCayleyRule()
      : states_{"0", "1"},
        delta_{"n", "e", "ni", "ei"},
        words_(4, 2),
        moore_{word_id({0}), word_id({1}), word_id({2}), word_id({3}),
               word_id({0, 1}), word_id({0, 3}), word_id({2, 1}),
               word_id({2, 3})} {}
  const std::vector<std::string>& states() const override { return states_; }
  int radius() const override { return 2; }
  int cap() const override { return 4; }
  const std::vector<std::string>& required_delta() const override {
    return delta_;
  }
  int apply(int, const CappedMultiset& p) const override {
    int live = 0;
    for (int w : moore_) live += p.count(w, 1);
    return life_step(p.center_state(), live);
  }
  Json to_json() const override {
    return Json{{"kind", "builtin"}, {"name", "life_cayley"},
                {"params", Json::object()}};
  }
  std::string fingerprint_payload() const override {
    return "builtin:life_cayley";
  }

private:
  int word_id(std::initializer_list<int> w) const {
    return words_.word_id(std::vector<int>(w));
  }
  std::vector<std::string> states_;
  std::vector<std::string> delta_;
  WordTable words_;
  // The eight Moore offsets as words over n,e,ni,ei: the four generators
  // plus the diagonals n.e, n.ei, ni.e, ni.ei.
  std::array<int, 8> moore_;
};

class LifePlainRule final : public LocalRule {
public:
  LifePlainRule() : states_{"0", "1"}, delta_{"u"} {}
  const std::vector<std::string>& states() const override { return states_; }
  int radius() const override { return 1; }
  int cap() const override { return 4; }
  const std::vector<std::string>& required_delta() const override {
    return delta_;
  }
  bool symmetric_neighborhood() const override { return true; }
  int apply(int, const CappedMultiset& p) const override {
    // Cap 4 saturates: a count of 4 means "at least 4", which life treats
    // as overcrowded either way.
    return life_step(p.center_state(), p.count(1, 1));
  }
  Json to_json() const override {
    return Json{{"kind", "builtin"}, {"name", "life_plain"},
                {"params", Json::object()}};
  }
  std::string fingerprint_payload() const override {
    return "builtin:life_plain";
  }

private:
  std::vector<std::string> states_;
  std::vector<std::string> delta_;
};

int require_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ValidationError(std::string("rule JSON needs integer \"") + key +
                          "\"");
  return j[key].get<int>();
}

std::vector<std::string> require_strings(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    throw ValidationError(std::string("rule JSON needs array \"") + key +
                          "\"");
  std::vector<std::string> out;
  for (const auto& s : j[key]) {
    if (!s.is_string())
      throw ValidationError(std::string("rule JSON \"") + key +
                            "\" must hold strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

int lookup(const std::vector<std::string>& names, const std::string& name,
           const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end())
    throw ValidationError(std::string("unknown ") + what + " \"" + name +
                          "\" in rule JSON");
  return static_cast<int>(it - names.begin());
}

}  // namespace

const std::vector<std::string>& LocalRule::required_sigma() const {
  return kNoLabels;
}

const std::vector<std::string>& LocalRule::required_delta() const {
  return kNoLabels;
}

std::shared_ptr<const LocalRule> LocalRule::bind(
    const std::vector<std::string>&, const std::vector<std::string>&) const {
  return nullptr;
}

int LocalRule::state_index(const std::string& name) const {
  const auto& s = states();
  auto it = std::find(s.begin(), s.end(), name);
  if (it == s.end())
    throw ValidationError("rule has no state named \"" + name + "\"");
  return static_cast<int>(it - s.begin());
}

RulePtr identity_rule(int num_states) {
  return std::make_shared<IdentityRule>(num_states);
}

RulePtr coloring_rule(int k) { return std::make_shared<ColoringRule>(k); }

RulePtr connectivity_rule() { return std::make_shared<ConnectivityRule>(); }

RulePtr life_cayley_rule() { return std::make_shared<LifeCayleyRule>(); }

RulePtr life_plain_rule() { return std::make_shared<LifePlainRule>(); }

TableRule::TableRule(std::vector<std::string> states,
                     std::vector<std::string> sigma,
                     std::vector<std::string> delta, int radius, int cap,
                     std::vector<Entry> entries, int default_state,
                     bool symmetric)
    : states_(std::move(states)),
      sigma_(std::move(sigma)),
      delta_(std::move(delta)),
      radius_(radius),
      cap_(cap),
      default_state_(default_state),
      symmetric_(symmetric),
      entries_(std::move(entries)) {
  if (states_.empty()) throw ValidationError("table rule needs states");
  if (radius_ < 0 || cap_ < 1)
    throw ValidationError("table rule needs radius >= 0 and cap >= 1");
  if (default_state_ < 0 || default_state_ >= static_cast<int>(states_.size()))
    throw ValidationError("table rule default state out of range");
  for (const auto& e : entries_) {
    if (e.out < 0 || e.out >= static_cast<int>(states_.size()))
      throw ValidationError("table rule entry output out of range");
    if (!e.pattern.has_center())
      throw ValidationError("table rule entry pattern lacks a center");
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) {
              return pattern_key(a.sigma, a.pattern) <
                     pattern_key(b.sigma, b.pattern);
            });
  for (size_t i = 1; i < entries_.size(); ++i)
    if (pattern_key(entries_[i - 1].sigma, entries_[i - 1].pattern) ==
        pattern_key(entries_[i].sigma, entries_[i].pattern))
      throw ValidationError("table rule has duplicate pattern entries");
}

int TableRule::apply(int sigma, const CappedMultiset& p) const {
  std::string key = pattern_key(sigma, p);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const Entry& e, const std::string& k) {
                               return pattern_key(e.sigma, e.pattern) < k;
                             });
  if (it != entries_.end() && pattern_key(it->sigma, it->pattern) == key)
    return it->out;
  return default_state_;
}

Json TableRule::to_json() const {
  WordTable words(static_cast<int>(delta_.size()), radius_);
  Json entries = Json::array();
  for (const auto& e : entries_) {
    Json multiset = Json::array();
    for (const auto& me : e.pattern.entries()) {
      Json letters = Json::array();
      for (int a : words.word(me.word)) letters.push_back(delta_[a]);
      multiset.push_back(Json{{"word", letters},
                              {"state", states_[me.state]},
                              {"count", me.count}});
    }
    entries.push_back(Json{{"sigma", sigma_[e.sigma]},
                           {"multiset", multiset},
                           {"out", states_[e.out]}});
  }
  return Json{{"kind", "table"},
              {"states", states_},
              {"sigma", sigma_},
              {"delta", delta_},
              {"radius", radius_},
              {"cap", cap_},
              {"symmetric", symmetric_},
              {"entries", entries},
              {"default", states_[default_state_]}};
}

std::string TableRule::fingerprint_payload() const {
  return "table:" + to_json().dump();
}

RulePtr rule_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ValidationError("rule JSON needs a \"kind\" string");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "builtin") {
    if (!j.contains("name") || !j["name"].is_string())
      throw ValidationError("builtin rule JSON needs a \"name\" string");
    std::string name = j["name"].get<std::string>();
    Json params = j.value("params", Json::object());
    if (name == "identity") return identity_rule(require_int(params, "states"));
    if (name == "coloring") return coloring_rule(require_int(params, "k"));
    if (name == "connectivity") return connectivity_rule();
    if (name == "life_cayley") return life_cayley_rule();
    if (name == "life_plain") return life_plain_rule();
    throw ValidationError("unknown builtin rule \"" + name + "\"");
  }
  if (kind == "domino" || kind == "domino_seeded") return domino_rule_from_json(j);
  if (kind == "translated") return translated_rule_from_json(j);
  if (kind != "table")
    throw ValidationError("unknown rule kind \"" + kind + "\"");

  auto states = require_strings(j, "states");
  auto sigma = require_strings(j, "sigma");
  auto delta = require_strings(j, "delta");
  int radius = require_int(j, "radius");
  int cap = require_int(j, "cap");
  bool symmetric = j.value("symmetric", false);
  WordTable words(static_cast<int>(delta.size()), radius);
  std::vector<TableRule::Entry> entries;
  for (const auto& je : j.value("entries", Json::array())) {
    TableRule::Entry e;
    e.sigma = lookup(sigma, je.value("sigma", std::string()), "sigma label");
    e.out = lookup(states, je.value("out", std::string()), "state");
    std::vector<CappedMultiset::Entry> raw;
    for (const auto& me : je.value("multiset", Json::array())) {
      std::vector<int> letters;
      for (const auto& l : me.value("word", Json::array()))
        letters.push_back(lookup(delta, l.get<std::string>(), "delta label"));
      int wid = words.word_id(letters);
      if (wid < 0)
        throw ValidationError("rule JSON multiset word exceeds the radius");
      raw.push_back({wid,
                     lookup(states, me.value("state", std::string()), "state"),
                     me.value("count", 0)});
    }
    e.pattern = CappedMultiset::capped(cap, std::move(raw));
    entries.push_back(std::move(e));
  }
  int default_state =
      lookup(states, j.value("default", std::string()), "state");
  return std::make_shared<TableRule>(std::move(states), std::move(sigma),
                                     std::move(delta), radius, cap,
                                     std::move(entries), default_state,
                                     symmetric);
}

RulePtr rule_from_name(const std::string& name) {
  auto colon = name.find(':');
  std::string head = name.substr(0, colon);
  auto param = [&](const char* what) {
    if (colon == std::string::npos)
      throw ValidationError("rule \"" + head + "\" needs a parameter, e.g. " +
                            head + ":" + what);
    int value = 0;
    auto tail = name.substr(colon + 1);
    auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(),
                                   value);
    if (ec != std::errc() || p != tail.data() + tail.size())
      throw ValidationError("bad parameter in rule name \"" + name + "\"");
    return value;
  };
  if (head == "identity") return identity_rule(param("2"));
  if (head == "coloring") return coloring_rule(param("3"));
  if (head == "connectivity") return connectivity_rule();
  if (head == "life_cayley") return life_cayley_rule();
  if (head == "life_plain") return life_plain_rule();
  throw ValidationError("unknown rule name \"" + name + "\"");
}

}  // namespace gca
