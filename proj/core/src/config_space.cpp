#include "gca/config_space.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "gca/error.hpp"

namespace gca {
namespace {

constexpr char kCacheMagic[8] = {'G', 'C', 'A', 'T', 'B', 'L', '0', '1'};

uint64_t fnv1a64(std::string_view bytes, uint64_t seed = 0xcbf29ce484222325ull) {
  uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Exact alphabet check for rules that pin their label sets.
void check_alphabet(const std::vector<std::string>& required,
                    const std::vector<std::string>& actual, const char* what) {
  if (required.empty()) return;
  if (required != actual) {
    std::ostringstream os;
    os << "rule expects " << what << " [";
    for (size_t i = 0; i < required.size(); ++i)
      os << (i ? "," : "") << required[i];
    os << "] but the graph has [";
    for (size_t i = 0; i < actual.size(); ++i)
      os << (i ? "," : "") << actual[i];
    os << "]";
    throw ValidationError(os.str());
  }
}

}  // namespace

uint64_t config_count(int num_states, int num_vertices) {
  uint64_t n = 1;
  for (int i = 0; i < num_vertices; ++i) {
    if (n > (uint64_t{1} << 63) / std::max(num_states, 1)) {
      std::ostringstream os;
      os << "configuration space overflows 64 bits: " << num_states << "^"
         << num_vertices;
      throw BudgetError(os.str());
    }
    n *= num_states;
  }
  return n;
}

uint64_t config_index(std::span<const int> states, int num_states) {
  uint64_t idx = 0;
  for (int s : states) idx = idx * num_states + s;
  return idx;
}

void decode_config(uint64_t index, int num_states, std::span<int> out) {
  for (size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<int>(index % num_states);
    index /= num_states;
  }
}

GlobalMap::GlobalMap(LabeledGraph graph, RulePtr rule)
    : graph_(std::move(graph)),
      rule_(std::move(rule)),
      words_(static_cast<int>(graph_.delta().size()), rule_->radius()) {
  if (auto bound = rule_->bind(graph_.sigma(), graph_.delta()))
    rule_ = std::move(bound);
  check_alphabet(rule_->required_sigma(), graph_.sigma(), "vertex labels");
  check_alphabet(rule_->required_delta(), graph_.delta(), "edge labels");
  reach_lists_ =
      build_reach_lists(graph_, words_, rule_->symmetric_neighborhood());
  sigma_of_vertex_.resize(graph_.vertex_count());
  for (int v = 0; v < graph_.vertex_count(); ++v)
    sigma_of_vertex_[v] = graph_.label_of(v);
}

uint64_t GlobalMap::num_configs() const {
  return config_count(num_states(), graph_.vertex_count());
}

void GlobalMap::pattern_at(std::span<const int> states, int v,
                           PatternScratch& scratch,
                           CappedMultiset& out) const {
  pattern_into(words_, reach_lists_[v], states, num_states(), rule_->cap(),
               scratch, out);
}

void GlobalMap::apply_into(std::span<const int> states,
                           std::span<int> out) const {
  PatternScratch scratch;
  CappedMultiset p;
  for (int v = 0; v < graph_.vertex_count(); ++v) {
    pattern_at(states, v, scratch, p);
    out[v] = rule_->apply(sigma_of_vertex_[v], p);
  }
}

std::vector<int> GlobalMap::apply(std::span<const int> states) const {
  std::vector<int> out(states.size());
  apply_into(states, out);
  return out;
}

std::vector<int> GlobalMap::parse_states(const std::string& text) const {
  std::vector<int> out;
  size_t pos = 0;
  while (true) {
    size_t comma = text.find(',', pos);
    std::string name = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out.push_back(rule_->state_index(name));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (static_cast<int>(out.size()) != graph_.vertex_count()) {
    std::ostringstream os;
    os << "configuration lists " << out.size() << " states but the graph has "
       << graph_.vertex_count() << " vertices";
    throw ValidationError(os.str());
  }
  return out;
}

std::string GlobalMap::format_states(std::span<const int> states) const {
  std::string out;
  for (size_t i = 0; i < states.size(); ++i) {
    if (i) out += ',';
    out += rule_->states()[states[i]];
  }
  return out;
}

uint64_t table_fingerprint(const LabeledGraph& g, const LocalRule& rule) {
  uint64_t h = fnv1a64(g.canonical_string());
  h = fnv1a64("\n", h);
  return fnv1a64(rule.fingerprint_payload(), h);
}

namespace {

std::filesystem::path cache_path(const std::string& dir, uint64_t fp) {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.gcat",
                static_cast<unsigned long long>(fp));
  return std::filesystem::path(dir) / name;
}

bool load_cached(const std::filesystem::path& path, uint64_t fp,
                 uint64_t expected_size, std::vector<uint32_t>& successor) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[8];
  uint64_t file_fp = 0, count = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&file_fp), 8);
  in.read(reinterpret_cast<char*>(&count), 8);
  if (!in || std::memcmp(magic, kCacheMagic, 8) != 0 || file_fp != fp ||
      count != expected_size)
    return false;
  successor.resize(count);
  in.read(reinterpret_cast<char*>(successor.data()), count * 4);
  uint64_t checksum = 0;
  in.read(reinterpret_cast<char*>(&checksum), 8);
  if (!in) return false;
  uint64_t actual = fnv1a64(std::string_view(
      reinterpret_cast<const char*>(successor.data()), count * 4));
  return actual == checksum;
}

void store_cached(const std::filesystem::path& path, uint64_t fp,
                  const std::vector<uint32_t>& successor) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;  // caching is best-effort
    uint64_t count = successor.size();
    out.write(kCacheMagic, 8);
    out.write(reinterpret_cast<const char*>(&fp), 8);
    out.write(reinterpret_cast<const char*>(&count), 8);
    out.write(reinterpret_cast<const char*>(successor.data()), count * 4);
    uint64_t checksum = fnv1a64(std::string_view(
        reinterpret_cast<const char*>(successor.data()), count * 4));
    out.write(reinterpret_cast<const char*>(&checksum), 8);
    if (!out) return;
  }
  std::filesystem::rename(tmp, path, ec);
}

}  // namespace

TransitionTable TransitionTable::build(const GlobalMap& map, uint64_t budget,
                                       int jobs,
                                       const std::string& cache_dir) {
  uint64_t n = map.num_configs();
  if (n > budget || n > UINT32_MAX) {
    std::ostringstream os;
    os << "transition table needs " << n << " entries (|S|^|V| = "
       << map.num_states() << "^" << map.graph().vertex_count()
       << "), budget is " << std::min<uint64_t>(budget, UINT32_MAX);
    throw BudgetError(os.str());
  }

  TransitionTable t;
  t.fingerprint_ = table_fingerprint(map.graph(), map.rule());

  if (!cache_dir.empty() &&
      load_cached(cache_path(cache_dir, t.fingerprint_), t.fingerprint_, n,
                  t.successor_)) {
    t.from_cache_ = true;
    t.build_predecessors();
    return t;
  }

  t.successor_.resize(n);
  int num_vertices = map.graph().vertex_count();
  int num_states = map.num_states();
  auto worker = [&](uint64_t begin, uint64_t end) {
    std::vector<int> states(num_vertices), next(num_vertices);
    for (uint64_t i = begin; i < end; ++i) {
      decode_config(i, num_states, states);
      map.apply_into(states, next);
      t.successor_[i] = static_cast<uint32_t>(config_index(next, num_states));
    }
  };
  jobs = std::max(1, jobs);
  if (jobs == 1 || n < 4096) {
    worker(0, n);
  } else {
    std::vector<std::thread> pool;
    uint64_t chunk = (n + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
      uint64_t begin = std::min(n, j * chunk);
      uint64_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  if (!cache_dir.empty())
    store_cached(cache_path(cache_dir, t.fingerprint_), t.fingerprint_,
                 t.successor_);
  t.build_predecessors();
  return t;
}

void TransitionTable::build_predecessors() {
  uint64_t n = successor_.size();
  pred_offset_.assign(n + 1, 0);
  for (uint32_t s : successor_) ++pred_offset_[s + 1];
  for (uint64_t i = 1; i <= n; ++i) pred_offset_[i] += pred_offset_[i - 1];
  pred_data_.resize(n);
  std::vector<uint32_t> cursor(pred_offset_.begin(), pred_offset_.end() - 1);
  for (uint64_t i = 0; i < n; ++i)
    pred_data_[cursor[successor_[i]]++] = static_cast<uint32_t>(i);
}

OrbitResult orbit(const TransitionTable& table, uint64_t start) {
  OrbitResult r;
  // Steps are bounded by the table size, so a visited-step array is exact.
  std::vector<uint64_t> seen_at(table.size(), UINT64_MAX);
  uint64_t cur = start, step = 0;
  while (seen_at[cur] == UINT64_MAX) {
    seen_at[cur] = step++;
    r.sequence.push_back(cur);
    cur = table.successor(cur);
  }
  r.conclusive = true;
  r.transient = seen_at[cur];
  r.period = step - seen_at[cur];
  return r;
}

OrbitResult orbit(const GlobalMap& map, std::span<const int> start,
                  uint64_t max_steps) {
  OrbitResult r;
  int num_states = map.num_states();
  auto step = [&](std::vector<int>& cur, std::vector<int>& scratch) {
    map.apply_into(cur, scratch);
    cur.swap(scratch);
  };

  // Brent: power-of-two teleports find the period, then two aligned runners
  // find the transient.  Function evaluations stay within a constant factor
  // of transient+period, so the cap below cannot fire while the answer is
  // reachable within max_steps.
  uint64_t eval_cap = max_steps > UINT64_MAX / 8 ? UINT64_MAX
                                                 : 8 * max_steps + 16;
  uint64_t evals = 0;
  std::vector<int> tortoise(start.begin(), start.end());
  std::vector<int> hare = tortoise, scratch(start.size());
  step(hare, scratch);
  ++evals;
  uint64_t power = 1, lam = 1;
  while (tortoise != hare) {
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    step(hare, scratch);
    ++lam;
    if (++evals > eval_cap) return r;  // inconclusive
  }

  hare.assign(start.begin(), start.end());
  for (uint64_t i = 0; i < lam; ++i) step(hare, scratch);
  tortoise.assign(start.begin(), start.end());
  uint64_t mu = 0;
  while (tortoise != hare) {
    step(tortoise, scratch);
    step(hare, scratch);
    ++mu;
  }
  if (mu + lam > max_steps) return r;  // closure found past the budget

  r.conclusive = true;
  r.transient = mu;
  r.period = lam;
  std::vector<int> cur(start.begin(), start.end());
  for (uint64_t i = 0; i < mu + lam; ++i) {
    r.sequence.push_back(config_index(cur, num_states));
    step(cur, scratch);
  }
  return r;
}

}  // namespace gca
