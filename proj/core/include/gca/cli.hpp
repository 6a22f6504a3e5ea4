#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gca/config_space.hpp"
#include "gca/corpus.hpp"
#include "gca/translate.hpp"

namespace gca {

inline constexpr int kSchemaVersion = 1;

/// Default cache directory when --cache-dir is absent.
inline constexpr const char* kCacheDirEnv = "GCA_CACHE_DIR";

/// Everything the option parser collects before dispatch.
struct RunConfig {
  std::string subcommand;  // full path, e.g. "translate mso-to-foca"

  std::string graph_path;
  std::string rule_spec;     // file path or builtin rule name
  std::string domino_path;
  std::string formula;       // inline text (also `verify --mso`)
  std::string formula_file;  // alternative to `formula`
  std::string fo_formula;    // verify --fo
  std::string corpus_name;   // builtin:<name> or file path
  std::string cache_dir;     // --cache-dir, else $GCA_CACHE_DIR
  std::string config_text;   // initial configuration "s0,s1,..."
  std::string s0;            // seeded domino marker state
  std::string sides;         // torus sides "n" or "n,m"
  std::string mode = "general";
  std::string out_path;

  uint64_t budget_states = kDefaultStateBudget;
  uint64_t budget_configs = TransitionTable::kDefaultBudget;
  uint64_t budget_multisets = kDefaultMultisetBudget;
  uint64_t steps = 0;
  uint64_t max_steps = uint64_t{1} << 20;
  uint64_t seed = kDefaultCorpusSeed;
  int jobs = 1;
  bool no_timings = false;
  bool connected = false;
  bool require_s0 = false;
};

/// Entry point shared by the binary and the tests.  `args` excludes the
/// program name.  Writes one JSON document (result or {"error":...}) to
/// `out` — or to --out FILE — and diagnostics to `err`.  Returns 0 on
/// success, 1 when a verified property fails (disagreement or probe
/// violation), 2 on usage, input, or budget errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace gca
