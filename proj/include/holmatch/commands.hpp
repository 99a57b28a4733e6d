#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace holmatch {

// Command implementations shared by the CLI binary and the tests.  Each
// returns a process exit code: 0 success, 1 parse/config/IO failure,
// 2 missing input file.  Every command that writes into an output directory
// leaves exactly one manifest.txt there.

struct IngestOpts {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string basis_path;  // optional operator-mapping file
  std::string name;        // optional library name override
  bool collapse = true;    // collapse plain constant-equality theorems
};
int cmd_ingest(const IngestOpts& opts);

struct MineOpts {
  std::string input;
  std::string out_dir;  // empty: report to stdout only
  int level = 1;
  uint32_t distribution_size_cap = 512;
};
int cmd_mine(const MineOpts& opts);

struct MatchOpts {
  std::string input1;
  std::string input2;
  std::string out_dir;
  int level = 2;
  int scheme = 2;
  std::string mode = "iter";  // "single" or "iter"
  uint32_t iterations = 0;  // 0 = per-mode default (1 single, 500 iterative)
  bool typecheck = true;
  bool full_rebuild = false;
  int jobs = 0;  // 0: all cores
  uint32_t distribution_size_cap = 512;
  std::string truth_path;  // optional constant-truth TSV for metrics
};
int cmd_match(const MatchOpts& opts);

struct GenOpts {
  std::string config_path;  // optional key=value file
  std::string out_dir;
  uint64_t seed = 1;
  uint32_t n_constants = 50;
  uint32_t n_theorems = 120;
  double noise = 0.0;
  bool rename_types = true;
  uint32_t name_offset = 0;
  std::map<std::string, double> mix;  // empty: default_property_mix()
};
int cmd_gen(const GenOpts& opts);

inline const char* kToolVersion = "0.1.0";

}  // namespace holmatch
