#include "holmatch/commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include "holmatch/corpusgen.hpp"
#include "holmatch/errors.hpp"
#include "holmatch/ingest.hpp"
#include "holmatch/matcher.hpp"
#include "holmatch/parser.hpp"
#include "holmatch/pattern.hpp"
#include "holmatch/util.hpp"

namespace holmatch {

namespace {

using Clock = std::chrono::steady_clock;

// Key-value manifest accumulated during a run; duration is appended last so
// re-run comparisons can drop the final line.
class Manifest {
 public:
  explicit Manifest(std::string command) : start_(Clock::now()) {
    add("command", std::move(command));
    add("version", kToolVersion);
  }

  void add(const std::string& key, std::string value) {
    lines_.push_back(key + "=" + std::move(value));
  }
  void add(const std::string& key, uint64_t v) { add(key, std::to_string(v)); }

  void add_input(size_t i, const std::string& path) {
    add("input." + std::to_string(i), path);
    add("digest.input." + std::to_string(i), hex64(fnv1a64(read_file(path))));
  }

  // Writes `content` into dir/name and records its digest.
  void emit(const std::string& dir, const std::string& name,
            const std::string& content) {
    write_file(dir + "/" + name, content);
    add("digest.output." + name, hex64(fnv1a64(content)));
  }

  void write(const std::string& dir) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  Clock::now() - start_)
                  .count();
    std::string text;
    for (const std::string& l : lines_) text += l + "\n";
    text += "duration_ms=" + std::to_string(ms) + "\n";
    write_file(dir + "/manifest.txt", text);
  }

 private:
  Clock::time_point start_;
  std::vector<std::string> lines_;
};

int missing_inputs(const std::vector<std::string>& paths) {
  int rc = 0;
  for (const std::string& p : paths)
    if (!file_exists(p)) {
      std::cerr << "error: no such file: " << p << "\n";
      rc = 2;
    }
  return rc;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

std::string fmt_score(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

std::unordered_map<Symbol, Symbol> read_truth(const std::string& path) {
  std::unordered_map<Symbol, Symbol> truth;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) tab = line.find(' ');
    if (tab == std::string::npos)
      throw ConfigError("truth line needs two columns: " + line);
    std::string a = line.substr(0, tab);
    std::string b = line.substr(tab + 1);
    if (a == "c1" || a == "t1") continue;  // header row
    truth.emplace(intern(a), intern(b));
  }
  return truth;
}

}  // namespace

int cmd_ingest(const IngestOpts& opts) {
  std::vector<std::string> all = opts.inputs;
  if (!opts.basis_path.empty()) all.push_back(opts.basis_path);
  if (int rc = missing_inputs(all)) return rc;
  if (opts.inputs.empty()) {
    std::cerr << "error: ingest needs at least one input\n";
    return 1;
  }
  return run_guarded([&] {
    Manifest mf("ingest");
    for (size_t i = 0; i < opts.inputs.size(); ++i)
      mf.add_input(i, opts.inputs[i]);

    Library lib = parse_library_file(opts.inputs[0], opts.name);
    for (size_t i = 1; i < opts.inputs.size(); ++i)
      merge_libraries(lib, parse_library_file(opts.inputs[i]));

    std::vector<std::string> warnings;
    if (!opts.basis_path.empty()) {
      mf.add("flag.basis", opts.basis_path);
      lib = apply_basis(std::move(lib), parse_basis_file(opts.basis_path));
    }
    size_t before = lib.theorems.size();
    if (opts.collapse) lib = collapse_equalities(std::move(lib), &warnings);
    size_t collapsed = before - lib.theorems.size();

    size_t undefined = 0;
    for (Symbol c : lib.const_order)
      if (!lib.defined_constants.count(c)) ++undefined;
    std::string stats;
    stats += "library: " + lib.name + "\n";
    stats += "inputs: " + std::to_string(opts.inputs.size()) + "\n";
    stats += "theorems: " + std::to_string(lib.theorems.size()) + "\n";
    stats += "constants: " + std::to_string(lib.constants.size()) + "\n";
    stats += "undefined_constants: " + std::to_string(undefined) + "\n";
    stats += "collapsed_equalities: " + std::to_string(collapsed) + "\n";
    for (const std::string& w : warnings) stats += "warning: " + w + "\n";
    std::cout << stats;

    mf.add("flag.collapse", opts.collapse ? "on" : "off");
    if (opts.out_dir.empty()) return 0;
    ensure_dir(opts.out_dir);
    mf.emit(opts.out_dir, "library.holx", serialize_library(lib));
    mf.emit(opts.out_dir, "stats.txt", stats);
    mf.write(opts.out_dir);
    return 0;
  });
}

int cmd_mine(const MineOpts& opts) {
  if (int rc = missing_inputs({opts.input})) return rc;
  return run_guarded([&] {
    Manifest mf("mine");
    mf.add_input(0, opts.input);
    Library lib = parse_library_file(opts.input);
    NormConfig cfg;
    cfg.level = opts.level;
    cfg.distribution_size_cap = opts.distribution_size_cap;
    if (cfg.level == 2)
      cfg.ac_constants =
          harvest_ac_constants(lib, opts.distribution_size_cap);
    std::string tsv = property_report_tsv(lib, cfg);
    std::cout << tsv;
    mf.add("flag.norm", uint64_t(opts.level));
    if (opts.out_dir.empty()) return 0;
    ensure_dir(opts.out_dir);
    mf.emit(opts.out_dir, "properties.tsv", tsv);
    mf.write(opts.out_dir);
    return 0;
  });
}

int cmd_match(const MatchOpts& opts) {
  std::vector<std::string> all = {opts.input1, opts.input2};
  if (!opts.truth_path.empty()) all.push_back(opts.truth_path);
  if (int rc = missing_inputs(all)) return rc;
  return run_guarded([&] {
    if (opts.mode != "single" && opts.mode != "iter")
      throw ConfigError("mode must be 'single' or 'iter'");
    MatchConfig cfg;
    cfg.norm.level = opts.level;
    cfg.norm.distribution_size_cap = opts.distribution_size_cap;
    cfg.score.scheme = opts.scheme == 0   ? Scheme::score0
                       : opts.scheme == 1 ? Scheme::score1
                                          : Scheme::score2;
    bool single = opts.mode == "single";
    cfg.mode = single ? MatchConfig::Mode::single_pass
                      : MatchConfig::Mode::iterative;
    cfg.iterations = opts.iterations ? opts.iterations : (single ? 1 : 500);
    cfg.typecheck = opts.typecheck;
    cfg.full_rebuild = opts.full_rebuild;
    cfg.jobs = opts.jobs;

    Manifest mf("match");
    mf.add_input(0, opts.input1);
    mf.add_input(1, opts.input2);
    mf.add("flag.norm", uint64_t(opts.level));
    mf.add("flag.score", uint64_t(opts.scheme));
    mf.add("flag.mode", opts.mode);
    mf.add("flag.iterations", uint64_t(cfg.iterations));
    mf.add("flag.typecheck", opts.typecheck ? "on" : "off");

    Library l1 = parse_library_file(opts.input1);
    Library l2 = parse_library_file(opts.input2);
    MatchSession session(std::move(l1), std::move(l2), cfg);
    session.run();
    const MatchState& st = session.state();

    std::string cp = "rank\tc1\tc2\tscore\tshared\tfresh\n";
    for (size_t i = 0; i < st.const_pairs.size(); ++i) {
      const AcceptedPair& p = st.const_pairs[i];
      cp += std::to_string(i + 1) + "\t" + sym_name(p.c1) + "\t" +
            sym_name(p.c2) + "\t" + fmt_score(p.score) + "\t" +
            std::to_string(p.shared_count) + "\t" + sym_name(p.fresh) + "\n";
    }
    std::string tp = "rank\tt1\tt2\tfresh\n";
    for (size_t i = 0; i < st.type_pairs.size(); ++i) {
      const AcceptedTypePair& p = st.type_pairs[i];
      tp += std::to_string(i + 1) + "\t" + sym_name(p.t1) + "\t" +
            sym_name(p.t2) + "\t" + sym_name(p.fresh) + "\n";
    }

    std::string metrics;
    metrics += "const_pairs=" + std::to_string(st.const_pairs.size()) + "\n";
    metrics += "type_pairs=" + std::to_string(st.type_pairs.size()) + "\n";
    metrics +=
        "discarded_by_type=" + std::to_string(st.discarded_by_type) + "\n";
    metrics +=
        "iterations=" + std::to_string(session.iterations_done()) + "\n";
    metrics += "skipped_distributions=" +
               std::to_string(session.norm_stats().skipped_distributions.size()) +
               "\n";
    if (!opts.truth_path.empty()) {
      std::unordered_map<Symbol, Symbol> truth = read_truth(opts.truth_path);
      TruthMetrics tm = evaluate_against_truth(st, truth);
      metrics += "truth_total=" + std::to_string(truth.size()) + "\n";
      metrics += "total_checked=" + std::to_string(tm.total_checked) + "\n";
      metrics += "total_correct=" + std::to_string(tm.total_correct) + "\n";
      metrics += "correct_before_first_error=" +
                 std::to_string(tm.correct_before_first_error) + "\n";
      metrics += "first_error_rank=";
      metrics += tm.first_error_rank == TruthMetrics::kNoError
                     ? "inf"
                     : std::to_string(tm.first_error_rank);
      metrics += "\n";
    }
    std::cout << metrics;

    if (!opts.out_dir.empty()) {
      ensure_dir(opts.out_dir);
      mf.emit(opts.out_dir, "const_pairs.tsv", cp);
      mf.emit(opts.out_dir, "type_pairs.tsv", tp);
      mf.emit(opts.out_dir, "metrics.txt", metrics);
      mf.write(opts.out_dir);
    }
    return 0;
  });
}

int cmd_gen(const GenOpts& opts) {
  if (!opts.config_path.empty())
    if (int rc = missing_inputs({opts.config_path})) return rc;
  return run_guarded([&] {
    GenConfig cfg;
    cfg.seed = opts.seed;
    cfg.n_constants = opts.n_constants;
    cfg.n_theorems = opts.n_theorems;
    cfg.noise = opts.noise;
    cfg.rename_types = opts.rename_types;
    cfg.name_offset = opts.name_offset;
    cfg.property_mix = opts.mix;
    if (!opts.config_path.empty()) {
      std::istringstream in(read_file(opts.config_path));
      std::string line;
      size_t lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
          throw ConfigError("bad config line " + std::to_string(lineno) +
                            ": " + line);
        auto trim = [](std::string s) {
          size_t a = s.find_first_not_of(" \t\r");
          size_t b = s.find_last_not_of(" \t\r");
          return a == std::string::npos ? std::string()
                                        : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        try {
          if (key == "seed") cfg.seed = std::stoull(val);
          else if (key == "constants") cfg.n_constants = uint32_t(std::stoul(val));
          else if (key == "theorems") cfg.n_theorems = uint32_t(std::stoul(val));
          else if (key == "noise") cfg.noise = std::stod(val);
          else if (key == "rename_types") cfg.rename_types = val == "true" || val == "on" || val == "1";
          else if (key == "offset") cfg.name_offset = uint32_t(std::stoul(val));
          else if (key.rfind("mix.", 0) == 0) cfg.property_mix[key.substr(4)] = std::stod(val);
          else throw ConfigError("unknown config key: " + key);
        } catch (const std::logic_error&) {
          throw ConfigError("bad value for " + key + ": " + val);
        }
      }
    }

    Manifest mf("gen");
    mf.add("flag.seed", cfg.seed);
    mf.add("flag.constants", uint64_t(cfg.n_constants));
    mf.add("flag.theorems", uint64_t(cfg.n_theorems));
    mf.add("flag.noise", fmt_score(cfg.noise));
    mf.add("flag.rename_types", cfg.rename_types ? "true" : "false");

    TwinCorpus twins = generate_twins(cfg);
    std::string t1 = "c1\tc2\n";
    for (const auto& [a, b] : twins.const_truth)
      t1 += sym_name(a) + "\t" + sym_name(b) + "\n";
    std::string t2 = "t1\tt2\n";
    for (const auto& [a, b] : twins.type_truth)
      t2 += sym_name(a) + "\t" + sym_name(b) + "\n";

    std::cout << "constants: " << twins.const_truth.size() << "\n"
              << "theorems_lib1: " << twins.lib1.theorems.size() << "\n"
              << "theorems_lib2: " << twins.lib2.theorems.size() << "\n";

    ensure_dir(opts.out_dir);
    mf.emit(opts.out_dir, "lib1.holx", serialize_library(twins.lib1));
    mf.emit(opts.out_dir, "lib2.holx", serialize_library(twins.lib2));
    mf.emit(opts.out_dir, "const_truth.tsv", t1);
    mf.emit(opts.out_dir, "type_truth.tsv", t2);
    mf.write(opts.out_dir);
    return 0;
  });
}

}  // namespace holmatch
