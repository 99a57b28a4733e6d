#include <doctest.h>

#include <fcntl.h>
#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "holmatch/commands.hpp"
#include "holmatch/util.hpp"

using namespace holmatch;
namespace fs = std::filesystem;

namespace {

// The commands narrate to stdout; keep the test log readable.
struct Quiet {
  int saved;
  Quiet() : saved(dup(1)) {
    int null = open("/dev/null", O_WRONLY);
    dup2(null, 1);
    close(null);
  }
  ~Quiet() {
    fflush(stdout);
    dup2(saved, 1);
    close(saved);
  }
};

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("holmatch_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string sub(const std::string& name) const {
    return (path / name).string();
  }
};

// Manifest minus its duration line, which legitimately varies run to run.
std::string stable_manifest(const std::string& dir) {
  std::string text = read_file(dir + "/manifest.txt");
  size_t pos = text.rfind("duration_ms=");
  REQUIRE(pos != std::string::npos);
  return text.substr(0, pos);
}

int gen_into(const std::string& dir, uint64_t seed, uint32_t n_constants,
             uint32_t n_theorems, double noise = 0.0) {
  GenOpts g;
  g.out_dir = dir;
  g.seed = seed;
  g.n_constants = n_constants;
  g.n_theorems = n_theorems;
  g.noise = noise;
  Quiet q;
  return cmd_gen(g);
}

}  // namespace

TEST_CASE("gen writes a reproducible corpus") {
  TempDir d1("gen1"), d2("gen2");
  REQUIRE(gen_into(d1.sub(""), 7, 15, 35) == 0);
  REQUIRE(gen_into(d2.sub(""), 7, 15, 35) == 0);
  for (const char* f :
       {"lib1.holx", "lib2.holx", "const_truth.tsv", "type_truth.tsv"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(d1.path / f));
    CHECK(read_file(d1.sub(f)) == read_file(d2.sub(f)));
  }
  CHECK(stable_manifest(d1.sub("")) == stable_manifest(d2.sub("")));
  CHECK(read_file(d1.sub("manifest.txt")).rfind("command=gen", 0) == 0);
  // truth files carry a header row
  CHECK(read_file(d1.sub("const_truth.tsv")).rfind("c1\tc2\n", 0) == 0);
  CHECK(read_file(d1.sub("type_truth.tsv")).rfind("t1\tt2\n", 0) == 0);
}

TEST_CASE("gen reads key=value configuration files") {
  TempDir d("genc");
  write_file(d.sub("gen.conf"),
             "# twin corpus\n"
             "seed = 7\n"
             "constants = 15\n"
             "theorems = 35\n"
             "noise = 0\n"
             "mix.filler = 0\n"
             "mix.Comm = 1\n");
  GenOpts g;
  g.out_dir = d.sub("out");
  g.config_path = d.sub("gen.conf");
  {
    Quiet q;
    REQUIRE(cmd_gen(g) == 0);
  }
  CHECK(fs::exists(fs::path(g.out_dir) / "lib1.holx"));

  write_file(d.sub("bad.conf"), "noise = 2\n");
  GenOpts bad;
  bad.out_dir = d.sub("out2");
  bad.config_path = d.sub("bad.conf");
  Quiet q;
  CHECK(cmd_gen(bad) == 1);
}

TEST_CASE("ingest round-trips its own output and flags missing files") {
  TempDir d("ing");
  REQUIRE(gen_into(d.sub("gen"), 9, 12, 30) == 0);

  IngestOpts i1;
  i1.inputs = {d.sub("gen/lib1.holx")};
  i1.out_dir = d.sub("pass1");
  {
    Quiet q;
    REQUIRE(cmd_ingest(i1) == 0);
  }
  REQUIRE(fs::exists(fs::path(i1.out_dir) / "library.holx"));
  std::string stats = read_file(d.sub("pass1/stats.txt"));
  CHECK(stats.find("library: alpha") != std::string::npos);
  CHECK(stats.find("theorems:") != std::string::npos);

  IngestOpts i2;
  i2.inputs = {d.sub("pass1/library.holx")};
  i2.out_dir = d.sub("pass2");
  {
    Quiet q;
    REQUIRE(cmd_ingest(i2) == 0);
  }
  CHECK(read_file(d.sub("pass1/library.holx")) ==
        read_file(d.sub("pass2/library.holx")));

  IngestOpts missing;
  missing.inputs = {d.sub("nope.holx")};
  Quiet q;
  CHECK(cmd_ingest(missing) == 2);
}

TEST_CASE("mine reports properties to a file when asked") {
  TempDir d("mine");
  REQUIRE(gen_into(d.sub("gen"), 11, 14, 40) == 0);
  MineOpts m;
  m.input = d.sub("gen/lib1.holx");
  m.out_dir = d.sub("out");
  {
    Quiet q;
    REQUIRE(cmd_mine(m) == 0);
  }
  std::string tsv = read_file(d.sub("out/properties.tsv"));
  CHECK(tsv.find("pattern-name\tconstant-count\ttheorem-count") !=
        std::string::npos);
  CHECK(tsv.find("Comm\t") != std::string::npos);
}

TEST_CASE("match produces deterministic rankings and metrics") {
  TempDir d("match");
  REQUIRE(gen_into(d.sub("gen"), 13, 14, 36) == 0);
  MatchOpts m;
  m.input1 = d.sub("gen/lib1.holx");
  m.input2 = d.sub("gen/lib2.holx");
  m.truth_path = d.sub("gen/const_truth.tsv");
  m.jobs = 2;
  m.out_dir = d.sub("out1");
  {
    Quiet q;
    REQUIRE(cmd_match(m) == 0);
  }
  std::string cp = read_file(d.sub("out1/const_pairs.tsv"));
  CHECK(cp.rfind("rank\tc1\tc2\tscore\tshared\tfresh\n", 0) == 0);
  std::string metrics = read_file(d.sub("out1/metrics.txt"));
  CHECK(metrics.find("first_error_rank=inf") != std::string::npos);
  CHECK(metrics.find("discarded_by_type=") != std::string::npos);

  m.out_dir = d.sub("out2");
  {
    Quiet q;
    REQUIRE(cmd_match(m) == 0);
  }
  CHECK(read_file(d.sub("out1/const_pairs.tsv")) ==
        read_file(d.sub("out2/const_pairs.tsv")));
  CHECK(read_file(d.sub("out1/metrics.txt")) ==
        read_file(d.sub("out2/metrics.txt")));
  CHECK(stable_manifest(d.sub("out1")) == stable_manifest(d.sub("out2")));

  MatchOpts bad = m;
  bad.out_dir = d.sub("out3");
  bad.mode = "bogus";
  {
    Quiet q;
    CHECK(cmd_match(bad) == 1);
  }
  MatchOpts conflict = m;
  conflict.out_dir = d.sub("out4");
  conflict.mode = "single";
  conflict.iterations = 7;
  Quiet q;
  CHECK(cmd_match(conflict) == 1);
}
