#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holmatch/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"holmatch — cross-library constant and type alignment"};
  app.set_version_flag("--version", std::string(holmatch::kToolVersion));
  app.require_subcommand(1);

  holmatch::IngestOpts ingest;
  CLI::App* ing = app.add_subcommand(
      "ingest", "Parse exchange files into one library with stats");
  ing->add_option("inputs", ingest.inputs, "Exchange-format files")
      ->required()
      ->expected(-1);
  ing->add_option("-o,--out", ingest.out_dir, "Output directory");
  ing->add_option("--basis", ingest.basis_path,
                  "Operator-to-basis mapping file");
  ing->add_option("--name", ingest.name, "Library name override");
  bool no_collapse = false;
  ing->add_flag("--no-collapse", no_collapse,
                "Keep plain constant-equality theorems");

  holmatch::MineOpts mine;
  CLI::App* mi = app.add_subcommand(
      "mine", "Report named algebraic properties of one library");
  mi->add_option("input", mine.input, "Exchange-format file")->required();
  mi->add_option("-o,--out", mine.out_dir, "Output directory");
  mi->add_option("--norm", mine.level, "Normalization level (0, 1 or 2)")
      ->check(CLI::Range(0, 2));
  mi->add_option("--dist-cap", mine.distribution_size_cap,
                 "Distribution node budget");

  holmatch::MatchOpts match;
  std::string typecheck = "on";
  CLI::App* ma =
      app.add_subcommand("match", "Align constants across two libraries");
  ma->add_option("lib1", match.input1, "First library")->required();
  ma->add_option("lib2", match.input2, "Second library")->required();
  ma->add_option("-o,--out", match.out_dir, "Output directory");
  ma->add_option("--norm", match.level, "Normalization level (0, 1 or 2)")
      ->check(CLI::Range(0, 2));
  ma->add_option("--score", match.scheme, "Scoring scheme (0, 1 or 2)")
      ->check(CLI::Range(0, 2));
  ma->add_option("--mode", match.mode, "single or iter")
      ->check(CLI::IsMember({"single", "iter"}));
  ma->add_option("--iterations", match.iterations, "Iteration budget");
  ma->add_option("--typecheck", typecheck, "on or off")
      ->check(CLI::IsMember({"on", "off"}));
  ma->add_option("--truth", match.truth_path,
                 "Constant-truth TSV for quality metrics");
  ma->add_option("-j,--jobs", match.jobs, "Worker threads (0: all cores)");
  ma->add_option("--dist-cap", match.distribution_size_cap,
                 "Distribution node budget");
  ma->add_flag("--full-rebuild", match.full_rebuild,
               "Rebuild indices every iteration (debugging aid)");

  holmatch::GenOpts gen;
  CLI::App* ge = app.add_subcommand(
      "gen", "Generate a twin corpus with known ground truth");
  ge->add_option("-o,--out", gen.out_dir, "Output directory")->required();
  ge->add_option("--config", gen.config_path, "key=value config file");
  ge->add_option("--seed", gen.seed, "RNG seed");
  ge->add_option("--constants", gen.n_constants, "Constant count");
  ge->add_option("--theorems", gen.n_theorems, "Theorem count");
  ge->add_option("--noise", gen.noise, "One-sided theorem fraction")
      ->check(CLI::Range(0.0, 1.0));
  bool keep_type_names = false;
  ge->add_flag("--keep-type-names", keep_type_names,
               "Twin keeps the original type constructor names");
  ge->add_option("--offset", gen.name_offset, "Numeric name-tail offset");

  CLI11_PARSE(app, argc, argv);

  ingest.collapse = !no_collapse;
  gen.rename_types = !keep_type_names;
  match.typecheck = typecheck == "on";
  if (ing->parsed()) return holmatch::cmd_ingest(ingest);
  if (mi->parsed()) return holmatch::cmd_mine(mine);
  if (ma->parsed()) return holmatch::cmd_match(match);
  if (ge->parsed()) return holmatch::cmd_gen(gen);
  return 1;
}
