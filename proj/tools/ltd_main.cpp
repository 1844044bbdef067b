#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ltd/commands.hpp"

int main(int argc, char **argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("ltd"));
  spdlog::set_level(spdlog::level::warn);

  CLI::App app{"Layered tensor decomposition for hyperspectral anomaly detection"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to standard error");

  std::string config, cube, out_dir, scores, mask;

  auto *detect = app.add_subcommand("detect", "Run the detector on an HSC1 cube");
  detect->add_option("--config", config, "key=value configuration file")->required();
  detect->add_option("--cube", cube, "Input cube (HSC1)")->required();
  detect->add_option("--out", out_dir, "Output directory")->required();

  auto *eval = app.add_subcommand("eval", "Score a detection map against a mask");
  eval->add_option("--scores", scores, "Score map (CSV)")->required();
  eval->add_option("--mask", mask, "Ground-truth mask (P5 PGM)")->required();
  eval->add_option("--out", out_dir, "Output directory")->required();

  ltd::SynthSpec spec;
  auto *synth = app.add_subcommand("synth", "Write a synthetic cube and its mask");
  synth->add_option("--n1", spec.n1, "Rows")->check(CLI::PositiveNumber);
  synth->add_option("--n2", spec.n2, "Columns")->check(CLI::PositiveNumber);
  synth->add_option("--n3", spec.n3, "Bands")->check(CLI::PositiveNumber);
  synth->add_option("--b", spec.b, "Spectral factor width")->check(CLI::PositiveNumber);
  synth->add_option("--rank", spec.rank, "Planted tubal rank")->check(CLI::PositiveNumber);
  synth->add_option("--anomalies", spec.anomalies, "Number of anomalous pixels")->check(CLI::NonNegativeNumber);
  synth->add_option("--sigma", spec.sigma, "Gaussian noise level")->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", spec.seed, "Random seed");
  synth->add_option("--out", out_dir, "Output directory")->required();

  bool quick = false;
  auto *bench = app.add_subcommand("bench", "Time the solver with and without rank reduction");
  bench->add_option("--out", out_dir, "Output directory")->required();
  bench->add_flag("--quick", quick, "Only the smallest grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? ltd::kExitOk : ltd::kExitUsage;
  }
  if (verbose) spdlog::set_level(spdlog::level::info);

  if (*detect) return ltd::cmd_detect(config, cube, out_dir, std::cout, std::cerr);
  if (*eval) return ltd::cmd_eval(scores, mask, out_dir, std::cout, std::cerr);
  if (*synth) return ltd::cmd_synth(spec, out_dir, std::cout, std::cerr);
  if (*bench) {
    std::vector<ltd::BenchCase> cases{{32, 32, 20}};
    if (!quick) cases.push_back({64, 64, 30});
    return ltd::cmd_bench(out_dir, cases, std::cout, std::cerr);
  }
  return ltd::kExitUsage;
}
