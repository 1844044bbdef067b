#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ltd/config.hpp"
#include "ltd/error.hpp"
#include "ltd/solver.hpp"
#include "ltd/synth.hpp"

namespace ltd {

/// Process exit statuses.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitBadMagic = 3,
  kExitTruncated = 4,
  kExitNonFinite = 5,
  kExitConfig = 6,
  kExitNumeric = 7,
  kExitInvalidInput = 8,
  kExitDimension = 9,
  kExitDegenerate = 10,
  kExitInternal = 70,
};

int exit_code(ErrorCode code) noexcept;

struct DetectionResult {
  Map2D T1;
  Map2D T2;
  Map2D T;
  SolverState state;
  Trace trace;
};

/// Solve (with or without rank reduction, per config) and fuse the maps.
/// The cube is min-max normalized first when the config asks for it.
DetectionResult detect(const Tensor3 &h, const RunConfig &cfg);

/// Parameters tuned for scenes produced by synth_dataset.
RunConfig synthetic_config();

/// Writes iter,F,step,r,seconds rows.
void write_trace_csv(const std::filesystem::path &path, const Trace &trace);

/// Writes T1.pgm, T2.pgm, T.pgm, T.csv, T1.csv, T2.csv and trace.csv.
void write_detection(const std::filesystem::path &dir, const DetectionResult &r);

/// The CLI commands. Each reports errors on `err` and returns an ExitCode.
int cmd_detect(const std::filesystem::path &config, const std::filesystem::path &cube,
               const std::filesystem::path &out_dir, std::ostream &out, std::ostream &err);
int cmd_eval(const std::filesystem::path &scores, const std::filesystem::path &mask,
             const std::filesystem::path &out_dir, std::ostream &out, std::ostream &err);
int cmd_synth(const SynthSpec &spec, const std::filesystem::path &out_dir, std::ostream &out,
              std::ostream &err);

struct BenchCase {
  Index n1, n2, n3;
};

/// Runs solve_ltd and solve_ltd_rr on synthetic scenes and writes bench.csv
/// (n1, n2, n3, variant, iterations, seconds, final_r, auc).
int cmd_bench(const std::filesystem::path &out_dir, const std::vector<BenchCase> &cases,
              std::ostream &out, std::ostream &err);

} // namespace ltd
