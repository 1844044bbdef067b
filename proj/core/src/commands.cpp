#include "ltd/commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include <spdlog/spdlog.h>

#include "ltd/cube_io.hpp"
#include "ltd/eval.hpp"
#include "ltd/fusion.hpp"

namespace ltd {

namespace fs = std::filesystem;

int exit_code(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::Io: return kExitIo;
  case ErrorCode::BadMagic: return kExitBadMagic;
  case ErrorCode::Truncated: return kExitTruncated;
  case ErrorCode::NonFinite: return kExitNonFinite;
  case ErrorCode::Config: return kExitConfig;
  case ErrorCode::NumericFailure: return kExitNumeric;
  case ErrorCode::InvalidInput: return kExitInvalidInput;
  case ErrorCode::DimensionMismatch: return kExitDimension;
  case ErrorCode::DegenerateInput: return kExitDegenerate;
  }
  return kExitInternal;
}

namespace {

template <class F>
int guarded(std::ostream &err, F &&body) {
  try {
    return body();
  } catch (const Error &e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

void ensure_dir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::Io, "cannot create output directory " + dir.string());
}

std::ofstream open_text(const fs::path &path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error(ErrorCode::Io, "cannot create " + path.string());
  return f;
}

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_fixed(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string summary_line(const char *name, const FiveNumber &f) {
  return std::string(name) + ": min=" + fmt_fixed(f.min, 6) + " q1=" + fmt_fixed(f.q1, 6) +
         " median=" + fmt_fixed(f.median, 6) + " q3=" + fmt_fixed(f.q3, 6) + " max=" + fmt_fixed(f.max, 6);
}

} // namespace

DetectionResult detect(const Tensor3 &h, const RunConfig &cfg) {
  const Tensor3 input = cfg.solver.normalize_input ? normalize_cube(h) : h;
  SolveResult solved = cfg.solver.rank_reduction ? solve_ltd_rr(input, cfg.solver) : solve_ltd(input, cfg.solver);
  DetectionResult r;
  r.T1 = spectral_map(solved.state.E1);
  r.T2 = spatial_map(solved.state.E2);
  r.T = fuse(r.T1, r.T2, cfg.solver.fusion_mode, cfg.filter);
  r.state = std::move(solved.state);
  r.trace = std::move(solved.trace);
  return r;
}

RunConfig synthetic_config() {
  RunConfig cfg;
  LtdParams &p = cfg.solver;
  p.lambda1 = 1e-2;
  p.lambda2 = 0.1;
  p.lambda3 = 1.0;
  p.lambda4 = 0.2;
  p.lambda5 = 1e-3;
  p.lambda6 = 1e-2;
  p.rho.fill(1e-2);
  p.b = 3;
  p.max_iter = 100;
  p.rel_tol = 1e-3;
  p.seed = 7;
  // Planted anomalies are single pixels; a large eps smears them out.
  cfg.filter.eps = 1e-4;
  return cfg;
}

void write_trace_csv(const fs::path &path, const Trace &trace) {
  auto f = open_text(path);
  f << "iter,F,step,r,seconds\n";
  for (std::size_t t = 0; t < trace.size(); ++t)
    f << t << ',' << fmt_g(trace.objective[t]) << ',' << fmt_g(trace.step[t]) << ',' << trace.rank[t] << ','
      << fmt_g(trace.seconds[t]) << '\n';
  if (!f) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

void write_detection(const fs::path &dir, const DetectionResult &r) {
  ensure_dir(dir);
  write_pgm16(dir / "T1.pgm", r.T1);
  write_pgm16(dir / "T2.pgm", r.T2);
  write_pgm16(dir / "T.pgm", r.T);
  write_csv_map(dir / "T.csv", r.T);
  write_csv_map(dir / "T1.csv", r.T1);
  write_csv_map(dir / "T2.csv", r.T2);
  write_trace_csv(dir / "trace.csv", r.trace);
}

int cmd_detect(const fs::path &config, const fs::path &cube, const fs::path &out_dir, std::ostream &out,
               std::ostream &err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config);
    const Tensor3 h = read_cube(cube);
    spdlog::info("cube {}x{}x{}, b={}, rank reduction {}", h.n1(), h.n2(), h.n3(), cfg.solver.b,
                 cfg.solver.rank_reduction ? "on" : "off");
    const DetectionResult r = detect(h, cfg);
    write_detection(out_dir, r);
    out << "iterations: " << r.trace.size() - 1 << "\nfinal rank: " << r.state.r
        << "\nseconds: " << fmt_fixed(r.trace.seconds.back(), 3) << '\n';
    return kExitOk;
  });
}

int cmd_eval(const fs::path &scores, const fs::path &mask, const fs::path &out_dir, std::ostream &out,
             std::ostream &err) {
  return guarded(err, [&] {
    const Map2D score = read_csv_map(scores);
    const GroundTruth gt = read_mask(mask);
    const EvalReport rep = evaluate(score, gt);
    ensure_dir(out_dir);
    {
      auto f = open_text(out_dir / "roc.csv");
      f << "fpr,tpr\n";
      for (const auto &p : rep.roc) f << fmt_g(p.fpr) << ',' << fmt_g(p.tpr) << '\n';
    }
    {
      auto f = open_text(out_dir / "report.txt");
      f << "AUC: " << fmt_fixed(100.0 * rep.auc, 2) << "%\n"
        << "AUC (raw): " << fmt_g(rep.auc) << '\n'
        << "anomalies: " << gt.positives() << " of " << gt.n1 * gt.n2 << " pixels\n"
        << summary_line("background", rep.separability.background) << '\n'
        << summary_line("anomaly", rep.separability.anomaly) << '\n';
    }
    out << "AUC: " << fmt_fixed(100.0 * rep.auc, 2) << '\n';
    return kExitOk;
  });
}

int cmd_synth(const SynthSpec &spec, const fs::path &out_dir, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    const SynthData d = synth_dataset(spec);
    ensure_dir(out_dir);
    write_cube(out_dir / "cube.hsc", d.H);
    write_mask(out_dir / "mask.pgm", d.truth);
    out << "wrote " << (out_dir / "cube.hsc").string() << " and " << (out_dir / "mask.pgm").string() << '\n';
    return kExitOk;
  });
}

int cmd_bench(const fs::path &out_dir, const std::vector<BenchCase> &cases, std::ostream &out,
              std::ostream &err) {
  return guarded(err, [&] {
    ensure_dir(out_dir);
    auto f = open_text(out_dir / "bench.csv");
    f << "n1,n2,n3,variant,iterations,seconds,final_r,auc\n";
    for (const BenchCase &c : cases) {
      SynthSpec spec;
      spec.n1 = c.n1;
      spec.n2 = c.n2;
      spec.n3 = c.n3;
      spec.anomalies = std::min<Index>(40, (c.n1 * c.n2 - 1) / 10);
      const SynthData d = synth_dataset(spec);
      for (bool rr : {false, true}) {
        RunConfig cfg = synthetic_config();
        cfg.solver.rank_reduction = rr;
        const DetectionResult r = detect(d.H, cfg);
        const double a = spec.anomalies > 0 ? auc(roc_curve(r.T, d.truth)) : 0.0;
        const char *variant = rr ? "ltd_rr" : "ltd";
        f << c.n1 << ',' << c.n2 << ',' << c.n3 << ',' << variant << ',' << r.trace.size() - 1 << ','
          << fmt_g(r.trace.seconds.back()) << ',' << r.state.r << ',' << fmt_g(a) << '\n';
        out << c.n1 << 'x' << c.n2 << 'x' << c.n3 << ' ' << variant << ": " << fmt_fixed(r.trace.seconds.back(), 3)
            << " s, " << r.trace.size() - 1 << " iterations, r=" << r.state.r << ", AUC=" << fmt_fixed(100.0 * a, 2)
            << '\n';
      }
    }
    if (!f) throw Error(ErrorCode::Io, "write failed: " + (out_dir / "bench.csv").string());
    return kExitOk;
  });
}

} // namespace ltd
