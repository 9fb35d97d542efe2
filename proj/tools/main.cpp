#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lassoscreen/config.hpp"
#include "lassoscreen/errors.hpp"
#include "lassoscreen/lasso.hpp"
#include "lassoscreen/matrix_io.hpp"
#include "lassoscreen/projection.hpp"
#include "lassoscreen/region.hpp"
#include "lassoscreen/screening.hpp"
#include "lassoscreen/solvers.hpp"
#include "lassoscreen/synthetic.hpp"

namespace {

using namespace lassoscreen;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitSafetyViolation = 1;
constexpr int kExitIoError = 2;
constexpr int kExitNumericalError = 3;

double seconds_since(const Clock::time_point& t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Flags mirror config keys; only flags the user actually passed override the
// config file.
struct Cli {
  std::string config_path;
  std::optional<double> lambda_ratio;
  std::optional<int> m;
  std::optional<double> solver_tol;
  std::optional<double> lasso_tol;
  std::optional<double> margin;
  std::optional<std::uint64_t> seed;
  std::optional<int> parallelism;
  std::optional<int> n;
  std::optional<int> p;
  std::optional<std::string> dict;
  std::optional<std::string> target;
  std::optional<std::string> out;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file");
    cmd->add_option("--lambda-ratio", lambda_ratio, "lambda / lambda_max in (0, 1]");
    cmd->add_option("--m", m, "number of half-space constraints");
    cmd->add_option("--solver-tol", solver_tol, "screening solver tolerance");
    cmd->add_option("--lasso-tol", lasso_tol, "lasso KKT tolerance");
    cmd->add_option("--margin", margin, "rejection margin on mu < 1");
    cmd->add_option("--seed", seed, "seed for synthetic instances");
    cmd->add_option("--parallelism", parallelism, "worker threads for screening");
    cmd->add_option("--n", n, "synthetic instance rows");
    cmd->add_option("--p", p, "synthetic instance columns");
    cmd->add_option("--dict", dict, "dictionary matrix path");
    cmd->add_option("--target", target, "target vector path");
    cmd->add_option("--out", out, "output path (default: stdout)");
  }

  Config resolve() const {
    Config cfg = config_path.empty() ? Config{} : load_config_file(config_path);
    if (lambda_ratio) cfg.lambda_ratio = *lambda_ratio;
    if (m) cfg.m = *m;
    if (solver_tol) cfg.solver_tol = *solver_tol;
    if (lasso_tol) cfg.lasso_tol = *lasso_tol;
    if (margin) cfg.margin = *margin;
    if (seed) cfg.seed = *seed;
    if (parallelism) cfg.parallelism = *parallelism;
    if (n) cfg.n = *n;
    if (p) cfg.p = *p;
    if (dict) cfg.dict = *dict;
    if (target) cfg.target = *target;
    if (out) cfg.out = *out;
    cfg.validate();
    return cfg;
  }
};

LassoInstance load_or_synthesize(const Config& cfg) {
  if (!cfg.dict.empty() || !cfg.target.empty()) {
    if (cfg.dict.empty() || cfg.target.empty())
      throw std::invalid_argument("need both --dict and --target (or neither, for synthetic)");
    return load_instance(cfg.dict, cfg.target, cfg.lambda_ratio);
  }
  const SyntheticData data = make_synthetic(cfg.n, cfg.p, cfg.seed);
  const double lmax = compute_lambda_max(data.dictionary, data.target).value;
  if (lmax <= 0.0) throw NumericalError("synthetic instance has lambda_max = 0");
  return make_lasso_instance(data.dictionary, data.target, cfg.lambda_ratio * lmax);
}

ScreenOptions screen_options(const Config& cfg) {
  ScreenOptions opts;
  opts.solver_tol = cfg.solver_tol;
  opts.margin = cfg.margin;
  opts.parallelism = cfg.parallelism;
  return opts;
}

void write_screen_csv(std::ostream& os, const ScreeningReport& report) {
  os << "feature_index,mu_pos,mu_neg,rejected\n";
  char buf[96];
  for (Eigen::Index i = 0; i < report.mu_pos.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%d", static_cast<long long>(i),
                  report.mu_pos[i], report.mu_neg[i], report.rejected[i] ? 1 : 0);
    os << buf << '\n';
  }
}

void print_screen_summary(const Config& cfg, const ScreeningReport& report) {
  std::printf("screen: p=%lld m=%d lambda_ratio=%g rejected=%zu fraction=%.4f\n",
              static_cast<long long>(report.mu_pos.size()), report.m_used, cfg.lambda_ratio,
              report.rejection_count(), report.rejection_fraction());
  std::printf("timing: region=%.4fs project=%.4fs solve=%.4fs total=%.4fs\n",
              report.timing.region_seconds, report.timing.project_seconds,
              report.timing.solve_seconds, report.timing.total_seconds);
  std::printf("solver: solves=%ld newton_total=%ld newton_max=%d\n",
              report.solver_stats.num_solves, report.solver_stats.total_iterations,
              report.solver_stats.max_iterations);
}

int cmd_screen(const Config& cfg) {
  const LassoInstance inst = load_or_synthesize(cfg);
  const ScreeningReport report = screen(inst, cfg.m, screen_options(cfg));
  if (report.status == ScreenStatus::region_empty) {
    std::fprintf(stderr, "screen: constructed region is empty; this is a construction bug\n");
    return kExitNumericalError;
  }
  if (cfg.out.empty()) {
    write_screen_csv(std::cout, report);
  } else {
    std::ofstream file(cfg.out, std::ios::trunc);
    if (!file) throw IoError(IoCode::write_failed, cfg.out + ": cannot open for writing");
    write_screen_csv(file, report);
  }
  print_screen_summary(cfg, report);
  return kExitOk;
}

int cmd_verify(const Config& cfg) {
  const LassoInstance inst = load_or_synthesize(cfg);
  const ScreeningReport report = screen(inst, cfg.m, screen_options(cfg));
  if (report.status == ScreenStatus::region_empty) {
    std::fprintf(stderr, "verify: constructed region is empty; this is a construction bug\n");
    return kExitNumericalError;
  }
  const VerificationOutcome outcome = verify_screening(inst, report, cfg.lasso_tol);
  std::printf("verify: rejected=%zu/%lld kkt_padded=%.3e objective_delta=%.3e\n",
              report.rejection_count(), static_cast<long long>(inst.num_features()),
              outcome.padded_kkt_violation,
              std::abs(outcome.full_objective - outcome.reduced_objective));
  if (!outcome.violations.empty()) {
    for (const SafetyViolation& v : outcome.violations) {
      std::printf("FALSIFIED: feature=%lld mu_pos=%.12g mu_neg=%.12g w=%.12g\n",
                  static_cast<long long>(v.feature), v.mu_pos, v.mu_neg, v.coefficient);
    }
    return kExitSafetyViolation;
  }
  if (!outcome.passed) {
    std::printf("verify: FAILED (kkt_ok=%d objective_ok=%d)\n", outcome.kkt_ok ? 1 : 0,
                outcome.objective_ok ? 1 : 0);
    return kExitSafetyViolation;
  }
  std::printf("verify: OK\n");
  return kExitOk;
}

int cmd_gen(const Config& cfg) {
  if (cfg.dict.empty() || cfg.target.empty())
    throw std::invalid_argument("gen: --dict and --target output paths are required");
  const SyntheticData data = make_synthetic(cfg.n, cfg.p, cfg.seed);
  auto format_of = [](const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".txt") == 0
               ? MatrixFormat::delimited_text
               : MatrixFormat::raw_float64;
  };
  save_matrix(cfg.dict, data.dictionary, format_of(cfg.dict));
  save_matrix(cfg.target, data.target, format_of(cfg.target));
  std::printf("gen: wrote %dx%d dictionary to %s and target to %s (seed=%llu)\n", cfg.n, cfg.p,
              cfg.dict.c_str(), cfg.target.c_str(),
              static_cast<unsigned long long>(cfg.seed));
  return kExitOk;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// Median of 5 timed calls, first call discarded as warmup.
template <typename Fn>
double timed_median_us(const Fn& fn) {
  fn();
  std::vector<double> times;
  times.reserve(5);
  for (int rep = 0; rep < 5; ++rep) {
    const auto t0 = Clock::now();
    fn();
    times.push_back(seconds_since(t0) * 1e6);
  }
  return median(std::move(times));
}

int cmd_bench(const Config& cfg) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::trunc);
    if (!file) throw IoError(IoCode::write_failed, cfg.out + ": cannot open for writing");
    os = &file;
  }
  *os << "m,lambda_ratio,rejection_fraction,median_reduced_us,median_full_us,time_ratio,"
         "screen_seconds,lasso_full_seconds,lasso_reduced_seconds,end_to_end_speedup\n";

  const SyntheticData data = make_synthetic(cfg.n, cfg.p, cfg.seed);
  const double lmax = compute_lambda_max(data.dictionary, data.target).value;
  // The 1.0 row is the degenerate point-region case: mu is exact, no solver.
  const std::vector<double> ratios = {0.3, 0.4, 0.5, 0.7, 0.9, 1.0};
  const std::vector<int> ms = {1, 2, 3, 5};

  for (double ratio : ratios) {
    const LassoInstance inst = make_lasso_instance(data.dictionary, data.target, ratio * lmax);
    const auto t_full = Clock::now();
    const LassoSolution full = solve_lasso(inst, cfg.lasso_tol, 100000);
    const double lasso_full_s = seconds_since(t_full);
    if (!full.converged)
      std::fprintf(stderr, "bench: full lasso not converged at ratio %g\n", ratio);

    for (int m : ms) {
      if (m >= inst.num_features()) continue;
      const auto t_screen = Clock::now();
      const ScreeningReport report = screen(inst, m, screen_options(cfg));
      const double screen_s = seconds_since(t_screen);
      if (report.status != ScreenStatus::ok) continue;

      // Reduced lasso on the surviving columns.
      std::vector<Eigen::Index> kept;
      for (Eigen::Index i = 0; i < inst.num_features(); ++i)
        if (!report.rejected[i]) kept.push_back(i);
      double lasso_reduced_s = 0.0;
      if (!kept.empty() && kept.size() < static_cast<std::size_t>(inst.num_features())) {
        Eigen::MatrixXd b_kept(inst.dim(), static_cast<Eigen::Index>(kept.size()));
        for (std::size_t j = 0; j < kept.size(); ++j)
          b_kept.col(static_cast<Eigen::Index>(j)) = inst.dictionary.col(kept[j]);
        const LassoInstance reduced = make_lasso_instance(b_kept, inst.target, inst.lambda);
        const auto t_red = Clock::now();
        (void)solve_lasso(reduced, cfg.lasso_tol, 100000);
        lasso_reduced_s = seconds_since(t_red);
      } else {
        lasso_reduced_s = lasso_full_s;
      }

      // Per-feature solver comparison on a feature sample. The point-region
      // rows (m_used = 0) involve no solver at all.
      double med_reduced = 0.0;
      double med_full = 0.0;
      if (report.m_used > 0) {
        const NormalizedRegion nr = normalize(report.region);
        const ProjectionBasis basis = orthonormal_basis(nr.normals);
        const int sample = static_cast<int>(std::min<Eigen::Index>(inst.num_features(), 24));
        std::vector<double> reduced_us, full_us;
        double sink = 0.0;
        for (int i = 0; i < sample; ++i) {
          const Eigen::VectorXd b = inst.dictionary.col(i);
          const ProjectedFeature pf = project(b, basis);
          reduced_us.push_back(timed_median_us([&] {
            sink += solve_reduced(pf, basis.normals_in_basis, nr.psi, cfg.solver_tol).value;
          }));
          full_us.push_back(timed_median_us([&] {
            sink += solve_full(b, nr, cfg.solver_tol).value;
          }));
        }
        med_reduced = median(reduced_us);
        med_full = median(full_us);
        if (!std::isfinite(sink)) std::fprintf(stderr, "bench: non-finite solver values\n");
      }

      char row[320];
      std::snprintf(row, sizeof(row), "%d,%g,%.6f,%.3f,%.3f,%.4f,%.4f,%.4f,%.4f,%.4f", m,
                    ratio, report.rejection_fraction(), med_reduced, med_full,
                    med_full > 0 ? med_reduced / med_full : 0.0, screen_s, lasso_full_s,
                    lasso_reduced_s,
                    (screen_s + lasso_reduced_s) > 0
                        ? lasso_full_s / (screen_s + lasso_reduced_s)
                        : 0.0);
      *os << row << '\n';
    }
  }
  std::printf("bench: n=%d p=%d seed=%llu done (timings are medians of 5, warmup excluded)\n",
              cfg.n, cfg.p, static_cast<unsigned long long>(cfg.seed));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lasso dictionary screening with projection-reduced dome solves"};
  app.require_subcommand(1);

  Cli screen_cli, verify_cli, bench_cli, gen_cli;
  CLI::App* screen_cmd =
      app.add_subcommand("screen", "screen features and write mu values as CSV");
  screen_cli.attach(screen_cmd);
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "screen, then certify against the reference lasso");
  verify_cli.attach(verify_cmd);
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "rejection/timing table over m and lambda ratios");
  bench_cli.attach(bench_cmd);
  CLI::App* gen_cmd = app.add_subcommand("gen", "write a synthetic dictionary and target");
  gen_cli.attach(gen_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIoError;
  }

  try {
    if (screen_cmd->parsed()) return cmd_screen(screen_cli.resolve());
    if (verify_cmd->parsed()) return cmd_verify(verify_cli.resolve());
    if (bench_cmd->parsed()) return cmd_bench(bench_cli.resolve());
    if (gen_cmd->parsed()) return cmd_gen(gen_cli.resolve());
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIoError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIoError;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumericalError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return kExitNumericalError;
  }
  return kExitOk;
}
