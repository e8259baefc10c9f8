#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "config.hpp"
#include "experiments.hpp"

using namespace bogolab;

namespace {

void print_sweep(const char* tag, const SweepResult& r) {
  for (const auto& p : r.points)
    std::printf("%s point %d: N=%d rho=%g final=%.6e extra=%.6e [%s]\n", tag, p.index, p.n, p.rho,
                p.final_value, p.extra, p.status.c_str());
  std::printf("%s log-log slope vs rho: %.4f\n", tag, r.loglog_slope);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice Bose gas laboratory: mean-field, pair excitations and counting bounds"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = ".";
  int jobs = 0;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON run configuration file");
  app.add_option("--out", out_dir, "output directory for CSV files and manifest.json");
  app.add_option("--jobs", jobs, "thread count, 0 keeps the runtime default");
  auto* seed_opt = app.add_option("--seed", seed, "override the configured seed");

  app.add_subcommand("fuzz", "randomized checks of the counting/projector identities");
  app.add_subcommand("hartree", "time-dependent mean-field orbital run");
  app.add_subcommand("sweep-main", "exact vs pair-projected dynamics across particle numbers");
  app.add_subcommand("sweep-bog", "sector hierarchy vs its particle-free limit across N");
  app.add_subcommand("sweep-density", "excitation density, exact vs effective, across N");
  app.add_subcommand("envelope", "counting moments against their growth envelopes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    RunConfig rc = config_path.empty() ? RunConfig{} : load_config_file(config_path);
    if (seed_opt->count() > 0) rc.seed = seed;
#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif
    const std::string sub = app.get_subcommands().front()->get_name();

    if (sub == "fuzz") {
      FuzzResult r = run_identity_fuzz(rc, out_dir);
      for (const auto& row : r.rows)
        std::printf("%-24s trials=%d max_residual=%.3e tol=%.0e [%s]\n", row.name.c_str(),
                    row.trials, row.max_residual, row.tolerance, row.pass() ? "pass" : "FAIL");
      std::printf("fuzz: %s\n", r.all_pass() ? "all identities hold" : "FAILED");
      return r.all_pass() ? 0 : 2;
    }
    if (sub == "hartree") {
      run_hartree(rc, out_dir);
      std::printf("hartree: wrote %s/hartree.csv\n", out_dir.c_str());
      return 0;
    }
    if (sub == "sweep-main") {
      SweepResult r = run_main_sweep(rc, out_dir);
      print_sweep("sweep-main", r);
      return r.any_failed ? 2 : 0;
    }
    if (sub == "sweep-bog") {
      SweepResult r = run_bog_sweep(rc, out_dir);
      print_sweep("sweep-bog", r);
      return r.any_failed ? 2 : 0;
    }
    if (sub == "sweep-density") {
      SweepResult r = run_density_sweep(rc, out_dir);
      print_sweep("sweep-density", r);
      return r.any_failed ? 2 : 0;
    }
    if (sub == "envelope") {
      EnvelopeReport r = run_envelope_report(rc, out_dir);
      std::printf("envelope: D_tight=%.6g D_coarse=%.6g\n", r.d_tight, r.d_coarse);
      for (std::size_t i = 0; i < r.c.size(); ++i)
        std::printf("  c_%zu=%.6g alpha0=%.6g min(beta-alpha)=%.6g\n", i + 1, r.c[i],
                    i < r.alpha_initial.size() ? r.alpha_initial[i] : 0.0,
                    i < r.min_margin.size() ? r.min_margin[i] : 0.0);
      std::printf("envelope: growth inequality %s\n", r.gronwall_ok ? "holds" : "FAILED");
      return r.gronwall_ok ? 0 : 2;
    }
    std::fprintf(stderr, "unknown subcommand\n");
    return 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
