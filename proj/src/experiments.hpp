#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace bogolab {

inline constexpr const char* kCodeVersion = "0.1.0";

struct FuzzRow {
  std::string name;
  int trials = 0;
  double max_residual = 0;
  double tolerance = 0;
  bool pass() const { return max_residual <= tolerance; }
};

struct FuzzResult {
  std::vector<FuzzRow> rows;
  bool all_pass() const;
};

struct SweepPoint {
  int index = 0;
  int n = 0;
  double rho = 0;
  double final_value = 0;  // per-sweep primary metric at T
  double extra = 0;        // bog sweep: reconstruction gap against the exact state
  bool ok = false;
  std::string status;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double loglog_slope = 0;  // final_value vs rho, failed points skipped
  bool any_failed = false;
};

struct EnvelopeReport {
  std::vector<double> c;             // computed minimal constants
  double d_tight = 0, d_coarse = 0;
  std::vector<double> alpha_initial; // counting values at t = 0, order j = 1..j_max
  std::vector<double> min_margin;    // min over t of beta_j - alpha_j (reported only)
  bool gronwall_ok = false;          // differential inequality at all sampled times
};

// writers put CSVs plus a manifest.json into out_dir; every run is deterministic
// given the config except for the runtime_sec columns and manifest timings
FuzzResult run_identity_fuzz(const RunConfig& rc, const std::string& out_dir);
void run_hartree(const RunConfig& rc, const std::string& out_dir);
SweepResult run_main_sweep(RunConfig rc, const std::string& out_dir);
SweepResult run_bog_sweep(RunConfig rc, const std::string& out_dir);
SweepResult run_density_sweep(RunConfig rc, const std::string& out_dir);
EnvelopeReport run_envelope_report(const RunConfig& rc, const std::string& out_dir);

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bogolab
