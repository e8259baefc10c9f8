// Acceptance harness: every release-blocking property gets one pass/fail line.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bogoliubov.hpp"
#include "config.hpp"
#include "dense_oracle.hpp"
#include "experiments.hpp"
#include "generators.hpp"
#include "hartree.hpp"
#include "hierarchy.hpp"
#include "io_util.hpp"
#include "manybody.hpp"
#include "model.hpp"
#include "observables.hpp"
#include "onebody.hpp"
#include "projectors.hpp"
#include "rng.hpp"
#include "sectors.hpp"
#include "tensor_ops.hpp"
#include "weights.hpp"

using namespace bogolab;
namespace fs = std::filesystem;

namespace {

std::string g17(double x) { return format_g17(x); }

std::string fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("bogolab_accept_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<unreadable " + path + ">";
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip_runtime_columns(const std::string& text) {
  std::vector<std::string> lines = split(text, '\n');
  if (lines.empty()) return text;
  std::vector<std::string> head = split(lines[0], ',');
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < head.size(); ++i)
    if (head[i].find("runtime") == std::string::npos) keep.push_back(i);
  std::string out;
  for (const std::string& line : lines) {
    if (line.empty()) continue;
    std::vector<std::string> cells = split(line, ',');
    std::string row;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      if (k) row += ',';
      if (keep[k] < cells.size()) row += cells[keep[k]];
    }
    out += row + "\n";
  }
  return out;
}

Eigen::VectorXcd to_vec(const std::vector<cplx>& x) {
  return Eigen::Map<const Eigen::VectorXcd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

// ---------------------------------------------------------------- criteria

// weight algebra, transport and channel identities on random states
std::string crit_identity_fuzz() {
  double worst = 0;
  for (const char* cfg :
       {R"({"M": 3, "N": 3, "trials": 30, "seed": 101})",
        R"({"M": 4, "N": 2, "trials": 30, "seed": 202})"}) {
    RunConfig rc = parse_config(cfg);
    FuzzResult res = run_identity_fuzz(rc, fresh_dir("fuzz_m" + std::to_string(rc.m)));
    for (const FuzzRow& r : res.rows) {
      worst = std::max(worst, r.max_residual);
      if (!r.pass())
        return r.name + std::string(" residual ") + g17(r.max_residual) + " exceeds " +
               g17(r.tolerance) + " on M=" + std::to_string(rc.m);
    }
  }
  return std::string() + "|ok 60 states, worst residual " + g17(worst);
}

// the fully condensed channel of the counting derivative vanishes identically
std::string crit_condensed_channel() {
  double worst = 0;
  auto run = [&worst](int m, int n, int trials, std::uint64_t seed) -> std::string {
    Lattice lat = Lattice::make(1, m);
    Potential v = Potential::gaussian(lat, 1.0, 0.9);
    ModelParams pm = ModelParams::for_lattice(lat, n, 1.0, 0.01, 0.1);
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
      ManyBodyState psi = random_symmetric_state(m, n, rng);
      Eigen::VectorXcd phi = rng.cgauss_vector(m);
      phi /= phi.norm();
      Eigen::VectorXd mw(n + 1);
      for (int k = 0; k <= n; ++k) mw[k] = 0.1 + rng.unit();
      CountingDerivatives cd = counting_derivative_channels(lat, v, pm, phi, mw, psi.amps);
      worst = std::max(worst, std::abs(cd.a));
      if (std::abs(cd.a) > 1e-10)
        return "condensed channel " + g17(cd.a) + " on trial " + std::to_string(t) +
               " (M=" + std::to_string(m) + ",N=" + std::to_string(n) + ")";
    }
    return "";
  };
  if (auto e = run(3, 3, 50, 303); !e.empty()) return e;
  if (auto e = run(2, 4, 10, 404); !e.empty()) return e;
  return "|ok 60 triples, worst " + g17(worst);
}

// finite differences of the counting observable against the channel sums
std::string crit_derivative_match() {
  Lattice lat = Lattice::make(1, 3);
  const int n = 3;
  Potential v = Potential::gaussian(lat, 1.0, 1.0);
  ModelParams pm = ModelParams::for_lattice(lat, n, 1.0, 0.01, 0.1);
  TensorShape sh = TensorShape::make(3, n);
  Rng rng(505);
  Eigen::VectorXcd phi0 = rng.cgauss_vector(3);
  phi0 /= phi0.norm();
  ManyBodyState st = random_symmetric_state(3, n, rng);
  Eigen::VectorXd m(n + 1);
  for (int k = 0; k <= n; ++k) m[k] = 0.2 + rng.unit();

  CountingDerivatives cd = counting_derivative_channels(lat, v, pm, phi0, m, st.amps);

  auto phi_at = [&](double t) -> Eigen::VectorXcd {
    if (t == 0) return phi0;
    ModelParams fine = pm;
    fine.t_final = std::abs(t);
    fine.dt = fine.t_final / 32;
    Eigen::VectorXcd start = (t > 0) ? phi0 : phi0.conjugate();
    Eigen::VectorXcd end = evolve_hartree(lat, v, fine, start).frames.back();
    return (t > 0) ? end : end.conjugate();
  };
  auto alpha_at = [&](GeneratorKind kind, double t) {
    Eigen::MatrixXcd h = oracle::hamiltonian(kind, lat, v, pm, phi_at(0.5 * t));
    Eigen::VectorXcd moved = oracle::expi_apply(h, t / pm.hbar, to_vec(st.amps));
    std::vector<cplx> amps(moved.data(), moved.data() + moved.size());
    return counting_expectation(sh, phi_at(t), m, amps);
  };
  auto fd = [&](GeneratorKind kind, double d) {
    return (alpha_at(kind, d) - alpha_at(kind, -d)) / (2 * d);
  };

  struct Case {
    GeneratorKind kind;
    double want;
    const char* name;
  } cases[] = {{GeneratorKind::full, cd.exact_total(), "exact"},
               {GeneratorKind::pair_projected, cd.projected_total(), "projected"}};
  std::string note = "|ok";
  for (const Case& c : cases) {
    double r1 = std::abs(fd(c.kind, 2e-3) - c.want);
    double r2 = std::abs(fd(c.kind, 1e-3) - c.want);
    if (r2 >= 1e-5)
      return std::string(c.name) + " flow residual " + g17(r2) + " at delta 1e-3";
    if (r2 > 1e-9 && (r1 / r2 < 2.5 || r1 / r2 > 6.0))
      return std::string(c.name) + " flow not second order: ratio " + g17(r1 / r2);
    note += std::string(" ") + c.name + " residual " + g17(r2);
  }
  return note;
}

// sector mass closure and exact reconstruction
std::string crit_sector_round_trip() {
  Rng rng(607);
  Eigen::VectorXcd phi = rng.cgauss_vector(3);
  phi /= phi.norm();
  double worst_mass = 0, worst_rec = 0;
  for (int t = 0; t < 20; ++t) {
    ManyBodyState st = random_symmetric_state(3, 3, rng);
    SectorFamily fam = decompose_sectors(st, phi, 3);
    worst_mass = std::max(worst_mass, std::abs(fam.total_mass() - 1.0));
    ManyBodyState back = reconstruct_state(fam);
    worst_rec = std::max(worst_rec, std::sqrt(norm_difference_sq(st, back)));
  }
  if (worst_mass > 1e-10) return "sector masses do not close: " + g17(worst_mass);
  if (worst_rec > 1e-10) return "reconstruction error " + g17(worst_rec);
  return "|ok mass defect " + g17(worst_mass) + ", reconstruction " + g17(worst_rec);
}

// untruncated ladder equals the projected full-space flow at T = 1
std::string crit_hierarchy_vs_projected() {
  Lattice lat = Lattice::make(1, 3);
  const int n = 3;
  Potential v = Potential::gaussian(lat, 1.0, 1.0);
  // both sides carry O(dt^2) stepping error in different frames; the step is
  // chosen so that integration error sits well under the 1e-6 gate
  RunConfig rc = parse_config(R"({"M": 3, "N": 3, "T": 1.0, "dt": 0.00125})");
  ModelParams pm = params_of(rc, lat, v);
  Rng rng(709);
  Eigen::VectorXcd phi0 = rng.cgauss_vector(3);
  phi0 /= phi0.norm();
  HartreeTrajectory traj = evolve_hartree(lat, v, pm, phi0);

  ManyBodyState st = random_symmetric_state(3, n, rng);
  std::vector<ManyBodyState> states = {st};
  std::vector<GeneratorKind> kinds = {GeneratorKind::pair_projected};
  co_evolve(kinds, states, lat, v, pm, traj, {}, [](int, double) {});

  HierarchyOptions opt;  // finite_n, unordered, cutoff = N is exact
  HierarchyResult res = evolve_hierarchy(decompose_sectors(st, phi0, n), lat, v, pm, traj, opt);
  double gap = std::sqrt(norm_difference_sq(states[0], reconstruct_state(res.family)));
  if (gap > 1e-6) return "final gap " + g17(gap) + " exceeds 1e-6";
  return "|ok final gap " + g17(gap);
}

// quadratic moment flow against the pair ladder from the vacuum, plus kernel
// bounds checked at every frame orbital
std::string crit_moments_vs_ladder() {
  Lattice lat = Lattice::make(1, 3);
  Potential v = Potential::gaussian(lat, 1.0, 0.8);
  // ladder side steps at second order; keep dt small enough that its error
  // stays under the 1e-5 gate (the moment side is fourth order)
  RunConfig rc = parse_config(R"({"M": 3, "N": 9, "T": 1.0, "dt": 0.0025})");
  ModelParams pm = params_of(rc, lat, v);
  ExcitationSplit split = make_flat_excitation(lat);
  HartreeTrajectory traj = evolve_hartree(lat, v, pm, split.phi0_unit);

  for (std::size_t s = 0; s < traj.frames.size(); ++s) {
    Kernels ker = build_kernels(lat, v, pm, traj.frames[s]);
    KernelNorms kn = kernel_norms(lat, v, pm.lambda, traj.frames[s], ker);
    if (kn.k1_op > kn.k1_young + 1e-12)
      return "one-body kernel bound violated at step " + std::to_string(s) + ": " +
             g17(kn.k1_op) + " > " + g17(kn.k1_young);
    if (kn.k2_fro > kn.k2_provable + 1e-12)
      return "pair kernel bound violated at step " + std::to_string(s) + ": " +
             g17(kn.k2_fro) + " > " + g17(kn.k2_provable);
  }

  HierarchyOptions opt;
  opt.kind = HierarchyKind::bogoliubov;
  HierarchyResult hier =
      evolve_hierarchy(vacuum_family(3, 9, 8, split.phi0_unit), lat, v, pm, traj, opt);
  PairDensities from_chi = densities_from_sectors(hier.family);
  std::vector<PairDensities> fr = evolve_gamma_alpha(lat, v, pm, traj, zero_densities(3));
  double dg = (fr.back().gamma - from_chi.gamma).norm();
  double da = (fr.back().alpha - from_chi.alpha).norm();
  if (dg > 1e-5 || da > 1e-5)
    return "moment mismatch at T: gamma " + g17(dg) + ", alpha " + g17(da);
  return "|ok gamma " + g17(dg) + ", alpha " + g17(da) + ", bounds held on " +
         std::to_string(traj.frames.size()) + " frames";
}

std::string check_decreasing(const SweepResult& sr, const char* what) {
  if (sr.any_failed) return std::string("a sweep point failed (") + what + ")";
  for (std::size_t i = 0; i < sr.points.size(); ++i) {
    if (!sr.points[i].ok) return std::string("point ") + std::to_string(i) + " not ok";
    if (i > 0 && !(sr.points[i].final_value < sr.points[i - 1].final_value))
      return std::string(what) + " not strictly decreasing: " +
             g17(sr.points[i - 1].final_value) + " then " + g17(sr.points[i].final_value);
  }
  return "";
}

// product-vs-projected gap shrinks with density at fixed volume
std::string crit_main_convergence() {
  RunConfig rc = parse_config(
      R"({"M": 4, "T": 0.5, "sweep_n": [4, 6, 8], "potential": {"amp": 1.0, "sigma": 1.0}})");
  SweepResult sr = run_main_sweep(rc, fresh_dir("main_conv"));
  if (auto e = check_decreasing(sr, "exact-vs-projected gap"); !e.empty()) return e;
  if (!(sr.loglog_slope < 0)) return "log-log slope " + g17(sr.loglog_slope) + " not negative";
  std::string note = "|ok gaps";
  for (const SweepPoint& p : sr.points) note += " " + g17(p.final_value);
  note += ", slope " + g17(sr.loglog_slope);
  return note;
}

// sector-family gap between the depleted and limit ladders shrinks with density,
// and the composite reconstruction error is emitted alongside it
std::string crit_bog_convergence() {
  RunConfig rc = parse_config(
      R"({"M": 4, "T": 0.5, "sweep_n": [4, 6, 8], "potential": {"amp": 1.0, "sigma": 1.0}})");
  std::string dir = fresh_dir("bog_conv");
  SweepResult sr = run_bog_sweep(rc, dir);
  if (auto e = check_decreasing(sr, "family gap"); !e.empty()) return e;
  std::string head = split(read_text(dir + "/bog_sweep_final.csv"), '\n')[0];
  if (head.find("reconstruction_gap_sq") == std::string::npos)
    return "composite reconstruction column missing from the final table";
  std::string note = "|ok gaps";
  for (const SweepPoint& p : sr.points)
    note += " " + g17(p.final_value) + "/" + g17(p.extra);
  return note;
}

// trace distance between the many-body excitation density and the effective
// rank-one density shrinks with density
std::string crit_density_convergence() {
  RunConfig rc = parse_config(
      R"({"M": 4, "T": 0.25, "sweep_n": [4, 6, 8], "potential": {"amp": 1.0, "sigma": 1.0}})");
  SweepResult sr = run_density_sweep(rc, fresh_dir("density_conv"));
  if (auto e = check_decreasing(sr, "density gap"); !e.empty()) return e;
  std::string note = "|ok gaps";
  for (const SweepPoint& p : sr.points) note += " " + g17(p.final_value);
  return note;
}

// weight function properties exhaustively up to N = 10^4, auxiliary domination,
// and the envelope differential inequality on a time grid
std::string crit_weight_envelope() {
  const double lambda = 4.0;
  const int n = 10000;
  PaperWeights pw = make_weights(n / lambda, n);
  for (int k = 0; k <= n; ++k) {
    double w = pw.w(k);
    if (!(w > 0 && w <= 1.0)) return "weight out of range at k=" + std::to_string(k);
    if (k > 0 && pw.w(k - 1) > w) return "weight not monotone at k=" + std::to_string(k);
  }
  for (auto [l, j] : {std::pair{1, 2}, {2, 3}, {1, 3}, {2, 2}}) {
    for (int k = 0; k <= n; ++k) {
      double lhs = std::pow(double(k) / n, l);
      double rhs = std::pow(lambda, -l) * std::pow(pw.w(k), l) + std::pow(pw.w(k), j);
      if (lhs > rhs + 1e-12)
        return "moment domination fails at k=" + std::to_string(k) + " (l=" +
               std::to_string(l) + ", j=" + std::to_string(j) + ")";
    }
  }

  double min_margin = 1e300;
  for (auto [rho, d] : {std::pair{8.0, 2.0}, {2500.0, 12.0}}) {
    PaperWeights w2 = make_weights(rho, n);
    Envelope env = make_envelope(w2, d, lambda, 4);
    for (std::size_t i = 1; i < env.c.size(); ++i)
      if (env.c[i] < env.c[i - 1]) return "step constants decreased";
    for (int j = 2; j <= 4; ++j)
      for (int s = 0; s <= 20; ++s) {
        double mg = env.gronwall_margin(j, 0.05 * s);
        min_margin = std::min(min_margin, mg);
        if (mg < -1e-10)
          return "envelope inequality fails at j=" + std::to_string(j) +
                 ", t=" + g17(0.05 * s) + ": margin " + g17(mg);
      }
  }
  return "|ok 10001-point exhaustive, min envelope margin " + g17(min_margin);
}

// production matvec against the dense assembly, and the short-step
// exponential against a full eigendecomposition
std::string crit_dense_oracle() {
  Rng rng(811);
  double worst_mat = 0, worst_exp = 0;
  for (auto [m, n] : {std::pair{3, 2}, {2, 3}}) {
    Lattice lat = Lattice::make(1, m);
    Potential v = Potential::gaussian(lat, 1.0, 1.0);
    ModelParams pm = ModelParams::for_lattice(lat, n, 1.0, 0.05, 0.1);
    Eigen::VectorXcd phi = rng.cgauss_vector(m);
    phi /= phi.norm();
    TensorShape sh = TensorShape::make(m, n);
    std::vector<cplx> in = rng.cgauss_tensor(tensor_size(m, n));
    symmetrize(sh, in);  // pair-channel kinds act on the bosonic subspace

    for (GeneratorKind kind : {GeneratorKind::full, GeneratorKind::mean_field,
                               GeneratorKind::pair_projected, GeneratorKind::difference}) {
      Generator g(kind, lat, v, pm, phi);
      Eigen::MatrixXcd h = oracle::hamiltonian(kind, lat, v, pm, phi);
      double d = (to_vec(g(in)) - h * to_vec(in)).norm();
      worst_mat = std::max(worst_mat, d);
      if (d > 1e-12)
        return "matvec mismatch " + g17(d) + " (M=" + std::to_string(m) +
               ",N=" + std::to_string(n) + ")";
    }

    std::vector<cplx> psi = in;
    double nrm = std::sqrt(norm_sq(psi));
    scale(cplx(1.0 / nrm), psi);
    Generator g(GeneratorKind::full, lat, v, pm, Eigen::VectorXcd());
    Eigen::MatrixXcd h = oracle::hamiltonian(GeneratorKind::full, lat, v, pm, phi);
    Eigen::VectorXcd want = oracle::expi_apply(h, pm.dt / pm.hbar, to_vec(psi));
    lanczos_exp_step([&g](const std::vector<cplx>& x) { return g(x); }, pm.dt / pm.hbar, psi);
    double d = (to_vec(psi) - want).norm();
    worst_exp = std::max(worst_exp, d);
    if (d > 1e-9) return "short-step exponential mismatch " + g17(d);
  }
  return "|ok matvec " + g17(worst_mat) + ", exponential " + g17(worst_exp);
}

// reruns with a fixed plan and seed reproduce the CSV payloads byte for byte
std::string crit_determinism() {
  const std::string cfg =
      R"({"M": 3, "N": 6, "T": 0.2, "seed": 17, "sweep_n": [4, 6],
          "potential": {"amp": 1.0, "sigma": 0.8}})";
  RunConfig rc = parse_config(cfg);
  std::string a = fresh_dir("det_a"), b = fresh_dir("det_b");

  run_identity_fuzz(rc, a + "/fuzz");
  run_identity_fuzz(rc, b + "/fuzz");
  run_main_sweep(rc, a + "/main");
  run_main_sweep(rc, b + "/main");
  run_bog_sweep(rc, a + "/bog");
  run_bog_sweep(rc, b + "/bog");
  run_density_sweep(rc, a + "/density");
  run_density_sweep(rc, b + "/density");
  run_envelope_report(rc, a + "/envelope");
  run_envelope_report(rc, b + "/envelope");

  const char* files[] = {"fuzz/fuzz.csv",           "main/main_sweep.csv",
                         "main/main_frames.csv",    "main/main_sweep_final.csv",
                         "bog/bog_sweep.csv",       "bog/bog_sectors.csv",
                         "bog/bog_pair.csv",        "bog/bog_sweep_final.csv",
                         "density/density_sweep.csv", "density/density_sweep_final.csv",
                         "envelope/envelope.csv"};
  int compared = 0;
  for (const char* f : files) {
    std::string ta = strip_runtime_columns(read_text(a + "/" + f));
    std::string tb = strip_runtime_columns(read_text(b + "/" + f));
    if (ta != tb) return std::string("payload differs between reruns: ") + f;
    ++compared;
  }
  std::string fa = read_text(a + "/main/main_state_p0_exact.frame");
  if (fa != read_text(b + "/main/main_state_p0_exact.frame"))
    return "binary frame differs between reruns";
  return "|ok " + std::to_string(compared) + " tables and 1 binary frame identical";
}

struct Criterion {
  const char* label;
  double budget_sec;
  std::function<std::string()> run;
};

}  // namespace

int main() {
  std::vector<Criterion> list = {
      {"weight/transport identity fuzz", 60, crit_identity_fuzz},
      {"condensed counting channel vanishes", 300, crit_condensed_channel},
      {"counting derivative matches finite differences", 300, crit_derivative_match},
      {"sector decomposition round trip", 300, crit_sector_round_trip},
      {"untruncated ladder matches projected flow", 600, crit_hierarchy_vs_projected},
      {"moment flow matches pair ladder, kernel bounds", 600, crit_moments_vs_ladder},
      {"projected-gap decay with density", 1800, crit_main_convergence},
      {"family-gap decay with density", 1800, crit_bog_convergence},
      {"density-gap decay with density", 1800, crit_density_convergence},
      {"weight properties and envelope inequality", 300, crit_weight_envelope},
      {"dense oracle and exponential stepping", 300, crit_dense_oracle},
      {"fixed-seed payload determinism", 900, crit_determinism},
  };

  int failed = 0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    std::string msg;
    try {
      msg = list[i].run();
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = msg.empty() || msg[0] == '|';
    if (pass && sec > list[i].budget_sec) {
      pass = false;
      msg = "over time budget: " + g17(sec) + "s > " + g17(list[i].budget_sec) + "s";
    }
    if (!pass) ++failed;
    std::string note = pass ? (msg.empty() ? "" : " " + msg.substr(1)) : ": " + msg;
    std::printf("criterion %2zu %s  %7.1fs  %s%s\n", i + 1, pass ? "PASS" : "FAIL", sec,
                list[i].label, note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(list.size()) - failed, list.size());
  return failed;
}
