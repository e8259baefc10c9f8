#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bogoliubov.hpp"
#include "generators.hpp"
#include "hartree.hpp"
#include "hierarchy.hpp"
#include "io_util.hpp"
#include "manybody.hpp"
#include "observables.hpp"
#include "onebody.hpp"
#include "projectors.hpp"
#include "rng.hpp"
#include "sectors.hpp"
#include "tensor_ops.hpp"
#include "weights.hpp"

namespace bogolab {

namespace fs = std::filesystem;
using nlohmann::json;

bool FuzzResult::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass()) return false;
  return true;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const std::size_t n = lx.size();
  if (n < 2) return 0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  return sxx > 0 ? sxy / sxx : 0;
}

namespace {

struct StopWatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string path_in(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

json manifest_base(const RunConfig& rc, const std::string& subcommand) {
  json j;
  j["subcommand"] = subcommand;
  j["config_hash"] = hex64(fnv1a(canonical_config_string(rc)));
  j["code_version"] = kCodeVersion;
  return j;
}

void write_manifest(const std::string& out_dir, const json& j) {
  std::ofstream os(path_in(out_dir, "manifest.json"));
  require(os.good(), "cannot open manifest for writing");
  os << j.dump(2) << "\n";
}

bool keep_frame(int step, int last, int stride) {
  return step % std::max(1, stride) == 0 || step == last;
}

int step_count(const ModelParams& pm) {
  return static_cast<int>(std::llround(pm.t_final / pm.dt));
}

std::string cell(int v) { return std::to_string(v); }

std::vector<int> sweep_list(const RunConfig& rc) {
  return rc.sweep_n.empty() ? std::vector<int>{4, 6, 8} : rc.sweep_n;
}

}  // namespace

FuzzResult run_identity_fuzz(const RunConfig& rc, const std::string& out_dir) {
  fs::create_directories(out_dir);
  StopWatch sw;
  Lattice lat = lattice_of(rc);
  Potential v = potential_of(rc, lat);
  ModelParams pm = params_of(rc, lat, v);
  const int n = pm.n_particles;
  const int sites = lat.site_count;
  require(n >= 2, "weight-transport checks need at least two particles");
  TensorShape sh = TensorShape::make(sites, n);
  Rng rng(rc.seed);

  const double tol = 1e-10;
  FuzzResult res;
  for (const char* name :
       {"weight_product", "weight_slot_commute", "weight_sector_commute", "qcount_bridge",
        "shifted_norm_equality", "pair_moment_bound", "weight_shift_transport",
        "five_channel_split", "pp_channel_vanishes"})
    res.rows.push_back({name, rc.trials, 0.0, tol});
  auto bump = [&res](int i, double r) {
    res.rows[i].max_residual = std::max(res.rows[i].max_residual, r);
  };

  Eigen::MatrixXd fm(sites, sites);
  for (int x = 0; x < sites; ++x)
    for (int y = 0; y < sites; ++y) fm(x, y) = v.values[lat.displacement(x, y)];

  Generator gfull(GeneratorKind::full, lat, v, pm, Eigen::VectorXcd());

  std::vector<cplx> u1(sh.size), u2(sh.size), u3(sh.size), u4(sh.size);
  auto diff_norm = [](const std::vector<cplx>& a, std::vector<cplx>& b) {
    axpy(cplx(-1), a, b);
    return std::sqrt(norm_sq(b));
  };

  for (int t = 0; t < rc.trials; ++t) {
    ManyBodyState psi = random_symmetric_state(sites, n, rng);
    Eigen::VectorXcd phi = rng.cgauss_vector(sites);
    phi /= phi.norm();
    Eigen::VectorXd m(n + 1), l(n + 1);
    for (int k = 0; k <= n; ++k) {
      m[k] = 0.1 + rng.unit();
      l[k] = 0.1 + rng.unit();
    }

    auto pair_comp = [&](int which, const std::vector<cplx>& in, std::vector<cplx>& out) {
      if (which == 0) {
        apply_p(sh, 0, phi, in, out);
        apply_p(sh, 1, phi, out, out);
      } else if (which == 1) {
        apply_p(sh, 0, phi, in, out);
        apply_q(sh, 1, phi, out, out);
      } else {
        apply_q(sh, 0, phi, in, out);
        apply_q(sh, 1, phi, out, out);
      }
    };

    // product of weights equals weight of products
    apply_weight(sh, phi, m, 0, psi.amps, u1);
    apply_weight(sh, phi, l, 0, u1, u2);
    Eigen::VectorXd lm = l.cwiseProduct(m);
    apply_weight(sh, phi, lm, 0, psi.amps, u3);
    bump(0, diff_norm(u2, u3));

    // weights commute with a slot projector
    apply_p(sh, 0, phi, psi.amps, u1);
    apply_weight(sh, phi, m, 0, u1, u2);
    apply_weight(sh, phi, m, 0, psi.amps, u3);
    apply_p(sh, 0, phi, u3, u4);
    bump(1, diff_norm(u2, u4));

    // and with a sector projector
    int kk = t % (n + 1);
    apply_sector_projector(sh, phi, kk, psi.amps, u1);
    apply_weight(sh, phi, m, 0, u1, u2);
    apply_weight(sh, phi, m, 0, psi.amps, u3);
    apply_sector_projector(sh, phi, kk, u3, u4);
    bump(2, diff_norm(u2, u4));

    // the relative counting operator is the slot average of complements
    Eigen::VectorXd nw(n + 1);
    for (int k = 0; k <= n; ++k) nw[k] = double(k) / double(n);
    apply_weight(sh, phi, nw, 0, psi.amps, u1);
    std::fill(u2.begin(), u2.end(), cplx(0));
    for (int j = 0; j < n; ++j) {
      apply_q(sh, j, phi, psi.amps, u3);
      axpy(cplx(1.0 / double(n)), u3, u2);
    }
    bump(3, diff_norm(u1, u2));

    // ||m q_1 Psi||^2 = ||m n^(1/2) Psi||^2 on symmetric states
    apply_q(sh, 0, phi, psi.amps, u1);
    apply_weight(sh, phi, m, 0, u1, u2);
    double lhs = norm_sq(u2);
    Eigen::VectorXd msqrt(n + 1);
    for (int k = 0; k <= n; ++k) msqrt[k] = m[k] * std::sqrt(double(k) / double(n));
    apply_weight(sh, phi, msqrt, 0, psi.amps, u3);
    bump(4, std::abs(lhs - norm_sq(u3)));

    // ||m q_1 q_2 Psi||^2 <= N/(N-1) ||m n Psi||^2, margin only
    apply_q(sh, 0, phi, psi.amps, u1);
    apply_q(sh, 1, phi, u1, u1);
    apply_weight(sh, phi, m, 0, u1, u2);
    double lhs2 = norm_sq(u2);
    Eigen::VectorXd mn(n + 1);
    for (int k = 0; k <= n; ++k) mn[k] = m[k] * double(k) / double(n);
    apply_weight(sh, phi, mn, 0, psi.amps, u3);
    double rhs2 = norm_sq(u3) * double(n) / double(n - 1);
    bump(5, std::max(0.0, lhs2 - rhs2));

    // shift transport through a pair multiplier: Q_i f Q_j m = m_(j-i) Q_i f Q_j
    for (int qi = 0; qi <= 2; ++qi)
      for (int qj = 0; qj <= 2; ++qj) {
        apply_weight(sh, phi, m, 0, psi.amps, u1);
        pair_comp(qj, u1, u2);
        pair01_multiply(sh, fm, u2, u3);
        pair_comp(qi, u3, u2);
        pair_comp(qj, psi.amps, u1);
        pair01_multiply(sh, fm, u1, u3);
        pair_comp(qi, u3, u1);
        apply_weight(sh, phi, m, qj - qi, u1, u4);
        bump(6, diff_norm(u2, u4));
      }

    // the projected generator plus the centered remainder recovers the full one
    Generator gproj(GeneratorKind::pair_projected, lat, v, pm, phi);
    Generator gdiff(GeneratorKind::difference, lat, v, pm, phi);
    u1 = gfull(psi.amps);
    u2 = gproj(psi.amps);
    u3 = gdiff(psi.amps);
    axpy(cplx(-1), u2, u1);
    bump(7, diff_norm(u3, u1));

    // fully condensed pair channel of the counting derivative vanishes
    CountingDerivatives cd = counting_derivative_channels(lat, v, pm, phi, m, psi.amps);
    bump(8, std::abs(cd.a));
  }

  CsvWriter csv(path_in(out_dir, "fuzz.csv"),
                {"name", "trials", "max_residual", "tolerance", "status"});
  for (const auto& r : res.rows)
    csv.row({r.name, cell(r.trials), format_g17(r.max_residual), format_g17(r.tolerance),
             r.pass() ? "pass" : "fail"});

  json j = manifest_base(rc, "fuzz");
  j["m"] = rc.m;
  j["n"] = n;
  j["seed"] = rc.seed;
  j["trials"] = rc.trials;
  j["all_pass"] = res.all_pass();
  j["runtime_sec"] = sw.seconds();
  write_manifest(out_dir, j);
  return res;
}

void run_hartree(const RunConfig& rc, const std::string& out_dir) {
  fs::create_directories(out_dir);
  StopWatch sw;
  Lattice lat = lattice_of(rc);
  Potential v = potential_of(rc, lat);
  ModelParams pm = params_of(rc, lat, v);
  ExcitationSplit split = make_flat_excitation(lat);
  HartreeTrajectory traj = evolve_hartree(lat, v, pm, split.phi0_unit);

  std::vector<std::string> header = {"t", "norm", "energy"};
  for (int i = 0; i < lat.site_count; ++i) {
    header.push_back("phi" + std::to_string(i) + "_re");
    header.push_back("phi" + std::to_string(i) + "_im");
  }
  CsvWriter csv(path_in(out_dir, "hartree.csv"), header);

  const double g = pm.mean_field_coupling();
  const int last = static_cast<int>(traj.frames.size()) - 1;
  double e0 = hartree_energy(lat, v, g, pm.hbar, traj.frames[0]);
  double drift = 0;
  for (int s = 0; s <= last; ++s) {
    double e = hartree_energy(lat, v, g, pm.hbar, traj.frames[s]);
    drift = std::max(drift, std::abs(e - e0));
    if (!keep_frame(s, last, rc.stride)) continue;
    std::vector<std::string> cells = {format_g17(s * traj.dt),
                                      format_g17(traj.frames[s].norm()), format_g17(e)};
    for (int i = 0; i < lat.site_count; ++i) {
      cells.push_back(format_g17(traj.frames[s][i].real()));
      cells.push_back(format_g17(traj.frames[s][i].imag()));
    }
    csv.row(cells);
  }

  json j = manifest_base(rc, "hartree");
  j["energy_drift"] = drift;
  j["sup_phi_inf"] = traj.sup_phi_inf;
  j["steps"] = last;
  j["dt"] = traj.dt;
  j["runtime_sec"] = sw.seconds();
  write_manifest(out_dir, j);
}

SweepResult run_main_sweep(RunConfig rc, const std::string& out_dir) {
  fs::create_directories(out_dir);
  rc.sweep_n = sweep_list(rc);
  CsvWriter series(path_in(out_dir, "main_sweep.csv"), {"point", "n", "rho", "t", "gap_sq"});
  CsvWriter frames(path_in(out_dir, "main_frames.csv"),
                   {"point", "kind", "n", "t", "norm", "energy", "symmetry_residual"});
  CsvWriter finals(path_in(out_dir, "main_sweep_final.csv"),
                   {"point", "n", "lambda", "rho", "T", "final_gap_sq", "final_gap",
                    "alpha_n_psi", "alpha_n_tilde", "runtime_sec"});

  SweepResult res;
  json jpts = json::array();
  for (std::size_t idx = 0; idx < rc.sweep_n.size(); ++idx) {
    SweepPoint p;
    p.index = static_cast<int>(idx);
    p.n = rc.sweep_n[idx];
    StopWatch sw;
    try {
      RunConfig sub = rc;
      sub.n = p.n;
      Lattice lat = lattice_of(sub);
      Potential v = potential_of(sub, lat);
      ModelParams pm = params_of(sub, lat, v);
      p.rho = pm.rho;
      ExcitationSplit split = make_flat_excitation(lat);
      HartreeTrajectory traj = evolve_hartree(lat, v, pm, split.phi0_unit);
      ManyBodyState psi0 = product_state(lat.site_count, p.n, split.phi0_unit);
      TensorShape sh = psi0.shape();
      std::vector<ManyBodyState> states = {psi0, psi0};
      std::vector<GeneratorKind> kinds = {GeneratorKind::full, GeneratorKind::pair_projected};
      const char* labels[2] = {"exact", "projected"};
      const int last = step_count(pm);
      co_evolve(kinds, states, lat, v, pm, traj, rc.krylov, [&](int step, double t) {
        if (!keep_frame(step, last, rc.stride)) return;
        double gap = norm_difference_sq(states[0], states[1]);
        series.row({cell(p.index), cell(p.n), format_g17(p.rho), format_g17(t), format_g17(gap)});
        for (int i = 0; i < 2; ++i) {
          Generator g(kinds[i], lat, v, pm, traj.frames[step]);
          frames.row({cell(p.index), labels[i], cell(p.n), format_g17(t),
                      format_g17(states[i].norm()), format_g17(g.energy(states[i].amps)),
                      format_g17(symmetry_residual(sh, states[i].amps))});
        }
      });
      Eigen::VectorXd nw(p.n + 1);
      for (int k = 0; k <= p.n; ++k) nw[k] = double(k) / double(p.n);
      double a_psi = counting_expectation(sh, traj.frames[last], nw, states[0].amps);
      double a_til = counting_expectation(sh, traj.frames[last], nw, states[1].amps);
      for (int i = 0; i < 2; ++i) {
        std::ofstream os(path_in(out_dir, "main_state_p" + cell(p.index) + "_" +
                                 std::string(labels[i]) + ".frame"),
                         std::ios::binary);
        write_frame(os, {sub.d, sub.m, p.n, pm.t_final}, states[i].amps);
      }
      p.final_value = norm_difference_sq(states[0], states[1]);
      finals.row({cell(p.index), cell(p.n), format_g17(pm.lambda), format_g17(p.rho),
                  format_g17(pm.t_final), format_g17(p.final_value),
                  format_g17(std::sqrt(std::max(0.0, p.final_value))), format_g17(a_psi),
                  format_g17(a_til), format_g17(sw.seconds())});
      p.ok = true;
      p.status = "ok";
    } catch (const std::exception& e) {
      p.status = e.what();
      res.any_failed = true;
    }
    json jp = {{"index", p.index}, {"n", p.n},      {"rho", p.rho},
               {"status", p.status}, {"runtime_sec", sw.seconds()}};
    jpts.push_back(jp);
    res.points.push_back(p);
  }

  std::vector<double> xs, ys;
  for (const auto& p : res.points)
    if (p.ok) {
      xs.push_back(p.rho);
      ys.push_back(p.final_value);
    }
  res.loglog_slope = fit_loglog_slope(xs, ys);

  json j = manifest_base(rc, "sweep-main");
  j["points"] = jpts;
  j["loglog_slope"] = res.loglog_slope;
  write_manifest(out_dir, j);
  return res;
}

SweepResult run_bog_sweep(RunConfig rc, const std::string& out_dir) {
  fs::create_directories(out_dir);
  rc.sweep_n = sweep_list(rc);
  CsvWriter series(path_in(out_dir, "bog_sweep.csv"),
                   {"point", "n", "rho", "t", "family_gap_sq"});
  std::vector<std::string> sec_header = {"point", "n",        "rho",      "kind",
                                         "t",     "tail_mass", "ortho_residual", "tr_gamma",
                                         "alpha_fro", "purity"};
  for (int k = 0; k <= rc.k_max; ++k) sec_header.push_back("m" + cell(k));
  CsvWriter sectors(path_in(out_dir, "bog_sectors.csv"), sec_header);
  CsvWriter pair(path_in(out_dir, "bog_pair.csv"),
                 {"point", "n", "rho", "t", "tr_gamma", "alpha_fro", "purity"});
  CsvWriter finals(path_in(out_dir, "bog_sweep_final.csv"),
                   {"point", "n", "lambda", "rho", "T", "final_gap_sq",
                    "reconstruction_gap_sq", "runtime_sec"});

  SweepResult res;
  json jpts = json::array();
  for (std::size_t idx = 0; idx < rc.sweep_n.size(); ++idx) {
    SweepPoint p;
    p.index = static_cast<int>(idx);
    p.n = rc.sweep_n[idx];
    StopWatch sw;
    try {
      RunConfig sub = rc;
      sub.n = p.n;
      Lattice lat = lattice_of(sub);
      Potential v = potential_of(sub, lat);
      ModelParams pm = params_of(sub, lat, v);
      p.rho = pm.rho;
      ExcitationSplit split = make_flat_excitation(lat);
      HartreeTrajectory traj = evolve_hartree(lat, v, pm, split.phi0_unit);
      const int last = step_count(pm);
      const int k_eff = std::min(rc.k_max, p.n);

      ManyBodyState psi0 = product_state(lat.site_count, p.n, split.phi0_unit);
      std::vector<ManyBodyState> states = {psi0};
      std::vector<GeneratorKind> kinds = {GeneratorKind::full};
      co_evolve(kinds, states, lat, v, pm, traj, rc.krylov, [](int, double) {});

      SectorFamily fam_n = vacuum_family(lat.site_count, p.n, k_eff, traj.frames[0]);
      SectorFamily fam_b = fam_n;
      std::vector<cplx> flat_n = pack_family(fam_n);
      std::vector<cplx> flat_b = flat_n;
      HierarchyOptions opt_n, opt_b;
      opt_n.kind = HierarchyKind::finite_n;
      opt_b.kind = HierarchyKind::bogoliubov;
      opt_n.krylov = opt_b.krylov = rc.krylov;
      double rem_n = 0, rem_b = 0;

      auto family_gap = [&]() {
        std::vector<cplx> d = flat_n;
        axpy(cplx(-1), flat_b, d);
        return norm_sq(d);
      };
      auto sector_row = [&](const char* kind, const SectorFamily& fam, double t) {
        std::vector<double> ms = fam.masses();
        int kk = static_cast<int>(ms.size());
        double tail = kk >= 3 ? ms[kk - 1] + ms[kk - 2] : 0.0;
        PairDensities pd = densities_from_sectors(fam);
        std::vector<std::string> cells = {cell(p.index),
                                          cell(p.n),
                                          format_g17(p.rho),
                                          kind,
                                          format_g17(t),
                                          format_g17(tail),
                                          format_g17(slot_orthogonality_residual(fam)),
                                          format_g17(pd.gamma.trace().real()),
                                          format_g17(pd.alpha.norm()),
                                          format_g17(quadratic_invariant(pd))};
        for (int k = 0; k <= rc.k_max; ++k)
          cells.push_back(format_g17(k < kk ? ms[k] : 0.0));
        sectors.row(cells);
      };
      auto emit_frame = [&](double t) {
        series.row(
            {cell(p.index), cell(p.n), format_g17(p.rho), format_g17(t), format_g17(family_gap())});
        sector_row("tilde", fam_n, t);
        sector_row("bog", fam_b, t);
      };
      emit_frame(0.0);
      for (int s = 0; s < last; ++s) {
        hierarchy_step(fam_n, flat_n, lat, v, pm, traj, s, opt_n, rem_n);
        hierarchy_step(fam_b, flat_b, lat, v, pm, traj, s, opt_b, rem_b);
        if (keep_frame(s + 1, last, rc.stride)) emit_frame((s + 1) * traj.dt);
      }

      std::vector<PairDensities> pds =
          evolve_gamma_alpha(lat, v, pm, traj, zero_densities(lat.site_count));
      for (int s = 0; s <= last; ++s) {
        if (!keep_frame(s, last, rc.stride)) continue;
        pair.row({cell(p.index), cell(p.n), format_g17(p.rho), format_g17(s * traj.dt),
                  format_g17(pds[s].gamma.trace().real()), format_g17(pds[s].alpha.norm()),
                  format_g17(quadratic_invariant(pds[s]))});
      }

      p.final_value = family_gap();
      p.extra = norm_difference_sq(states[0], reconstruct_state(fam_b));
      finals.row({cell(p.index), cell(p.n), format_g17(pm.lambda), format_g17(p.rho),
                  format_g17(pm.t_final), format_g17(p.final_value), format_g17(p.extra),
                  format_g17(sw.seconds())});
      p.ok = true;
      p.status = "ok";
    } catch (const std::exception& e) {
      p.status = e.what();
      res.any_failed = true;
    }
    json jp = {{"index", p.index},   {"n", p.n},
               {"rho", p.rho},       {"status", p.status},
               {"runtime_sec", sw.seconds()}};
    jpts.push_back(jp);
    res.points.push_back(p);
  }

  std::vector<double> xs, ys;
  for (const auto& p : res.points)
    if (p.ok) {
      xs.push_back(p.rho);
      ys.push_back(p.final_value);
    }
  res.loglog_slope = fit_loglog_slope(xs, ys);

  json j = manifest_base(rc, "sweep-bog");
  j["points"] = jpts;
  j["loglog_slope"] = res.loglog_slope;
  write_manifest(out_dir, j);
  return res;
}

SweepResult run_density_sweep(RunConfig rc, const std::string& out_dir) {
  fs::create_directories(out_dir);
  rc.sweep_n = sweep_list(rc);
  CsvWriter series(path_in(out_dir, "density_sweep.csv"),
                   {"point", "n", "rho", "t", "density_gap", "tr_micro", "top_overlap"});
  CsvWriter finals(path_in(out_dir, "density_sweep_final.csv"),
                   {"point", "n", "lambda", "rho", "T", "final_density_gap", "runtime_sec"});

  SweepResult res;
  json jpts = json::array();
  for (std::size_t idx = 0; idx < rc.sweep_n.size(); ++idx) {
    SweepPoint p;
    p.index = static_cast<int>(idx);
    p.n = rc.sweep_n[idx];
    StopWatch sw;
    try {
      RunConfig sub = rc;
      sub.n = p.n;
      Lattice lat = lattice_of(sub);
      Potential v = potential_of(sub, lat);
      ModelParams pm = params_of(sub, lat, v);
      p.rho = pm.rho;
      ExcitationSplit split = make_flat_excitation(lat);
      HartreeTrajectory ref = evolve_hartree(lat, v, pm, split.phi_ref_unit);
      std::vector<Eigen::VectorXcd> eps = evolve_excitation_linearized(lat, v, pm, ref, split.eps0);

      ManyBodyState psi0 = product_state(lat.site_count, p.n, split.phi0_unit);
      std::vector<ManyBodyState> states = {psi0};
      std::vector<GeneratorKind> kinds = {GeneratorKind::full};
      const int last = step_count(pm);
      double final_gap = 0;
      co_evolve(kinds, states, lat, v, pm, ref, rc.krylov, [&](int step, double t) {
        Eigen::MatrixXcd micro = micro_excitation_density(states[0], ref.frames[step], pm.lambda);
        Eigen::MatrixXcd macro = macro_excitation_density(eps[step]);
        double gap = trace_norm_diff(micro, macro);
        if (step == last) final_gap = gap;
        if (!keep_frame(step, last, rc.stride)) return;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(micro);
        Eigen::VectorXcd top = es.eigenvectors().col(lat.site_count - 1);
        double en = eps[step].norm();
        double ovl = en > 0 ? std::norm(top.dot(eps[step]) / en) : 0.0;
        series.row({cell(p.index), cell(p.n), format_g17(p.rho), format_g17(t), format_g17(gap),
                    format_g17(micro.trace().real()), format_g17(ovl)});
      });
      p.final_value = final_gap;
      finals.row({cell(p.index), cell(p.n), format_g17(pm.lambda), format_g17(p.rho),
                  format_g17(pm.t_final), format_g17(p.final_value), format_g17(sw.seconds())});
      p.ok = true;
      p.status = "ok";
    } catch (const std::exception& e) {
      p.status = e.what();
      res.any_failed = true;
    }
    json jp = {{"index", p.index},   {"n", p.n},
               {"rho", p.rho},       {"status", p.status},
               {"runtime_sec", sw.seconds()}};
    jpts.push_back(jp);
    res.points.push_back(p);
  }

  std::vector<double> xs, ys;
  for (const auto& p : res.points)
    if (p.ok) {
      xs.push_back(p.rho);
      ys.push_back(p.final_value);
    }
  res.loglog_slope = fit_loglog_slope(xs, ys);

  json j = manifest_base(rc, "sweep-density");
  j["points"] = jpts;
  j["loglog_slope"] = res.loglog_slope;
  write_manifest(out_dir, j);
  return res;
}

EnvelopeReport run_envelope_report(const RunConfig& rc, const std::string& out_dir) {
  fs::create_directories(out_dir);
  StopWatch sw;
  Lattice lat = lattice_of(rc);
  Potential v = potential_of(rc, lat);
  ModelParams pm = params_of(rc, lat, v);
  const int n = pm.n_particles;
  TensorShape sh = TensorShape::make(lat.site_count, n);

  ExcitationSplit split = make_flat_excitation(lat);
  HartreeTrajectory traj = evolve_hartree(lat, v, pm, split.phi0_unit);

  PaperWeights pw = make_weights(pm.rho, n);
  EnvelopeReport rep;
  rep.d_tight = coupling_constant_d(pm, v, traj.sup_phi_inf, DForm::tight);
  rep.d_coarse = coupling_constant_d(pm, v, traj.sup_phi_inf, DForm::coarse);
  Envelope env = make_envelope(pw, rep.d_tight, pm.lambda, rc.j_max);
  rep.c = env.c;
  rep.alpha_initial.assign(rc.j_max, 0.0);
  rep.min_margin.assign(rc.j_max, 0.0);
  std::vector<bool> margin_started(rc.j_max, false);

  // one row per (frame, j): moment series for both dynamics against the envelope;
  // margin is beta minus the exact-flow moment
  CsvWriter csv(path_in(out_dir, "envelope.csv"),
                {"t", "j", "alpha_psi", "alpha_tilde", "beta", "margin"});

  std::vector<Eigen::VectorXd> wj;
  for (int jj = 1; jj <= rc.j_max; ++jj) wj.push_back(pw.w_pow(jj));

  ManyBodyState psi0 = product_state(lat.site_count, n, split.phi0_unit);
  std::vector<ManyBodyState> states = {psi0, psi0};
  std::vector<GeneratorKind> kinds = {GeneratorKind::full, GeneratorKind::pair_projected};
  const int last = step_count(pm);
  bool margins_ok = true;

  co_evolve(kinds, states, lat, v, pm, traj, rc.krylov, [&](int step, double t) {
    for (int jj = 1; jj <= rc.j_max; ++jj) {
      double a_psi = counting_expectation(sh, traj.frames[step], wj[jj - 1], states[0].amps);
      double a_til = counting_expectation(sh, traj.frames[step], wj[jj - 1], states[1].amps);
      double beta = env.beta(jj, t);
      double slack = beta - a_psi;
      if (!margin_started[jj - 1] || slack < rep.min_margin[jj - 1]) {
        rep.min_margin[jj - 1] = slack;
        margin_started[jj - 1] = true;
      }
      if (jj >= 2 && env.gronwall_margin(jj, t) < -1e-12) margins_ok = false;
      if (step == 0) rep.alpha_initial[jj - 1] = a_psi;
      if (keep_frame(step, last, rc.stride))
        csv.row({format_g17(t), cell(jj), format_g17(a_psi), format_g17(a_til), format_g17(beta),
                 format_g17(slack)});
    }
  });
  rep.gronwall_ok = margins_ok;

  json j = manifest_base(rc, "envelope");
  j["c"] = rep.c;
  j["d_tight"] = rep.d_tight;
  j["d_coarse"] = rep.d_coarse;
  j["alpha_initial"] = rep.alpha_initial;
  j["min_margin"] = rep.min_margin;
  j["gronwall_ok"] = rep.gronwall_ok;
  j["runtime_sec"] = sw.seconds();
  write_manifest(out_dir, j);
  return rep;
}

}  // namespace bogolab
