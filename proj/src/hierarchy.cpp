#include "hierarchy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tensor_ops.hpp"

namespace bogolab {

double hierarchy_k1_factor(HierarchyKind kind, int n, int k) {
  if (kind == HierarchyKind::bogoliubov) return 1.0;
  return double(n - k) / double(n);
}

double hierarchy_down_factor(HierarchyKind kind, DownwardPairSum conv, int n, int k) {
  if (k < 2) return 0;
  double f = 1.0 / std::sqrt(double(k) * double(k - 1));
  if (kind == HierarchyKind::finite_n)
    f *= std::sqrt(double(n - k + 2) * double(n - k + 1)) / double(n);
  if (conv == DownwardPairSum::ordered_literal) f *= 0.5;
  return f;
}

double hierarchy_up_factor(HierarchyKind kind, int n, int k) {
  double f = 0.5 * std::sqrt(double(k + 1) * double(k + 2));
  if (kind == HierarchyKind::finite_n) {
    if (n - k < 2) return 0;
    f *= std::sqrt(double(n - k) * double(n - k - 1)) / double(n);
  }
  return f;
}

HierarchyGenerator::HierarchyGenerator(HierarchyKind kind, DownwardPairSum conv,
                                       const Kernels& ker, int n_particles, int k_max)
    : kind_(kind), conv_(conv), ker_(ker), n_(n_particles), k_max_(k_max),
      sites_(static_cast<int>(ker.phi.size())) {
  offsets_.resize(k_max_ + 1);
  for (int k = 0; k <= k_max_; ++k) {
    offsets_[k] = total_;
    total_ += tensor_size(sites_, k);
  }
}

std::vector<cplx> HierarchyGenerator::operator()(const std::vector<cplx>& flat) const {
  require(flat.size() == static_cast<std::size_t>(total_), "packed family size mismatch");
  std::vector<cplx> out(flat.size(), cplx(0));
  for (int k = 0; k <= k_max_; ++k) {
    TensorShape sh = TensorShape::make(sites_, k);
    std::vector<cplx> in_k(flat.begin() + offsets_[k], flat.begin() + offsets_[k] + sh.size);
    std::vector<cplx> out_k(static_cast<std::size_t>(sh.size), cplx(0));

    if (k >= 1) {
      Eigen::MatrixXcd a = ker_.h + hierarchy_k1_factor(kind_, n_, k) * ker_.k1;
      for (int slot = 0; slot < k; ++slot) add_slot_operator(sh, slot, a, 1.0, in_k, out_k);
    }
    if (k >= 2) {
      std::vector<cplx> low(flat.begin() + offsets_[k - 2],
                            flat.begin() + offsets_[k - 2] + tensor_size(sites_, k - 2));
      add_pair_kernel_embedding(sh, low, ker_.k2,
                                hierarchy_down_factor(kind_, conv_, n_, k), out_k);
    }
    if (k + 2 <= k_max_) {
      TensorShape shp = TensorShape::make(sites_, k + 2);
      std::vector<cplx> high(flat.begin() + offsets_[k + 2],
                             flat.begin() + offsets_[k + 2] + shp.size);
      std::vector<cplx> ctr = contract_last_two_slots(shp, high, ker_.k2);
      axpy(hierarchy_up_factor(kind_, n_, k), ctr, out_k);
    }
    std::copy(out_k.begin(), out_k.end(), out.begin() + offsets_[k]);
  }
  return out;
}

std::vector<cplx> pack_family(const SectorFamily& fam) {
  std::vector<cplx> flat;
  for (const auto& c : fam.chis) flat.insert(flat.end(), c.begin(), c.end());
  return flat;
}

void unpack_family(const std::vector<cplx>& flat, SectorFamily& fam) {
  std::size_t off = 0;
  for (auto& c : fam.chis) {
    std::copy(flat.begin() + off, flat.begin() + off + c.size(), c.begin());
    off += c.size();
  }
  require(off == flat.size(), "packed family size mismatch");
}

namespace {
void reproject_family(SectorFamily& fam, const Eigen::VectorXcd& phi_new, double& removed) {
  fam.phi = phi_new;
  for (int k = 1; k <= fam.k_max; ++k) {
    TensorShape sh = fam.shape_of(k);
    double before = norm_sq(fam.chis[k]);
    for (int slot = 0; slot < k; ++slot)
      apply_slot_projector(sh, slot, phi_new, fam.chis[k], fam.chis[k], -1);
    removed += before - norm_sq(fam.chis[k]);
  }
}

HierarchyFrame make_frame(const SectorFamily& fam, double t, double removed, double warn,
                          double err) {
  HierarchyFrame fr;
  fr.t = t;
  fr.masses = fam.masses();
  for (double m : fr.masses) fr.total_mass += m;
  for (std::size_t k = 1; k < fr.masses.size(); k += 2) fr.odd_mass += fr.masses[k];
  int kk = static_cast<int>(fr.masses.size());
  fr.tail_mass = kk >= 3 ? fr.masses[kk - 1] + fr.masses[kk - 2] : 0.0;
  fr.reprojection_removed = removed;
  if (fr.total_mass > 0 && fr.tail_mass > err * fr.total_mass)
    throw std::runtime_error("sector cutoff too small: tail mass exceeded the error budget");
  fr.tail_warned = fr.total_mass > 0 && fr.tail_mass > warn * fr.total_mass;
  return fr;
}
}  // namespace

void hierarchy_step(SectorFamily& fam, std::vector<cplx>& flat, const Lattice& lat,
                    const Potential& v, const ModelParams& pm, const HartreeTrajectory& traj,
                    int s, const HierarchyOptions& opt, double& removed_accum) {
  const double dt = traj.dt;
  if (opt.convention == DownwardPairSum::unordered) {
    Kernels ker = build_kernels(lat, v, pm, traj.midpoints[s]);
    HierarchyGenerator gen(opt.kind, opt.convention, ker, pm.n_particles, fam.k_max);
    auto apply = [&gen](const std::vector<cplx>& x) { return gen(x); };
    lanczos_exp_step(apply, dt / pm.hbar, flat, opt.krylov);
  } else {
    // not self-adjoint as printed; integrate with classical RK4 instead
    Kernels k0 = build_kernels(lat, v, pm, traj.frames[s]);
    Kernels km = build_kernels(lat, v, pm, traj.midpoints[s]);
    Kernels k1 = build_kernels(lat, v, pm, traj.frames[s + 1]);
    HierarchyGenerator g0(opt.kind, opt.convention, k0, pm.n_particles, fam.k_max);
    HierarchyGenerator gm(opt.kind, opt.convention, km, pm.n_particles, fam.k_max);
    HierarchyGenerator g1(opt.kind, opt.convention, k1, pm.n_particles, fam.k_max);
    const cplx f(0, -1.0 / pm.hbar);
    auto stage = [&](const HierarchyGenerator& g, const std::vector<cplx>& x) {
      std::vector<cplx> r = g(x);
      scale(f, r);
      return r;
    };
    std::vector<cplx> r1 = stage(g0, flat);
    std::vector<cplx> x2 = flat;
    axpy(0.5 * dt, r1, x2);
    std::vector<cplx> r2 = stage(gm, x2);
    std::vector<cplx> x3 = flat;
    axpy(0.5 * dt, r2, x3);
    std::vector<cplx> r3 = stage(gm, x3);
    std::vector<cplx> x4 = flat;
    axpy(dt, r3, x4);
    std::vector<cplx> r4 = stage(g1, x4);
    axpy(dt / 6.0, r1, flat);
    axpy(dt / 3.0, r2, flat);
    axpy(dt / 3.0, r3, flat);
    axpy(dt / 6.0, r4, flat);
  }
  unpack_family(flat, fam);
  reproject_family(fam, traj.frames[s + 1], removed_accum);
  flat = pack_family(fam);
  fam.time = (s + 1) * dt;
}

HierarchyResult evolve_hierarchy(SectorFamily initial, const Lattice& lat, const Potential& v,
                                 const ModelParams& pm, const HartreeTrajectory& traj,
                                 const HierarchyOptions& opt) {
  if (opt.kind == HierarchyKind::finite_n)
    require(initial.k_max <= pm.n_particles, "sector cutoff exceeds particle number");
  const int steps = static_cast<int>(traj.midpoints.size());

  HierarchyResult res;
  res.family = std::move(initial);
  double removed = 0;
  // an untruncated family is exact; the cutoff monitor only applies below N
  double warn = opt.tail_warn, err = opt.tail_error;
  if (opt.kind == HierarchyKind::finite_n && res.family.k_max == pm.n_particles)
    warn = err = std::numeric_limits<double>::infinity();
  res.frames.push_back(make_frame(res.family, 0.0, removed, warn, err));

  std::vector<cplx> flat = pack_family(res.family);
  for (int s = 0; s < steps; ++s) {
    hierarchy_step(res.family, flat, lat, v, pm, traj, s, opt, removed);
    res.frames.push_back(make_frame(res.family, res.family.time, removed, warn, err));
  }
  return res;
}

}  // namespace bogolab
