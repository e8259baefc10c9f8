#include "sectors.hpp"

#include <cmath>

namespace bogolab {

double binom_d(int n, int k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
  return r;
}

std::vector<double> SectorFamily::masses() const {
  std::vector<double> m(chis.size());
  for (std::size_t k = 0; k < chis.size(); ++k) m[k] = norm_sq(chis[k]);
  return m;
}

double SectorFamily::total_mass() const {
  double s = 0;
  for (const auto& c : chis) s += norm_sq(c);
  return s;
}

SectorFamily decompose_sectors(const ManyBodyState& st, const Eigen::VectorXcd& phi, int k_max) {
  require(k_max >= 0 && k_max <= st.n_particles, "sector cutoff out of range");
  require(phi.size() == st.sites, "orbital size mismatch");
  require(std::abs(phi.norm() - 1.0) < 1e-9, "orbital must be unit-normalized");
  SectorFamily fam;
  fam.sites = st.sites;
  fam.n_particles = st.n_particles;
  fam.k_max = k_max;
  fam.time = st.time;
  fam.phi = phi;
  fam.chis.resize(k_max + 1);

  // contract the last slot down to k_max, then peel one slot per sector
  std::vector<cplx> cur = st.amps;
  for (int k = st.n_particles; k > k_max; --k)
    cur = contract_last_slot(TensorShape::make(st.sites, k), cur, phi);
  for (int k = k_max; k >= 0; --k) {
    TensorShape sh = TensorShape::make(st.sites, k);
    std::vector<cplx> chi = cur;
    for (int slot = 0; slot < k; ++slot) apply_slot_projector(sh, slot, phi, chi, chi, -1);
    scale(std::sqrt(binom_d(st.n_particles, k)), chi);
    fam.chis[k] = std::move(chi);
    if (k > 0) cur = contract_last_slot(sh, cur, phi);
  }
  return fam;
}

ManyBodyState reconstruct_state(const SectorFamily& fam) {
  ManyBodyState st;
  st.sites = fam.sites;
  st.n_particles = fam.n_particles;
  st.time = fam.time;
  TensorShape sh = st.shape();
  st.amps.assign(static_cast<std::size_t>(sh.size), cplx(0));
  for (int k = 0; k <= fam.k_max; ++k)
    add_sector_embedding(sh, fam.chis[k], k, fam.phi,
                         1.0 / std::sqrt(binom_d(fam.n_particles, k)), st.amps);
  return st;
}

SectorFamily vacuum_family(int sites, int n_particles, int k_max, const Eigen::VectorXcd& phi) {
  SectorFamily fam;
  fam.sites = sites;
  fam.n_particles = n_particles;
  fam.k_max = k_max;
  fam.phi = phi;
  fam.chis.resize(k_max + 1);
  for (int k = 0; k <= k_max; ++k)
    fam.chis[k].assign(static_cast<std::size_t>(tensor_size(sites, k)), cplx(0));
  fam.chis[0][0] = 1;
  return fam;
}

double slot_orthogonality_residual(const SectorFamily& fam) {
  double worst = 0;
  for (int k = 1; k <= fam.k_max; ++k) {
    TensorShape sh = fam.shape_of(k);
    std::vector<cplx> tmp(fam.chis[k].size());
    for (int slot = 0; slot < k; ++slot) {
      apply_slot_projector(sh, slot, fam.phi, fam.chis[k], tmp, 0);
      worst = std::max(worst, std::sqrt(norm_sq(tmp)));
    }
  }
  return worst;
}

}  // namespace bogolab
