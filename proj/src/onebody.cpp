#include "onebody.hpp"

#include <cmath>

namespace bogolab {

Eigen::VectorXd convolve_density(const Lattice& lat, const Potential& v,
                                 const Eigen::VectorXd& n) {
  const int L = lat.site_count;
  require(n.size() == L, "density size mismatch");
  Eigen::VectorXd out(L);
  for (int x = 0; x < L; ++x) {
    double s = 0;
    for (int y = 0; y < L; ++y) s += v.values[lat.displacement(x, y)] * n[y];
    out[x] = s;
  }
  return out;
}

Eigen::VectorXd density_of(const Eigen::VectorXcd& phi) { return phi.cwiseAbs2(); }

double chemical_potential(const Lattice& lat, const Potential& v, const Eigen::VectorXcd& phi) {
  Eigen::VectorXd n = density_of(phi);
  return 0.5 * convolve_density(lat, v, n).dot(n);
}

Eigen::VectorXd mean_field_diagonal(const Lattice& lat, const Potential& v,
                                    const Eigen::VectorXcd& phi, double g) {
  Eigen::VectorXd n = density_of(phi);
  Eigen::VectorXd conv = convolve_density(lat, v, n);
  double mu = 0.5 * conv.dot(n);
  return g * (conv.array() - mu).matrix();
}

ExcitationSplit make_flat_excitation(const Lattice& lat) {
  const int L = lat.site_count;
  const int m = lat.sites_per_dim;
  ExcitationSplit sp;
  sp.phi_ref_unit = Eigen::VectorXcd::Constant(L, cplx(1.0 / std::sqrt(double(L)), 0.0));

  const double width = std::max(m / 8, 1);
  Eigen::VectorXcd bump(L);
  for (int s = 0; s < L; ++s) {
    int t = s;
    double d2 = 0;
    for (int dd = 0; dd < lat.dim; ++dd) {
      int c = t % m;
      t /= m;
      int diff = std::abs(c - m / 2);
      diff = std::min(diff, m - diff);
      d2 += double(diff) * diff;
    }
    bump[s] = std::exp(-d2 / (2.0 * width * width));
  }
  // remove the condensate component, then set excitation mass to 1/L
  cplx overlap = sp.phi_ref_unit.dot(bump);
  bump -= overlap * sp.phi_ref_unit;
  require(bump.norm() > 1e-14, "excitation bump vanished after orthogonalization");
  sp.eps0 = bump / (bump.norm() * std::sqrt(double(L)));

  Eigen::VectorXcd full = std::sqrt(double(L)) * sp.phi_ref_unit + sp.eps0;
  sp.phi0_unit = full / full.norm();
  return sp;
}

}  // namespace bogolab
