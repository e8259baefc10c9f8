#include "projectors.hpp"

#include <cmath>

#include "onebody.hpp"

namespace bogolab {

void apply_p(const TensorShape& sh, int slot, const Eigen::VectorXcd& phi,
             const std::vector<cplx>& in, std::vector<cplx>& out) {
  apply_slot_projector(sh, slot, phi, in, out, 0);
}

void apply_q(const TensorShape& sh, int slot, const Eigen::VectorXcd& phi,
             const std::vector<cplx>& in, std::vector<cplx>& out) {
  if (&out != &in) out = in;
  apply_slot_projector(sh, slot, phi, out, out, -1);
}

void apply_q_count(const TensorShape& sh, const Eigen::VectorXcd& phi, const std::vector<cplx>& in,
                   std::vector<cplx>& out) {
  out.assign(in.size(), cplx(0));
  axpy(double(sh.slots), in, out);
  for (int j = 0; j < sh.slots; ++j) apply_slot_projector(sh, j, phi, in, out, -1);
}

void apply_sector_projector(const TensorShape& sh, const Eigen::VectorXcd& phi, int k,
                            const std::vector<cplx>& in, std::vector<cplx>& out) {
  const int n = sh.slots;
  require(k >= 0 && k <= n, "sector index out of range");
  out = in;
  std::vector<cplx> tmp(in.size());
  for (int l = 0; l <= n; ++l) {
    if (l == k) continue;
    apply_q_count(sh, phi, out, tmp);         // tmp = Nq * out
    axpy(-double(l), out, tmp);               // tmp = (Nq - l) out
    scale(1.0 / double(k - l), tmp);
    out.swap(tmp);
  }
}

std::vector<double> q_count_masses(const TensorShape& sh, const Eigen::VectorXcd& phi,
                                   const std::vector<cplx>& psi) {
  std::vector<double> masses(sh.slots + 1);
  std::vector<cplx> tmp(psi.size());
  for (int k = 0; k <= sh.slots; ++k) {
    apply_sector_projector(sh, phi, k, psi, tmp);
    masses[k] = norm_sq(tmp);
  }
  return masses;
}

void apply_weight(const TensorShape& sh, const Eigen::VectorXcd& phi, const Eigen::VectorXd& m,
                  int shift, const std::vector<cplx>& in, std::vector<cplx>& out, int mode) {
  const int n = sh.slots;
  require(m.size() == n + 1, "weight vector needs slots+1 entries");
  std::vector<cplx> acc(in.size(), cplx(0));
  std::vector<cplx> tmp(in.size());
  for (int j = 0; j <= n; ++j) {
    int idx = j + shift;
    if (idx < 0 || idx > n) continue;
    if (m[idx] == 0) continue;
    apply_sector_projector(sh, phi, j, in, tmp);
    axpy(m[idx], tmp, acc);
  }
  if (mode == 0)
    out.swap(acc);
  else
    axpy(mode > 0 ? 1.0 : -1.0, acc, out);
}

double counting_expectation(const TensorShape& sh, const Eigen::VectorXcd& phi,
                            const Eigen::VectorXd& m, const std::vector<cplx>& psi) {
  require(m.size() == sh.slots + 1, "weight vector needs slots+1 entries");
  std::vector<double> masses = q_count_masses(sh, phi, psi);
  double a = 0;
  for (int k = 0; k <= sh.slots; ++k) a += m[k] * masses[k];
  return a;
}

Eigen::MatrixXd centered_pair_interaction(const Lattice& lat, const Potential& v,
                                          const Eigen::VectorXcd& phi) {
  const int L = lat.site_count;
  Eigen::VectorXd n = density_of(phi);
  Eigen::VectorXd mf = convolve_density(lat, v, n);
  double mu = 0.5 * mf.dot(n);
  Eigen::MatrixXd w(L, L);
  for (int x = 0; x < L; ++x)
    for (int y = 0; y < L; ++y)
      w(x, y) = v.values[lat.displacement(x, y)] - mf[x] - mf[y] + 2.0 * mu;
  return w;
}

CountingDerivatives counting_derivative_channels(const Lattice& lat, const Potential& v,
                                                 const ModelParams& pm,
                                                 const Eigen::VectorXcd& phi,
                                                 const Eigen::VectorXd& m,
                                                 const std::vector<cplx>& psi) {
  TensorShape sh = TensorShape::make(lat.site_count, pm.n_particles);
  require(psi.size() == static_cast<std::size_t>(sh.size), "state size mismatch");
  const double coupling = pm.lambda * (pm.n_particles - 1);
  Eigen::MatrixXd w = coupling * centered_pair_interaction(lat, v, phi);

  std::vector<cplx> pp(psi.size()), tmp(psi.size()), wpp(psi.size());
  apply_p(sh, 0, phi, psi, tmp);
  apply_p(sh, 1, phi, tmp, pp);            // pp = p0 p1 psi
  pair01_multiply(sh, w, pp, wpp);         // wpp = W pp psi

  std::vector<cplx> u1(psi.size()), u2(psi.size());
  apply_weight(sh, phi, m, 0, psi, u1, 0);
  apply_weight(sh, phi, m, -1, psi, u1, -1);  // u1 = (m - m_{-1}) psi
  apply_weight(sh, phi, m, 0, psi, u2, 0);
  apply_weight(sh, phi, m, -2, psi, u2, -1);  // u2 = (m - m_{-2}) psi

  CountingDerivatives g;
  // a: p0 q1 W p0 p1
  apply_p(sh, 0, phi, wpp, tmp);
  apply_q(sh, 1, phi, tmp, tmp);
  g.a = 2.0 / pm.hbar * std::imag(dot(u1, tmp));
  // b: q0 q1 W p0 p1
  apply_q(sh, 0, phi, wpp, tmp);
  apply_q(sh, 1, phi, tmp, tmp);
  g.b = 1.0 / pm.hbar * std::imag(dot(u2, tmp));
  // c: q0 q1 W p0 q1
  apply_p(sh, 0, phi, psi, tmp);
  apply_q(sh, 1, phi, tmp, tmp);
  pair01_multiply(sh, w, tmp, wpp);
  apply_q(sh, 0, phi, wpp, tmp);
  apply_q(sh, 1, phi, tmp, tmp);
  g.c = 2.0 / pm.hbar * std::imag(dot(u1, tmp));
  return g;
}

}  // namespace bogolab
