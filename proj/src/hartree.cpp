#include "hartree.hpp"

#include <cmath>
#include <stdexcept>

#include "onebody.hpp"

namespace bogolab {

const Eigen::VectorXcd& HartreeTrajectory::at_time_index(int half_steps) const {
  if (half_steps % 2 == 0) return frames.at(half_steps / 2);
  return midpoints.at(half_steps / 2);
}

Eigen::MatrixXcd kinetic_propagator(const Lattice& lat, double hbar, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lat.neg_laplacian());
  require(es.info() == Eigen::Success, "eigendecomposition failed");
  const Eigen::MatrixXd& q = es.eigenvectors();
  Eigen::VectorXcd ph(lat.site_count);
  for (int i = 0; i < lat.site_count; ++i)
    ph[i] = std::exp(cplx(0, -dt * hbar * es.eigenvalues()[i]));
  return q.cast<cplx>() * ph.asDiagonal() * q.transpose().cast<cplx>();
}

namespace {
// exact nonlinear substep: phase rotation by the frozen mean-field diagonal
void nonlinear_step(const Lattice& lat, const Potential& v, double g, double hbar, double dt,
                    bool include_mu, Eigen::VectorXcd& phi) {
  Eigen::VectorXd n = phi.cwiseAbs2();
  Eigen::VectorXd conv = convolve_density(lat, v, n);
  double mu = include_mu ? 0.5 * conv.dot(n) : 0.0;
  for (int x = 0; x < phi.size(); ++x)
    phi[x] *= std::exp(cplx(0, -dt / hbar * g * (conv[x] - mu)));
}
}  // namespace

HartreeTrajectory evolve_hartree(const Lattice& lat, const Potential& v, const ModelParams& pm,
                                 const Eigen::VectorXcd& phi0, const HartreeOptions& opt) {
  require(phi0.size() == lat.site_count, "initial state size mismatch");
  require(std::abs(phi0.norm() - 1.0) < 1e-10, "initial state must be unit-normalized");
  const double g = pm.mean_field_coupling();
  const int steps = static_cast<int>(std::llround(pm.t_final / pm.dt));
  require(std::abs(steps * pm.dt - pm.t_final) < 1e-9 * std::max(1.0, pm.t_final),
          "dt must divide the final time");

  // run on the half grid so midpoints come out of the same scheme
  const double h = pm.dt / 2;
  Eigen::MatrixXcd kin_half = kinetic_propagator(lat, pm.hbar, h / 2);

  HartreeTrajectory tr;
  tr.dt = pm.dt;
  tr.t_final = pm.t_final;
  tr.frames.reserve(steps + 1);
  tr.midpoints.reserve(steps);

  Eigen::VectorXcd phi = phi0;
  auto record = [&](int half_idx) {
    if (half_idx % 2 == 0)
      tr.frames.push_back(phi);
    else
      tr.midpoints.push_back(phi);
    tr.sup_phi_inf = std::max(tr.sup_phi_inf, phi.cwiseAbs().maxCoeff());
  };
  record(0);
  for (int s = 0; s < 2 * steps; ++s) {
    phi = kin_half * phi;
    nonlinear_step(lat, v, g, pm.hbar, h, opt.include_mu, phi);
    phi = kin_half * phi;
    if (std::abs(phi.norm() - 1.0) > opt.norm_tol)
      throw std::runtime_error("mean-field solver lost normalization");
    record(s + 1);
  }
  return tr;
}

double hartree_energy(const Lattice& lat, const Potential& v, double g, double hbar,
                      const Eigen::VectorXcd& phi) {
  Eigen::MatrixXd lap = lat.neg_laplacian();
  double kin = hbar * hbar * std::real(phi.dot(lap.cast<cplx>() * phi));
  Eigen::VectorXd n = phi.cwiseAbs2();
  double pot = 0.5 * g * convolve_density(lat, v, n).dot(n);
  return kin + pot;
}

std::vector<Eigen::VectorXcd> evolve_excitation_linearized(const Lattice& lat, const Potential& v,
                                                           const ModelParams& pm,
                                                           const HartreeTrajectory& ref,
                                                           const Eigen::VectorXcd& eps0) {
  const int L = lat.site_count;
  const double gbar = double(pm.n_particles - 1) / double(pm.n_particles);
  const double sqrtL = std::sqrt(double(L));
  const Eigen::MatrixXd lap = lat.neg_laplacian();
  const int steps = static_cast<int>(ref.midpoints.size());

  auto rhs = [&](const Eigen::VectorXcd& psi, const Eigen::VectorXcd& eps) -> Eigen::VectorXcd {
    Eigen::VectorXd npsi = psi.cwiseAbs2();
    Eigen::VectorXd conv = convolve_density(lat, v, npsi);
    double mu = 0.5 / L * conv.dot(npsi);
    Eigen::VectorXd dn = 2.0 * (psi.conjugate().cwiseProduct(eps)).real();
    Eigen::VectorXd convd = convolve_density(lat, v, dn);
    double dmu = conv.dot(dn) / L;
    Eigen::VectorXcd out = pm.hbar * pm.hbar * (lap.cast<cplx>() * eps);
    out += gbar * ((conv.array() - mu) * eps.array()).matrix();
    out += gbar * ((convd.array() - dmu) * psi.array()).matrix();
    return out * cplx(0, -1.0 / pm.hbar);
  };

  std::vector<Eigen::VectorXcd> out;
  out.reserve(steps + 1);
  Eigen::VectorXcd eps = eps0;
  out.push_back(eps);
  const double dt = ref.dt;
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXcd psi0 = sqrtL * ref.frames[s];
    Eigen::VectorXcd psih = sqrtL * ref.midpoints[s];
    Eigen::VectorXcd psi1 = sqrtL * ref.frames[s + 1];
    Eigen::VectorXcd k1 = rhs(psi0, eps);
    Eigen::VectorXcd k2 = rhs(psih, eps + 0.5 * dt * k1);
    Eigen::VectorXcd k3 = rhs(psih, eps + 0.5 * dt * k2);
    Eigen::VectorXcd k4 = rhs(psi1, eps + dt * k3);
    eps += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back(eps);
  }
  return out;
}

}  // namespace bogolab
