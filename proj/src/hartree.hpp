#pragma once

#include <Eigen/Dense>
#include <vector>

#include "model.hpp"

namespace bogolab {

struct HartreeOptions {
  bool include_mu = true;   // keep the chemical-potential gauge term
  double norm_tol = 1e-9;   // per-run drift budget, splitting is unitary
};

struct HartreeTrajectory {
  std::vector<Eigen::VectorXcd> frames;     // steps+1 states at t = k*dt
  std::vector<Eigen::VectorXcd> midpoints;  // steps states at t = (k+1/2)*dt
  double dt = 0;
  double t_final = 0;
  double sup_phi_inf = 0;  // max_t ||phi(t)||_inf over frames and midpoints

  const Eigen::VectorXcd& at_time_index(int half_steps) const;  // 0=frame0,1=mid0,2=frame1,...
};

// exp(-i dt hbar (-Laplacian)), dense via spectral decomposition
Eigen::MatrixXcd kinetic_propagator(const Lattice& lat, double hbar, double dt);

// i hbar dphi/dt = hbar^2 (-Lap) phi + g[(v*|phi|^2) - mu] phi, g = (N-1)/rho,
// Strang splitting; the nonlinear substep is an exact phase rotation.
HartreeTrajectory evolve_hartree(const Lattice& lat, const Potential& v, const ModelParams& pm,
                                 const Eigen::VectorXcd& phi0, const HartreeOptions& opt = {});

double hartree_energy(const Lattice& lat, const Potential& v, double g, double hbar,
                      const Eigen::VectorXcd& phi);

// first variation of the mean-field flow around psi(t) = sqrt(L) * phi_ref(t):
// i hbar deps/dt = hbar^2(-Lap)eps + gbar[(v*|psi|^2) - mu]eps + gbar[(v*dn) - dmu]psi,
// dn = 2 Re(conj(psi) eps), gbar = (N-1)/N.  Real-linear, integrated with RK4 using
// the reference trajectory's frames and midpoints.  Returns eps at frame times.
std::vector<Eigen::VectorXcd> evolve_excitation_linearized(const Lattice& lat, const Potential& v,
                                                           const ModelParams& pm,
                                                           const HartreeTrajectory& ref,
                                                           const Eigen::VectorXcd& eps0);

}  // namespace bogolab
