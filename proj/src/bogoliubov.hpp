#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hartree.hpp"
#include "model.hpp"
#include "sectors.hpp"

namespace bogolab {

// one-body operator and the two projected interaction kernels, orbital frozen
struct Kernels {
  Eigen::MatrixXcd h;   // Hartree one-body operator, Hermitian
  Eigen::MatrixXcd k1;  // q [L phi(x) v(x-y) conj(phi(y))] q, Hermitian
  Eigen::MatrixXcd k2;  // (q x q) [L v(x-y) phi(x) phi(y)], symmetric
  Eigen::VectorXcd phi;
};

Kernels build_kernels(const Lattice& lat, const Potential& v, const ModelParams& pm,
                      const Eigen::VectorXcd& phi);

struct KernelNorms {
  double k1_op = 0;        // true operator norm
  double k2_fro = 0;       // true Hilbert-Schmidt norm
  double k1_young = 0;     // L ||phi||_inf^2 ||v||_1, provable bound on k1_op
  double k2_provable = 0;  // L ||phi||_inf ||v||_2 ||phi||_2, provable bound on k2_fro
  double k2_printed = 0;   // L ||phi||_inf^2 ||v||_2, reported only (not a bound in general)
};
KernelNorms kernel_norms(const Lattice& lat, const Potential& v, double lambda,
                         const Eigen::VectorXcd& phi, const Kernels& ker);

// gamma(x,y) = <a+_y a_x>, alpha(x,y) = <a_y a_x>
struct PairDensities {
  Eigen::MatrixXcd gamma, alpha;
  double time = 0;
};

PairDensities zero_densities(int sites);
PairDensities densities_from_sectors(const SectorFamily& fam);

// max of hermiticity defect of gamma and symmetry defect of alpha (diagnostic only)
double density_symmetry_residual(const PairDensities& pd);

// tr gamma + ||gamma||_F^2 - ||alpha||_F^2; zero along the flow from vacuum
double quadratic_invariant(const PairDensities& pd);

// i hbar dgamma = [h+k1, gamma] + k2 alpha+ - alpha k2+,
// i hbar dalpha = (h+k1) alpha + alpha (h+k1)^T + k2 + k2 gamma^T + gamma k2.
// RK4 with kernels rebuilt at the stage orbitals; returns frames at step times.
std::vector<PairDensities> evolve_gamma_alpha(const Lattice& lat, const Potential& v,
                                              const ModelParams& pm,
                                              const HartreeTrajectory& traj, PairDensities init);

}  // namespace bogolab
