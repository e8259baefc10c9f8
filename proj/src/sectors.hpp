#pragma once

#include <Eigen/Dense>
#include <vector>

#include "manybody.hpp"
#include "model.hpp"
#include "tensor_ops.hpp"

namespace bogolab {

double binom_d(int n, int k);

// excitation expansion around phi: Psi = sum_k sym(phi^(N-k) (x) chi_k),
// chi_k is an L^k tensor with every slot orthogonal to phi
struct SectorFamily {
  int sites = 0;
  int n_particles = 0;
  int k_max = 0;
  double time = 0;
  Eigen::VectorXcd phi;
  std::vector<std::vector<cplx>> chis;  // index k = 0..k_max

  TensorShape shape_of(int k) const { return TensorShape::make(sites, k); }
  std::vector<double> masses() const;
  double total_mass() const;
};

// chi_k = sqrt(binom(N,k)) q^(k) <phi^(N-k), Psi>_(last slots)
SectorFamily decompose_sectors(const ManyBodyState& st, const Eigen::VectorXcd& phi, int k_max);

// inverse embedding, exact when k_max = N
ManyBodyState reconstruct_state(const SectorFamily& fam);

// zero-sector family around phi (vacuum: chi_0 = 1, rest = 0)
SectorFamily vacuum_family(int sites, int n_particles, int k_max, const Eigen::VectorXcd& phi);

double slot_orthogonality_residual(const SectorFamily& fam);

}  // namespace bogolab
