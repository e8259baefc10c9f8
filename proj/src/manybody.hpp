#pragma once

#include <Eigen/Dense>
#include <vector>

#include "model.hpp"
#include "rng.hpp"
#include "tensor_ops.hpp"

namespace bogolab {

// full N-body amplitude tensor, slot j has stride sites^j
struct ManyBodyState {
  int sites = 0;
  int n_particles = 0;
  double time = 0;
  std::vector<cplx> amps;

  TensorShape shape() const { return TensorShape::make(sites, n_particles); }
  double norm() const { return std::sqrt(norm_sq(amps)); }
  void normalize();
};

ManyBodyState product_state(int sites, int n_particles, const Eigen::VectorXcd& phi);
ManyBodyState random_symmetric_state(int sites, int n_particles, Rng& rng);

double norm_difference_sq(const ManyBodyState& a, const ManyBodyState& b);
// same quantity as 2 Re<a, a-b>, exact when both states are normalized
double norm_difference_sq_linear(const ManyBodyState& a, const ManyBodyState& b);
cplx overlap(const ManyBodyState& a, const ManyBodyState& b);

}  // namespace bogolab
