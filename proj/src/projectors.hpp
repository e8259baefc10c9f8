#pragma once

#include <Eigen/Dense>
#include <vector>

#include "model.hpp"
#include "tensor_ops.hpp"

namespace bogolab {

// rank-one condensate projector on one slot and its complement; in == out is allowed
void apply_p(const TensorShape& sh, int slot, const Eigen::VectorXcd& phi,
             const std::vector<cplx>& in, std::vector<cplx>& out);
void apply_q(const TensorShape& sh, int slot, const Eigen::VectorXcd& phi,
             const std::vector<cplx>& in, std::vector<cplx>& out);

// q-count operator sum_j q_j (overwrites out; out must not alias in)
void apply_q_count(const TensorShape& sh, const Eigen::VectorXcd& phi, const std::vector<cplx>& in,
                   std::vector<cplx>& out);

// eigenprojector of the q-count onto eigenvalue k, Lagrange product form
void apply_sector_projector(const TensorShape& sh, const Eigen::VectorXcd& phi, int k,
                            const std::vector<cplx>& in, std::vector<cplx>& out);

// masses ||P_k psi||^2, k = 0..slots
std::vector<double> q_count_masses(const TensorShape& sh, const Eigen::VectorXcd& phi,
                                   const std::vector<cplx>& psi);

// weight on the q-count spectrum, m has slots+1 entries; shifted variant keeps only
// sectors j with 0 <= j+shift <= slots: out (mode 0/+1/-1) = sum_j m(j+shift) P_j in
void apply_weight(const TensorShape& sh, const Eigen::VectorXcd& phi, const Eigen::VectorXd& m,
                  int shift, const std::vector<cplx>& in, std::vector<cplx>& out, int mode = 0);

// <psi, m-hat psi>
double counting_expectation(const TensorShape& sh, const Eigen::VectorXcd& phi,
                            const Eigen::VectorXd& m, const std::vector<cplx>& psi);

// W(x,y) = v(x-y) - (v*|phi|^2)(x) - (v*|phi|^2)(y) + 2 mu, no coupling prefactor
Eigen::MatrixXd centered_pair_interaction(const Lattice& lat, const Potential& v,
                                          const Eigen::VectorXcd& phi);

// channels of d/dt <psi, m-hat psi>; the pp->pp channel vanishes identically,
// the exact flow adds all three, the pair-projected flow omits c
struct CountingDerivatives {
  double a = 0, b = 0, c = 0;
  double exact_total() const { return a + b + c; }
  double projected_total() const { return a + b; }
};

CountingDerivatives counting_derivative_channels(const Lattice& lat, const Potential& v,
                                                 const ModelParams& pm,
                                                 const Eigen::VectorXcd& phi,
                                                 const Eigen::VectorXd& m,
                                                 const std::vector<cplx>& psi);

}  // namespace bogolab
