#pragma once

#include <Eigen/Dense>

#include "manybody.hpp"
#include "model.hpp"

namespace bogolab {

// one-body reduced density, trace equal to <Psi,Psi>
Eigen::MatrixXcd reduce_one_body(const ManyBodyState& st);

// excitation block L q gamma q around the reference orbital
Eigen::MatrixXcd micro_excitation_density(const ManyBodyState& st,
                                          const Eigen::VectorXcd& phi_ref, double lambda);

// rank-one density of the effective excitation (carries its own 1/L mass)
Eigen::MatrixXcd macro_excitation_density(const Eigen::VectorXcd& eps);

double trace_norm(const Eigen::MatrixXcd& a);  // sum of |eigenvalues|, Hermitian input
double trace_norm_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace bogolab
