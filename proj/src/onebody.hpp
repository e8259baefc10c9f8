#pragma once

#include <Eigen/Dense>

#include "model.hpp"

namespace bogolab {

// (v * n)(x) = sum_y v(x-y) n(y), periodic
Eigen::VectorXd convolve_density(const Lattice& lat, const Potential& v,
                                 const Eigen::VectorXd& n);

Eigen::VectorXd density_of(const Eigen::VectorXcd& phi);

// mu = 1/2 sum_x (v*|phi|^2)(x) |phi(x)|^2
double chemical_potential(const Lattice& lat, const Potential& v, const Eigen::VectorXcd& phi);

// mean-field one-body potential g*[(v*|phi|^2) - mu] as a site diagonal, g = (N-1)/rho
Eigen::VectorXd mean_field_diagonal(const Lattice& lat, const Potential& v,
                                    const Eigen::VectorXcd& phi, double g);

// condensate reference plus small orthogonal excitation, in the convention
// where the reference has norm^2 = site count and the excitation norm^2 = 1/site count
struct ExcitationSplit {
  Eigen::VectorXcd phi_ref_unit;   // ||.||_2 = 1 (solver normalization)
  Eigen::VectorXcd eps0;           // orthogonal to phi_ref, ||eps0||^2 = 1/L
  Eigen::VectorXcd phi0_unit;      // normalize(sqrt(L)*phi_ref_unit + eps0)
};

// flat reference, gaussian bump excitation of width max(M/8,1) centered mid-lattice
ExcitationSplit make_flat_excitation(const Lattice& lat);

}  // namespace bogolab
