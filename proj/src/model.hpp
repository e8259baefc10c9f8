#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bogolab {

using cplx = std::complex<double>;

// Periodic lattice with M sites per dimension, unit spacing.
// Sites are flattened row-major: site = sum_d coord[d] * M^d.
struct Lattice {
  int dim = 1;
  int sites_per_dim = 2;
  int site_count = 2;                // M^dim
  std::vector<int> nbr;              // site_count * 2*dim neighbor site indices
  std::vector<int> disp;             // site_count * site_count displacement table

  static Lattice make(int d, int m);

  // periodic displacement a-b encoded as a site index
  int displacement(int a, int b) const { return disp[static_cast<std::size_t>(a) * site_count + b]; }
  int neighbor(int s, int k) const { return nbr[static_cast<std::size_t>(s) * 2 * dim + k]; }

  // second-difference negative Laplacian, -Δ >= 0
  Eigen::MatrixXd neg_laplacian() const;
  // eigenvalues 4 * sum_d sin^2(pi k_d / M), sorted ascending
  std::vector<double> neg_laplacian_spectrum() const;
};

// Interaction potential sampled on periodic displacement vectors. Real, even.
struct Potential {
  Eigen::VectorXd values;   // size = lattice site_count
  bool repulsive = false;

  static Potential from_values(const Lattice& lat, Eigen::VectorXd vals);
  static Potential zero(const Lattice& lat);
  static Potential delta(const Lattice& lat, double amplitude);
  static Potential gaussian(const Lattice& lat, double amplitude, double sigma);
  static Potential box(const Lattice& lat, double amplitude, double radius);

  struct Norms {
    double l1 = 0, l2 = 0, linf = 0;
  };
  Norms norms() const;
  double max_abs() const { return norms().linf; }
};

// Global run parameters. lambda = N / rho is the dimensionless volume and
// equals the site count whenever a lattice is attached.
struct ModelParams {
  int n_particles = 2;
  double rho = 1.0;
  double lambda = 2.0;
  double hbar = 1.0;
  double dt = 0.01;
  double t_final = 0.1;

  double coupling() const { return 1.0 / rho; }                  // per-pair strength
  double mean_field_coupling() const { return (n_particles - 1) / rho; }

  static ModelParams make(int n, double rho, double hbar, double dt, double t_final);
  static ModelParams for_lattice(const Lattice& lat, int n, double hbar, double dt, double t_final);
};

// Conservative step size: dt <= 0.05 * hbar / (|h0|_est + (N-1) |v|_inf / rho),
// with |h0|_est = 4 d hbar^2 for the periodic stencil.
double default_dt(const Lattice& lat, int n, double rho, double hbar, const Potential& v);

// Gronwall rate constant built from potential norms and the condensate sup.
//   tight:  4 sup_t hbar^-1 (1 + sqrt(lambda) |phi|_inf)^2 (|v|_1 + |v|_2 + |v|_inf)
//   coarse: 9 sup_t hbar^-1 (1 + sqrt(lambda) |phi|_inf)^2 (...)
enum class DForm { tight, coarse };
double coupling_constant_d(const ModelParams& params, const Potential& v, double phi_sup,
                           DForm form = DForm::tight);

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace bogolab
