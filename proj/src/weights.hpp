#pragma once

#include <Eigen/Dense>
#include <vector>

#include "model.hpp"

namespace bogolab {

// counting weight w(k) = min((k+1)/rho, 1); the cap keeps w monotone and <= 1
// (the printed form is uncapped, which breaks both properties past k = rho - 1)
struct PaperWeights {
  double rho = 0;
  int n = 0;  // weight vectors live on k = 0..n

  double w(int k) const;
  Eigen::VectorXd w_pow(int j) const;       // entries w(k)^j for k = 0..n
  bool on_support(int k) const;             // support of the dominating l_j: k <= rho
};

PaperWeights make_weights(double rho, int n);

// minimal c_j with (c_j/rho) w^{j-1}(k) >= |w^j(k +- 1) - w^j(k)|, |w^j(k +- 2) - w^j(k)|
// on the support; finite exact maximization, clamped to at least c_prev
double choose_cj(const PaperWeights& pw, int j, double c_prev);

struct Envelope {
  double d_const = 0;
  double lambda = 0, rho = 0;
  std::vector<double> c;  // c[j-1] holds c_j

  // beta_j(t) = e^(D c_j t) (L/rho)^j (D c_j t)^(j-1) / (j-1)!, log-space
  double beta(int j, double t) const;
  double beta_derivative(int j, double t) const;  // analytic
  // d beta_j/dt - D c_j (beta_j + (L/rho) beta_{j-1}), nonnegative for j >= 2
  double gronwall_margin(int j, double t) const;
};

Envelope make_envelope(const PaperWeights& pw, double d_const, double lambda, int j_max);

}  // namespace bogolab
