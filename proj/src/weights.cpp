#include "weights.hpp"

#include <cmath>

namespace bogolab {

double PaperWeights::w(int k) const {
  require(k >= 0, "weight argument is negative");
  return std::min((k + 1) / rho, 1.0);
}

Eigen::VectorXd PaperWeights::w_pow(int j) const {
  Eigen::VectorXd out(n + 1);
  for (int k = 0; k <= n; ++k) out[k] = std::pow(w(k), j);
  return out;
}

bool PaperWeights::on_support(int k) const { return k >= 0 && k <= rho; }

PaperWeights make_weights(double rho, int n) {
  require(rho > 0, "density must be positive");
  require(n >= 1, "particle number must be positive");
  return PaperWeights{rho, n};
}

double choose_cj(const PaperWeights& pw, int j, double c_prev) {
  require(j >= 1, "envelope order starts at 1");
  double best = 0;
  const int k_top = static_cast<int>(std::floor(pw.rho));
  for (int k = 0; k <= k_top; ++k) {
    if (!pw.on_support(k)) continue;
    double wk = pw.w(k);
    for (int d : {-2, -1, 1, 2}) {
      if (k + d < 0) continue;
      double diff = std::abs(std::pow(pw.w(k + d), j) - std::pow(wk, j));
      best = std::max(best, pw.rho * diff / std::pow(wk, j - 1));
    }
  }
  require(best > 0 || c_prev > 0, "flat weight function: constants degenerate (rho <= 1)");
  return std::max(best, c_prev);
}

double Envelope::beta(int j, double t) const {
  require(j >= 1 && j <= static_cast<int>(c.size()), "envelope order out of range");
  const double dcj = d_const * c[j - 1];
  if (t <= 0) return j == 1 ? lambda / rho : 0.0;
  double logb = dcj * t + j * std::log(lambda / rho) + (j - 1) * std::log(dcj * t) -
                std::lgamma(double(j));
  return std::exp(logb);
}

double Envelope::beta_derivative(int j, double t) const {
  const double dcj = d_const * c[j - 1];
  if (t <= 0) {
    if (j == 1) return dcj * lambda / rho;
    if (j == 2) return dcj * (lambda / rho) * (lambda / rho);
    return 0.0;
  }
  return (dcj + (j - 1) / t) * beta(j, t);
}

double Envelope::gronwall_margin(int j, double t) const {
  require(j >= 2, "margin defined from the second order up");
  const double dcj = d_const * c[j - 1];
  return beta_derivative(j, t) - dcj * (beta(j, t) + (lambda / rho) * beta(j - 1, t));
}

Envelope make_envelope(const PaperWeights& pw, double d_const, double lambda, int j_max) {
  require(d_const >= 0, "coupling constant must be nonnegative");
  require(j_max >= 1, "need at least one envelope order");
  Envelope env;
  env.d_const = d_const;
  env.lambda = lambda;
  env.rho = pw.rho;
  double prev = 0;
  for (int j = 1; j <= j_max; ++j) {
    prev = choose_cj(pw, j, prev);
    env.c.push_back(prev);
  }
  return env;
}

}  // namespace bogolab
