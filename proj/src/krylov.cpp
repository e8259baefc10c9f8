#include "krylov.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "tensor_ops.hpp"

namespace bogolab {

namespace {
// y = exp(-i theta T) e1 for the real symmetric tridiagonal T of size k
Eigen::VectorXcd tridiag_exp_e1(const std::vector<double>& alpha, const std::vector<double>& beta,
                                int k, double theta) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  Eigen::VectorXcd ph(k);
  for (int i = 0; i < k; ++i) ph[i] = std::exp(cplx(0, -theta * es.eigenvalues()[i]));
  return es.eigenvectors().cast<cplx>() *
         (ph.array() * es.eigenvectors().row(0).transpose().cast<cplx>().array()).matrix();
}
}  // namespace

KrylovReport lanczos_exp_step(
    const std::function<std::vector<cplx>(const std::vector<cplx>&)>& apply_h, double theta,
    std::vector<cplx>& psi, const KrylovOptions& opt) {
  KrylovReport rep;
  const double nrm0 = std::sqrt(norm_sq(psi));
  if (nrm0 == 0) return rep;

  std::vector<std::vector<cplx>> basis;
  basis.reserve(opt.m_max + 1);
  basis.push_back(psi);
  scale(1.0 / nrm0, basis[0]);

  std::vector<double> alpha, beta;
  Eigen::VectorXcd y;
  int k = 0;
  bool happy = false;
  double resid = 0;

  for (int j = 0; j < opt.m_max; ++j) {
    std::vector<cplx> w = apply_h(basis[j]);
    cplx diag = 0;
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= j; ++i) {
        cplx c = dot(basis[i], w);
        axpy(-c, basis[i], w);
        if (i == j) diag += c;
      }
    alpha.push_back(std::real(diag));
    double b = std::sqrt(norm_sq(w));
    k = j + 1;
    y = tridiag_exp_e1(alpha, beta, k, theta);
    resid = b * std::abs(y[k - 1]);
    if (b < 1e-13 * std::max(1.0, std::abs(alpha[j]))) {
      happy = true;
      resid = 0;
      break;
    }
    if (resid < opt.residual_tol && k >= std::min(3, opt.m)) break;
    if (j + 1 == opt.m_max) break;
    beta.push_back(b);
    scale(1.0 / b, w);
    basis.push_back(std::move(w));
  }

  if (!happy && resid > opt.fail_tol)
    throw std::runtime_error("exponential step did not converge; reduce dt or raise m_max");

  std::fill(psi.begin(), psi.end(), cplx(0));
  for (int i = 0; i < k; ++i) axpy(nrm0 * y[i], basis[i], psi);

  rep.dim = k;
  rep.residual = resid;
  rep.happy = happy;
  return rep;
}

}  // namespace bogolab
