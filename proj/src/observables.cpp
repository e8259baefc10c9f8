#include "observables.hpp"

#include <cmath>

namespace bogolab {

Eigen::MatrixXcd reduce_one_body(const ManyBodyState& st) {
  const int L = st.sites;
  std::int64_t rest = 1;
  for (int j = 1; j < st.n_particles; ++j) rest *= L;
  Eigen::Map<const Eigen::MatrixXcd> x(st.amps.data(), L, rest);
  return x * x.adjoint();
}

Eigen::MatrixXcd micro_excitation_density(const ManyBodyState& st,
                                          const Eigen::VectorXcd& phi_ref, double lambda) {
  const int L = st.sites;
  require(phi_ref.size() == L, "reference orbital size mismatch");
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(L, L) - phi_ref * phi_ref.adjoint();
  return lambda * (q * reduce_one_body(st) * q);
}

Eigen::MatrixXcd macro_excitation_density(const Eigen::VectorXcd& eps) {
  return eps * eps.adjoint();
}

double trace_norm(const Eigen::MatrixXcd& a) {
  require(a.rows() == a.cols(), "trace norm needs a square matrix");
  require((a - a.adjoint()).norm() < 1e-9 * std::max(1.0, a.norm()),
          "trace norm shortcut needs a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_norm_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return trace_norm(a - b);
}

}  // namespace bogolab
