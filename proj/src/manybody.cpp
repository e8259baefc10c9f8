#include "manybody.hpp"

#include <cmath>

namespace bogolab {

void ManyBodyState::normalize() {
  double n = norm();
  require(n > 0, "cannot normalize the zero state");
  scale(1.0 / n, amps);
}

ManyBodyState product_state(int sites, int n_particles, const Eigen::VectorXcd& phi) {
  require(phi.size() == sites, "orbital size mismatch");
  ManyBodyState st;
  st.sites = sites;
  st.n_particles = n_particles;
  TensorShape sh = st.shape();
  st.amps.assign(static_cast<std::size_t>(sh.size), cplx(1));
  for (std::int64_t i = 0; i < sh.size; ++i) {
    std::int64_t t = i;
    cplx a = 1;
    for (int j = 0; j < n_particles; ++j) {
      a *= phi[static_cast<int>(t % sites)];
      t /= sites;
    }
    st.amps[i] = a;
  }
  return st;
}

ManyBodyState random_symmetric_state(int sites, int n_particles, Rng& rng) {
  ManyBodyState st;
  st.sites = sites;
  st.n_particles = n_particles;
  TensorShape sh = st.shape();
  st.amps = rng.cgauss_tensor(sh.size);
  symmetrize(sh, st.amps);
  st.normalize();
  return st;
}

double norm_difference_sq(const ManyBodyState& a, const ManyBodyState& b) {
  require(a.amps.size() == b.amps.size(), "state size mismatch");
  std::vector<cplx> d = a.amps;
  axpy(-1.0, b.amps, d);
  return norm_sq(d);
}

double norm_difference_sq_linear(const ManyBodyState& a, const ManyBodyState& b) {
  require(a.amps.size() == b.amps.size(), "state size mismatch");
  return 2.0 * (norm_sq(a.amps) - dot(a.amps, b.amps).real());
}

cplx overlap(const ManyBodyState& a, const ManyBodyState& b) { return dot(a.amps, b.amps); }

}  // namespace bogolab
