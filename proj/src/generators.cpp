#include "generators.hpp"

#include <cmath>

#include "onebody.hpp"
#include "projectors.hpp"
#include "tensor_ops.hpp"

namespace bogolab {

Generator::Generator(GeneratorKind kind, const Lattice& lat, const Potential& v,
                     const ModelParams& pm, Eigen::VectorXcd phi)
    : kind_(kind), lat_(lat), pm_(pm), shape_(TensorShape::make(lat.site_count, pm.n_particles)),
      phi_(std::move(phi)), v_(v) {
  const int L = lat.site_count;
  v_values_ = v.values;
  if (kind_ != GeneratorKind::full) {
    require(phi_.size() == L, "generator needs a frozen orbital");
    require(std::abs(phi_.norm() - 1.0) < 1e-9, "frozen orbital must be unit-normalized");
    mf_diag_ = mean_field_diagonal(lat, v, phi_, pm.mean_field_coupling());
  }
  if (kind_ == GeneratorKind::pair_projected) {
    v_mat_.resize(L, L);
    for (int x = 0; x < L; ++x)
      for (int y = 0; y < L; ++y) v_mat_(x, y) = v.values[lat.displacement(x, y)];
  }
  if (kind_ == GeneratorKind::difference) w_mat_ = centered_pair_interaction(lat, v, phi_);
  ych_.resize(shape_.size);
  t1_.resize(shape_.size);
  t2_.resize(shape_.size);
}

std::vector<cplx> Generator::operator()(const std::vector<cplx>& in) const {
  std::vector<cplx> out(in.size());
  apply(in, out);
  return out;
}

void Generator::apply(const std::vector<cplx>& in, std::vector<cplx>& out) const {
  require(in.size() == static_cast<std::size_t>(shape_.size), "state size mismatch");
  out.assign(in.size(), cplx(0));
  const double hbar2 = pm_.hbar * pm_.hbar;
  switch (kind_) {
    case GeneratorKind::full:
      add_neg_laplacian_all(shape_, lat_, hbar2, in, out);
      add_pair_diag_all(shape_, lat_, v_values_, pm_.coupling(), in, out);
      break;
    case GeneratorKind::mean_field:
      add_neg_laplacian_all(shape_, lat_, hbar2, in, out);
      add_onebody_diag_all(shape_, mf_diag_, 1.0, in, out);
      break;
    case GeneratorKind::pair_projected:
      add_neg_laplacian_all(shape_, lat_, hbar2, in, out);
      add_onebody_diag_all(shape_, mf_diag_, 1.0, in, out);
      add_pair_channels(in, out);
      break;
    case GeneratorKind::difference:
      add_pair_channels(in, out);
      break;
  }
}

// kept channels of the projected pair term on slots (0,1), spread over all pairs;
// valid on exchange-symmetric states
void Generator::add_pair_channels(const std::vector<cplx>& in, std::vector<cplx>& out) const {
  const TensorShape& sh = shape_;
  std::fill(ych_.begin(), ych_.end(), cplx(0));

  auto sandwich = [&](bool leftq0, bool leftq1, const Eigen::MatrixXd& mat, bool rightq0,
                      bool rightq1) {
    // t2 = (left sandwich) mat (right sandwich) in, accumulated into ych_
    if (rightq0)
      apply_q(sh, 0, phi_, in, t1_);
    else
      apply_p(sh, 0, phi_, in, t1_);
    if (rightq1)
      apply_q(sh, 1, phi_, t1_, t1_);
    else
      apply_p(sh, 1, phi_, t1_, t1_);
    pair01_multiply(sh, mat, t1_, t2_);
    if (leftq0)
      apply_q(sh, 0, phi_, t2_, t2_);
    else
      apply_p(sh, 0, phi_, t2_, t2_);
    if (leftq1)
      apply_q(sh, 1, phi_, t2_, t2_);
    else
      apply_p(sh, 1, phi_, t2_, t2_);
    axpy(1.0, t2_, ych_);
  };

  if (kind_ == GeneratorKind::pair_projected) {
    // p q v q p + q p v p q + p p v q q + q q v p p
    sandwich(false, true, v_mat_, true, false);
    sandwich(true, false, v_mat_, false, true);
    sandwich(false, false, v_mat_, true, true);
    sandwich(true, true, v_mat_, false, false);
  } else {
    // the five channels the projection drops, with the centered interaction
    sandwich(true, true, w_mat_, true, true);
    sandwich(true, true, w_mat_, false, true);
    sandwich(true, true, w_mat_, true, false);
    sandwich(false, true, w_mat_, true, true);
    sandwich(true, false, w_mat_, true, true);
  }
  add_pair_embeddings(sh, ych_, pm_.coupling(), out);
}

double Generator::energy(const std::vector<cplx>& psi) const {
  std::vector<cplx> h(psi.size());
  apply(psi, h);
  return std::real(dot(psi, h));
}

void co_evolve(const std::vector<GeneratorKind>& kinds, std::vector<ManyBodyState>& states,
               const Lattice& lat, const Potential& v, const ModelParams& pm,
               const HartreeTrajectory& traj, const KrylovOptions& kopt,
               const std::function<void(int step, double t)>& on_frame) {
  require(kinds.size() == states.size(), "one generator kind per state");
  require(std::abs(traj.dt - pm.dt) < 1e-15, "trajectory step must match model step");
  const int steps = static_cast<int>(traj.midpoints.size());
  on_frame(0, 0.0);
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXcd& phi_mid = traj.midpoints[s];
    for (std::size_t i = 0; i < states.size(); ++i) {
      Generator gen(kinds[i], lat, v, pm, kinds[i] == GeneratorKind::full
                                              ? Eigen::VectorXcd()
                                              : phi_mid);
      auto apply = [&gen](const std::vector<cplx>& x) { return gen(x); };
      lanczos_exp_step(apply, pm.dt / pm.hbar, states[i].amps, kopt);
      states[i].time = (s + 1) * pm.dt;
    }
    on_frame(s + 1, (s + 1) * pm.dt);
  }
}

}  // namespace bogolab
