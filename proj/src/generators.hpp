#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "hartree.hpp"
#include "krylov.hpp"
#include "manybody.hpp"
#include "model.hpp"

namespace bogolab {

enum class GeneratorKind {
  full,            // kinetic + pair interaction
  mean_field,      // kinetic + frozen one-body mean field
  pair_projected,  // mean field + the four kept sandwich channels
  difference,      // full minus pair_projected, five centered-interaction channels
};

// Hermitian generator with the orbital frozen; phi is ignored for `full`.
// apply() is not reentrant (shared scratch), kernels parallelize internally.
class Generator {
 public:
  Generator(GeneratorKind kind, const Lattice& lat, const Potential& v, const ModelParams& pm,
            Eigen::VectorXcd phi);

  void apply(const std::vector<cplx>& in, std::vector<cplx>& out) const;
  std::vector<cplx> operator()(const std::vector<cplx>& in) const;
  double energy(const std::vector<cplx>& psi) const;

  GeneratorKind kind() const { return kind_; }

 private:
  void add_pair_channels(const std::vector<cplx>& in, std::vector<cplx>& out) const;

  GeneratorKind kind_;
  const Lattice& lat_;
  const ModelParams pm_;
  TensorShape shape_;
  Eigen::VectorXcd phi_;
  Eigen::VectorXd v_values_;
  Eigen::MatrixXd v_mat_;       // v(x-y)
  Eigen::MatrixXd w_mat_;       // centered interaction, difference kind
  Eigen::VectorXd mf_diag_;     // g[(v*|phi|^2) - mu]
  Potential v_;
  mutable std::vector<cplx> ych_, t1_, t2_;
};

// lockstep integration of several states under per-state generators sharing one
// orbital trajectory; generators are frozen at the midpoint of each step.
// on_frame runs at t=0 and after every step with the current states.
void co_evolve(const std::vector<GeneratorKind>& kinds, std::vector<ManyBodyState>& states,
               const Lattice& lat, const Potential& v, const ModelParams& pm,
               const HartreeTrajectory& traj, const KrylovOptions& kopt,
               const std::function<void(int step, double t)>& on_frame);

}  // namespace bogolab
