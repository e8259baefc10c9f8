#pragma once

#include <functional>
#include <vector>

#include "model.hpp"

namespace bogolab {

struct KrylovOptions {
  int m = 30;                   // subspace size tried first
  int m_max = 60;               // hard cap before giving up
  double residual_tol = 1e-12;  // early-exit target
  double fail_tol = 1e-8;       // above this after m_max the step errors out
};

struct KrylovReport {
  int dim = 0;
  double residual = 0;
  bool happy = false;  // exact invariant subspace reached
};

// psi <- exp(-i theta H) psi for Hermitian H given as y = apply(x); theta = dt/hbar.
// Lanczos with full CGS2 reorthogonalization; deterministic given deterministic apply.
KrylovReport lanczos_exp_step(
    const std::function<std::vector<cplx>(const std::vector<cplx>&)>& apply_h, double theta,
    std::vector<cplx>& psi, const KrylovOptions& opt = {});

}  // namespace bogolab
