#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "model.hpp"

namespace bogolab {

// Seeded complex-Gaussian draws for fuzzing and random states.
struct Rng {
  std::mt19937_64 gen;
  std::normal_distribution<double> normal{0.0, 1.0};
  std::uniform_real_distribution<double> uniform{0.0, 1.0};

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double gauss() { return normal(gen); }
  double unit() { return uniform(gen); }
  cplx cgauss() { return {normal(gen), normal(gen)}; }

  Eigen::VectorXcd cgauss_vector(int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = cgauss();
    return v;
  }

  std::vector<cplx> cgauss_tensor(std::int64_t n) {
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = cgauss();
    return v;
  }
};

}  // namespace bogolab
