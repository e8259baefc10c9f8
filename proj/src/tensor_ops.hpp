#pragma once

#include <cstdint>
#include <vector>

#include "model.hpp"

namespace bogolab {

// Flat storage for an n-slot tensor over `sites` one-body points.
// Slot j has stride sites^j (slot 0 fastest).
struct TensorShape {
  int sites = 2;
  int slots = 1;
  std::int64_t size = 2;

  static TensorShape make(int sites, int slots);
  std::int64_t stride(int slot) const;
};

std::int64_t tensor_size(int sites, int slots);

// ---- BLAS-ish helpers (deterministic reductions, fixed chunk order) ----
cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b);
double norm_sq(const std::vector<cplx>& a);
void axpy(cplx alpha, const std::vector<cplx>& x, std::vector<cplx>& y);
void scale(cplx s, std::vector<cplx>& x);

// ---- one-body actions on a slot ----

// out (+)= |phi><phi| applied to `slot`; modes: 0 overwrite, +1 add, -1 subtract
void apply_slot_projector(const TensorShape& sh, int slot, const Eigen::VectorXcd& phi,
                          const std::vector<cplx>& in, std::vector<cplx>& out, int mode = 0);

// out += coeff * (A applied to `slot`), A dense sites x sites
void add_slot_operator(const TensorShape& sh, int slot, const Eigen::MatrixXcd& a, cplx coeff,
                       const std::vector<cplx>& in, std::vector<cplx>& out);

// out += coeff * sum_j (-Δ_j) in  (periodic second-difference stencil on every slot)
void add_neg_laplacian_all(const TensorShape& sh, const Lattice& lat, double coeff,
                           const std::vector<cplx>& in, std::vector<cplx>& out);

// out += coeff * (sum_j u[x_j]) in
void add_onebody_diag_all(const TensorShape& sh, const Eigen::VectorXd& u, double coeff,
                          const std::vector<cplx>& in, std::vector<cplx>& out);

// ---- pair actions ----

// out += coeff * (sum_{a<b} v[disp(x_a, x_b)]) in
void add_pair_diag_all(const TensorShape& sh, const Lattice& lat, const Eigen::VectorXd& v,
                       double coeff, const std::vector<cplx>& in, std::vector<cplx>& out);

// out = f(x_0, x_1) * in with f given as a site_count x site_count real matrix
void pair01_multiply(const TensorShape& sh, const Eigen::MatrixXd& f, const std::vector<cplx>& in,
                     std::vector<cplx>& out);

// out += coeff * sum_{a<b} place(y, (a,b)): slot 0 of y lands on slot a, slot 1 on slot b,
// remaining slots keep their order. y must be exchange-symmetric in (0,1) and symmetric in
// the trailing slots for the placement to be well defined.
void add_pair_embeddings(const TensorShape& sh, const std::vector<cplx>& y, double coeff,
                         std::vector<cplx>& out);

// ---- contractions / embeddings between particle numbers ----

// contract the last slot against conj(phi): out[r] = sum_x conj(phi[x]) in[r + x*stride]
std::vector<cplx> contract_last_slot(const TensorShape& sh, const std::vector<cplx>& in,
                                     const Eigen::VectorXcd& phi);

// contract the last two slots against conj(k2): out[r] = sum_{x,y} conj(k2(x,y)) in[r,(x,y)]
std::vector<cplx> contract_last_two_slots(const TensorShape& sh, const std::vector<cplx>& in,
                                          const Eigen::MatrixXcd& k2);

// out += coeff * sum_{|a|=k subsets} (chi placed on slots a, phi elsewhere)
void add_sector_embedding(const TensorShape& sh, const std::vector<cplx>& chi, int k,
                          const Eigen::VectorXcd& phi, cplx coeff, std::vector<cplx>& out);

// out += coeff * sum_{pairs a<b} k2(x_a, x_b) * chi(remaining slots in order)
void add_pair_kernel_embedding(const TensorShape& sh, const std::vector<cplx>& chi,
                               const Eigen::MatrixXcd& k2, cplx coeff, std::vector<cplx>& out);

// ---- permutations ----

// out += coeff * permuted(in) where slot j of out reads slot perm[j] of in
void permute_axes_add(const TensorShape& sh, const std::vector<cplx>& in,
                      const std::vector<int>& perm, double coeff, std::vector<cplx>& out);

void symmetrize(const TensorShape& sh, std::vector<cplx>& x);

// max over sampled transpositions of |psi - psi∘(ij)|
double symmetry_residual(const TensorShape& sh, const std::vector<cplx>& x);

// ---- plain serial reference versions, kept for validating the parallel kernels ----
namespace ref {
void apply_slot_projector(const TensorShape& sh, int slot, const Eigen::VectorXcd& phi,
                          const std::vector<cplx>& in, std::vector<cplx>& out);
void add_neg_laplacian_all(const TensorShape& sh, const Lattice& lat, double coeff,
                           const std::vector<cplx>& in, std::vector<cplx>& out);
void add_pair_diag_all(const TensorShape& sh, const Lattice& lat, const Eigen::VectorXd& v,
                       double coeff, const std::vector<cplx>& in, std::vector<cplx>& out);
void add_pair_embeddings(const TensorShape& sh, const std::vector<cplx>& y, double coeff,
                         std::vector<cplx>& out);
}  // namespace ref

}  // namespace bogolab
