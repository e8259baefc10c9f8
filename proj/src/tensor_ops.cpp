#include "tensor_ops.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>

namespace bogolab {

namespace {
constexpr int kMaxSlots = 16;
constexpr std::int64_t kMaxTensor = 4'000'000;  // amplitude cap sites^slots

inline void decode(std::int64_t i, int sites, int slots, int* x) {
  for (int j = 0; j < slots; ++j) {
    x[j] = static_cast<int>(i % sites);
    i /= sites;
  }
}
}  // namespace

std::int64_t tensor_size(int sites, int slots) {
  std::int64_t r = 1;
  for (int i = 0; i < slots; ++i) {
    r *= sites;
    require(r <= kMaxTensor, "tensor exceeds the amplitude storage cap");
  }
  return r;
}

TensorShape TensorShape::make(int sites, int slots) {
  require(sites >= 2, "tensor needs at least two sites");
  require(slots >= 0 && slots <= kMaxSlots, "slot count out of range");
  TensorShape sh;
  sh.sites = sites;
  sh.slots = slots;
  sh.size = tensor_size(sites, slots);
  return sh;
}

std::int64_t TensorShape::stride(int slot) const {
  std::int64_t s = 1;
  for (int j = 0; j < slot; ++j) s *= sites;
  return s;
}

// Deterministic reduction: fixed chunk count, partials combined in chunk order,
// so results do not depend on the number of threads.
static constexpr int kChunks = 64;

cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  require(a.size() == b.size(), "dot: size mismatch");
  const std::int64_t n = static_cast<std::int64_t>(a.size());
  cplx partial[kChunks] = {};
#pragma omp parallel for schedule(static)
  for (int c = 0; c < kChunks; ++c) {
    std::int64_t lo = n * c / kChunks, hi = n * (c + 1) / kChunks;
    cplx s = 0;
    for (std::int64_t i = lo; i < hi; ++i) s += std::conj(a[i]) * b[i];
    partial[c] = s;
  }
  cplx r = 0;
  for (int c = 0; c < kChunks; ++c) r += partial[c];
  return r;
}

double norm_sq(const std::vector<cplx>& a) {
  const std::int64_t n = static_cast<std::int64_t>(a.size());
  double partial[kChunks] = {};
#pragma omp parallel for schedule(static)
  for (int c = 0; c < kChunks; ++c) {
    std::int64_t lo = n * c / kChunks, hi = n * (c + 1) / kChunks;
    double s = 0;
    for (std::int64_t i = lo; i < hi; ++i) s += std::norm(a[i]);
    partial[c] = s;
  }
  double r = 0;
  for (int c = 0; c < kChunks; ++c) r += partial[c];
  return r;
}

void axpy(cplx alpha, const std::vector<cplx>& x, std::vector<cplx>& y) {
  require(x.size() == y.size(), "axpy: size mismatch");
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(cplx s, std::vector<cplx>& x) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) x[i] *= s;
}

void apply_slot_projector(const TensorShape& sh, int slot, const Eigen::VectorXcd& phi,
                          const std::vector<cplx>& in, std::vector<cplx>& out, int mode) {
  require(slot >= 0 && slot < sh.slots, "slot out of range");
  require(phi.size() == sh.sites, "phi size mismatch");
  const int L = sh.sites;
  const std::int64_t s = sh.stride(slot);
  const std::int64_t rest = sh.size / L;
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < rest; ++r) {
    const std::int64_t base = (r / s) * s * L + (r % s);
    cplx c = 0;
    for (int x = 0; x < L; ++x) c += std::conj(phi[x]) * in[base + x * s];
    if (mode == 0)
      for (int x = 0; x < L; ++x) out[base + x * s] = phi[x] * c;
    else if (mode > 0)
      for (int x = 0; x < L; ++x) out[base + x * s] += phi[x] * c;
    else
      for (int x = 0; x < L; ++x) out[base + x * s] -= phi[x] * c;
  }
}

void add_slot_operator(const TensorShape& sh, int slot, const Eigen::MatrixXcd& a, cplx coeff,
                       const std::vector<cplx>& in, std::vector<cplx>& out) {
  require(a.rows() == sh.sites && a.cols() == sh.sites, "operator size mismatch");
  const int L = sh.sites;
  const std::int64_t s = sh.stride(slot);
  const std::int64_t rest = sh.size / L;
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < rest; ++r) {
    const std::int64_t base = (r / s) * s * L + (r % s);
    for (int x = 0; x < L; ++x) {
      cplx acc = 0;
      for (int y = 0; y < L; ++y) acc += a(x, y) * in[base + y * s];
      out[base + x * s] += coeff * acc;
    }
  }
}

void add_neg_laplacian_all(const TensorShape& sh, const Lattice& lat, double coeff,
                           const std::vector<cplx>& in, std::vector<cplx>& out) {
  require(lat.site_count == sh.sites, "lattice size mismatch");
  const int L = sh.sites;
  const int twod = 2 * lat.dim;
  for (int slot = 0; slot < sh.slots; ++slot) {
    const std::int64_t s = sh.stride(slot);
    const std::int64_t rest = sh.size / L;
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < rest; ++r) {
      const std::int64_t base = (r / s) * s * L + (r % s);
      for (int x = 0; x < L; ++x) {
        cplx acc = static_cast<double>(twod) * in[base + x * s];
        for (int k = 0; k < twod; ++k) acc -= in[base + lat.neighbor(x, k) * s];
        out[base + x * s] += coeff * acc;
      }
    }
  }
}

void add_onebody_diag_all(const TensorShape& sh, const Eigen::VectorXd& u, double coeff,
                          const std::vector<cplx>& in, std::vector<cplx>& out) {
  require(u.size() == sh.sites, "diagonal size mismatch");
  const int L = sh.sites;
  const int n = sh.slots;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < sh.size; ++i) {
    std::int64_t t = i;
    double d = 0;
    for (int j = 0; j < n; ++j) {
      d += u[static_cast<int>(t % L)];
      t /= L;
    }
    out[i] += coeff * d * in[i];
  }
}

void add_pair_diag_all(const TensorShape& sh, const Lattice& lat, const Eigen::VectorXd& v,
                       double coeff, const std::vector<cplx>& in, std::vector<cplx>& out) {
  require(lat.site_count == sh.sites, "lattice size mismatch");
  const int L = sh.sites;
  const int n = sh.slots;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < sh.size; ++i) {
    int x[kMaxSlots];
    decode(i, L, n, x);
    double d = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) d += v[lat.displacement(x[a], x[b])];
    out[i] += coeff * d * in[i];
  }
}

void pair01_multiply(const TensorShape& sh, const Eigen::MatrixXd& f, const std::vector<cplx>& in,
                     std::vector<cplx>& out) {
  require(sh.slots >= 2, "need two slots");
  require(f.rows() == sh.sites && f.cols() == sh.sites, "pair function size mismatch");
  const int L = sh.sites;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < sh.size; ++i) {
    int x0 = static_cast<int>(i % L);
    int x1 = static_cast<int>((i / L) % L);
    out[i] = f(x0, x1) * in[i];
  }
}

void add_pair_embeddings(const TensorShape& sh, const std::vector<cplx>& y, double coeff,
                         std::vector<cplx>& out) {
  const int n = sh.slots;
  const int L = sh.sites;
  require(y.size() == static_cast<std::size_t>(sh.size), "pair embedding size mismatch");
  // per-pair map from output slot to y stride
  std::vector<std::array<std::int64_t, kMaxSlots>> maps;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      std::array<std::int64_t, kMaxSlots> m{};
      m[a] = 1;
      m[b] = L;
      std::int64_t s = static_cast<std::int64_t>(L) * L;
      for (int c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        m[c] = s;
        s *= L;
      }
      maps.push_back(m);
    }
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < sh.size; ++i) {
    int x[kMaxSlots];
    decode(i, L, n, x);
    cplx acc = 0;
    for (const auto& m : maps) {
      std::int64_t src = 0;
      for (int c = 0; c < n; ++c) src += x[c] * m[c];
      acc += y[src];
    }
    out[i] += coeff * acc;
  }
}

std::vector<cplx> contract_last_slot(const TensorShape& sh, const std::vector<cplx>& in,
                                     const Eigen::VectorXcd& phi) {
  require(sh.slots >= 1, "nothing to contract");
  const int L = sh.sites;
  const std::int64_t rest = sh.size / L;
  std::vector<cplx> out(static_cast<std::size_t>(rest));
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < rest; ++r) {
    cplx c = 0;
    for (int x = 0; x < L; ++x) c += std::conj(phi[x]) * in[r + x * rest];
    out[r] = c;
  }
  return out;
}

std::vector<cplx> contract_last_two_slots(const TensorShape& sh, const std::vector<cplx>& in,
                                          const Eigen::MatrixXcd& k2) {
  require(sh.slots >= 2, "need two slots to contract");
  const int L = sh.sites;
  require(k2.rows() == L && k2.cols() == L, "kernel size mismatch");
  const std::int64_t rest = sh.size / (static_cast<std::int64_t>(L) * L);
  std::vector<cplx> out(static_cast<std::size_t>(rest));
  const cplx* kd = k2.data();  // column-major: kd[x + L*y] = k2(x,y)
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < rest; ++r) {
    cplx c = 0;
    for (std::int64_t p = 0; p < static_cast<std::int64_t>(L) * L; ++p)
      c += std::conj(kd[p]) * in[r + p * rest];
    out[r] = c;
  }
  return out;
}

void add_sector_embedding(const TensorShape& sh, const std::vector<cplx>& chi, int k,
                          const Eigen::VectorXcd& phi, cplx coeff, std::vector<cplx>& out) {
  const int n = sh.slots;
  const int L = sh.sites;
  require(k >= 0 && k <= n, "sector index out of range");
  require(chi.size() == static_cast<std::size_t>(tensor_size(L, k)), "sector size mismatch");
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != k) continue;
    std::int64_t cs[kMaxSlots] = {};
    std::int64_t s = 1;
    for (int c = 0; c < n; ++c)
      if (mask & (1u << c)) {
        cs[c] = s;
        s *= L;
      }
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < sh.size; ++i) {
      int x[kMaxSlots];
      decode(i, L, n, x);
      cplx prod = coeff;
      std::int64_t ci = 0;
      for (int c = 0; c < n; ++c) {
        if (mask & (1u << c))
          ci += x[c] * cs[c];
        else
          prod *= phi[x[c]];
      }
      out[i] += prod * chi[ci];
    }
  }
}

void add_pair_kernel_embedding(const TensorShape& sh, const std::vector<cplx>& chi,
                               const Eigen::MatrixXcd& k2, cplx coeff, std::vector<cplx>& out) {
  const int n = sh.slots;
  const int L = sh.sites;
  require(n >= 2, "need two slots");
  require(chi.size() == static_cast<std::size_t>(tensor_size(L, n - 2)), "sector size mismatch");
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      std::int64_t cs[kMaxSlots] = {};
      std::int64_t s = 1;
      for (int c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        cs[c] = s;
        s *= L;
      }
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < sh.size; ++i) {
        int x[kMaxSlots];
        decode(i, L, n, x);
        std::int64_t ci = 0;
        for (int c = 0; c < n; ++c) ci += x[c] * cs[c];
        out[i] += coeff * k2(x[a], x[b]) * chi[ci];
      }
    }
}

void permute_axes_add(const TensorShape& sh, const std::vector<cplx>& in,
                      const std::vector<int>& perm, double coeff, std::vector<cplx>& out) {
  const int n = sh.slots;
  const int L = sh.sites;
  require(static_cast<int>(perm.size()) == n, "permutation size mismatch");
  std::int64_t strides[kMaxSlots];
  for (int j = 0; j < n; ++j) strides[j] = sh.stride(perm[j]);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < sh.size; ++i) {
    int x[kMaxSlots];
    decode(i, L, n, x);
    std::int64_t src = 0;
    for (int j = 0; j < n; ++j) src += x[j] * strides[j];
    out[i] += coeff * in[src];
  }
}

void symmetrize(const TensorShape& sh, std::vector<cplx>& x) {
  const int n = sh.slots;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<cplx> acc(x.size(), cplx(0));
  double count = 0;
  do {
    permute_axes_add(sh, x, perm, 1.0, acc);
    count += 1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  scale(1.0 / count, acc);
  x.swap(acc);
}

double symmetry_residual(const TensorShape& sh, const std::vector<cplx>& x) {
  const int n = sh.slots;
  if (n < 2) return 0.0;
  double worst = 0;
  std::vector<cplx> tmp(x.size());
  std::vector<int> perm(n);
  for (int j = 0; j + 1 < n; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[j], perm[j + 1]);
    std::fill(tmp.begin(), tmp.end(), cplx(0));
    permute_axes_add(sh, x, perm, 1.0, tmp);
    axpy(-1.0, x, tmp);
    worst = std::max(worst, std::sqrt(norm_sq(tmp)));
  }
  return worst;
}

namespace ref {

void apply_slot_projector(const TensorShape& sh, int slot, const Eigen::VectorXcd& phi,
                          const std::vector<cplx>& in, std::vector<cplx>& out) {
  const int L = sh.sites;
  const std::int64_t s = sh.stride(slot);
  for (std::int64_t i = 0; i < sh.size; ++i) {
    if ((i / s) % L != 0) continue;
    cplx c = 0;
    for (int x = 0; x < L; ++x) c += std::conj(phi[x]) * in[i + x * s];
    for (int x = 0; x < L; ++x) out[i + x * s] = phi[x] * c;
  }
}

void add_neg_laplacian_all(const TensorShape& sh, const Lattice& lat, double coeff,
                           const std::vector<cplx>& in, std::vector<cplx>& out) {
  const int L = sh.sites;
  for (std::int64_t i = 0; i < sh.size; ++i) {
    int x[kMaxSlots];
    decode(i, L, sh.slots, x);
    cplx acc = 0;
    for (int j = 0; j < sh.slots; ++j) {
      const std::int64_t s = sh.stride(j);
      acc += 2.0 * lat.dim * in[i];
      for (int k = 0; k < 2 * lat.dim; ++k)
        acc -= in[i + (lat.neighbor(x[j], k) - x[j]) * s];
    }
    out[i] += coeff * acc;
  }
}

void add_pair_diag_all(const TensorShape& sh, const Lattice& lat, const Eigen::VectorXd& v,
                       double coeff, const std::vector<cplx>& in, std::vector<cplx>& out) {
  const int L = sh.sites;
  for (std::int64_t i = 0; i < sh.size; ++i) {
    int x[kMaxSlots];
    decode(i, L, sh.slots, x);
    double d = 0;
    for (int a = 0; a < sh.slots; ++a)
      for (int b = a + 1; b < sh.slots; ++b) d += v[lat.displacement(x[a], x[b])];
    out[i] += coeff * d * in[i];
  }
}

void add_pair_embeddings(const TensorShape& sh, const std::vector<cplx>& y, double coeff,
                         std::vector<cplx>& out) {
  const int n = sh.slots;
  const int L = sh.sites;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      // slot a <- y slot 0, slot b <- y slot 1, remaining keep order
      for (std::int64_t i = 0; i < sh.size; ++i) {
        int x[kMaxSlots];
        decode(i, L, n, x);
        std::int64_t src = x[a] + static_cast<std::int64_t>(L) * x[b];
        std::int64_t s = static_cast<std::int64_t>(L) * L;
        for (int c = 0; c < n; ++c) {
          if (c == a || c == b) continue;
          src += x[c] * s;
          s *= L;
        }
        out[i] += coeff * y[src];
      }
    }
}

}  // namespace ref

}  // namespace bogolab
