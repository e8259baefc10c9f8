#pragma once

#include <vector>

#include "bogoliubov.hpp"
#include "hartree.hpp"
#include "krylov.hpp"
#include "model.hpp"
#include "sectors.hpp"

namespace bogolab {

enum class HierarchyKind {
  finite_n,    // depleted-pair coefficients carry the (N-k)/N style factors
  bogoliubov,  // the N-free limit coefficients
};

// The k -> k-2 channel appears in print with a 1/2 in front of the ordered pair
// sum; as written it is not the adjoint of the k -> k+2 channel.  `unordered`
// reads the sum over unordered pairs (no 1/2), which restores self-adjointness
// and matches the exact dynamics; `ordered_literal` keeps the printed factor.
enum class DownwardPairSum { unordered, ordered_literal };

struct HierarchyOptions {
  HierarchyKind kind = HierarchyKind::finite_n;
  DownwardPairSum convention = DownwardPairSum::unordered;
  KrylovOptions krylov;
  double tail_warn = 1e-6;   // top-two-sector mass fraction that flags the cutoff
  double tail_error = 1e-3;  // fraction that aborts the run
};

struct HierarchyFrame {
  double t = 0;
  double total_mass = 0;
  double tail_mass = 0;
  double odd_mass = 0;
  double reprojection_removed = 0;  // cumulative mass removed by re-projection
  bool tail_warned = false;
  std::vector<double> masses;
};

struct HierarchyResult {
  SectorFamily family;
  std::vector<HierarchyFrame> frames;
};

// coefficient helpers, exposed for tests
double hierarchy_k1_factor(HierarchyKind kind, int n, int k);
double hierarchy_down_factor(HierarchyKind kind, DownwardPairSum conv, int n, int k);
double hierarchy_up_factor(HierarchyKind kind, int n, int k);

// one application of the frozen-orbital generator to a packed family
class HierarchyGenerator {
 public:
  HierarchyGenerator(HierarchyKind kind, DownwardPairSum conv, const Kernels& ker,
                     int n_particles, int k_max);
  std::vector<cplx> operator()(const std::vector<cplx>& flat) const;
  std::int64_t flat_size() const { return total_; }
  std::int64_t offset(int k) const { return offsets_[k]; }

 private:
  HierarchyKind kind_;
  DownwardPairSum conv_;
  const Kernels& ker_;
  int n_, k_max_, sites_;
  std::vector<std::int64_t> offsets_;
  std::int64_t total_ = 0;
};

std::vector<cplx> pack_family(const SectorFamily& fam);
void unpack_family(const std::vector<cplx>& flat, SectorFamily& fam);

// advance the family through trajectory step s (midpoint-frozen exponential step or
// literal-convention RK4), then re-project onto the end-of-step orbital; flat and fam
// stay in sync, removed_accum collects the re-projection mass
void hierarchy_step(SectorFamily& fam, std::vector<cplx>& flat, const Lattice& lat,
                    const Potential& v, const ModelParams& pm, const HartreeTrajectory& traj,
                    int s, const HierarchyOptions& opt, double& removed_accum);

HierarchyResult evolve_hierarchy(SectorFamily initial, const Lattice& lat, const Potential& v,
                                 const ModelParams& pm, const HartreeTrajectory& traj,
                                 const HierarchyOptions& opt = {});

}  // namespace bogolab
