#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bogoliubov.hpp"
#include "generators.hpp"
#include "hartree.hpp"
#include "hierarchy.hpp"
#include "manybody.hpp"
#include "model.hpp"
#include "onebody.hpp"
#include "projectors.hpp"
#include "rng.hpp"
#include "sectors.hpp"
#include "tensor_ops.hpp"

using namespace bogolab;

namespace {

ManyBodyState one_excitation(int sites, int slots, const Eigen::VectorXcd& phi,
                             const Eigen::VectorXcd& psi) {
  TensorShape sh = TensorShape::make(sites, slots);
  ManyBodyState st;
  st.sites = sites;
  st.n_particles = slots;
  st.amps.assign(sh.size, cplx(0));
  for (std::int64_t i = 0; i < sh.size; ++i) {
    cplx s = 0;
    for (int ex = 0; ex < slots; ++ex) {
      cplx term = 1.0;
      for (int j = 0; j < slots; ++j) {
        int c = static_cast<int>((i / sh.stride(j)) % sites);
        term *= (j == ex) ? psi[c] : phi[c];
      }
      s += term;
    }
    st.amps[static_cast<std::size_t>(i)] = s;
  }
  double nrm = st.norm();
  scale(cplx(1.0 / nrm), st.amps);
  return st;
}

SectorFamily random_symmetric_family(int sites, int n, int k_max, const Eigen::VectorXcd& phi,
                                     Rng& rng) {
  SectorFamily fam = vacuum_family(sites, n, k_max, phi);
  for (int k = 0; k <= k_max; ++k) {
    TensorShape sh = fam.shape_of(k);
    fam.chis[k] = rng.cgauss_tensor(sh.size);
    if (k >= 2) symmetrize(sh, fam.chis[k]);
  }
  return fam;
}

}  // namespace

TEST_CASE("binomials") {
  CHECK(binom_d(0, 0) == doctest::Approx(1.0));
  CHECK(binom_d(5, 2) == doctest::Approx(10.0));
  CHECK(binom_d(4, 4) == doctest::Approx(1.0));
  CHECK(binom_d(6, 3) == doctest::Approx(20.0));
}

TEST_CASE("sector decomposition of reference states") {
  Rng rng(41);
  Eigen::VectorXcd phi = rng.cgauss_vector(3);
  phi /= phi.norm();

  ManyBodyState prod = product_state(3, 3, phi);
  SectorFamily fp = decompose_sectors(prod, phi, 3);
  CHECK(std::abs(fp.chis[0][0] - cplx(1)) <= 1e-12);
  for (int k = 1; k <= 3; ++k) CHECK(std::sqrt(norm_sq(fp.chis[k])) <= 1e-12);

  Eigen::VectorXcd psi = rng.cgauss_vector(3);
  psi -= phi * phi.dot(psi);
  psi /= psi.norm();
  ManyBodyState exc = one_excitation(3, 3, phi, psi);
  SectorFamily fe = decompose_sectors(exc, phi, 3);
  CHECK(std::abs(fe.chis[0][0]) <= 1e-12);
  // the single excitation is recovered verbatim, phase included
  for (int x = 0; x < 3; ++x) CHECK(std::abs(fe.chis[1][x] - psi[x]) <= 1e-10);
  CHECK(std::abs(std::sqrt(norm_sq(fe.chis[1])) - 1.0) <= 1e-10);
}

TEST_CASE("decompose and reconstruct round trip") {
  Rng rng(43);
  Eigen::VectorXcd phi = rng.cgauss_vector(3);
  phi /= phi.norm();
  ManyBodyState st = random_symmetric_state(3, 3, rng);
  TensorShape sh = st.shape();

  SectorFamily fam = decompose_sectors(st, phi, 3);
  CHECK(slot_orthogonality_residual(fam) <= 1e-10);
  CHECK(fam.total_mass() == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> ms = fam.masses();
  std::vector<double> mq = q_count_masses(sh, phi, st.amps);
  for (int k = 0; k <= 3; ++k) CHECK(std::abs(ms[k] - mq[k]) <= 1e-10);

  ManyBodyState back = reconstruct_state(fam);
  CHECK(norm_difference_sq(st, back) <= 1e-10);

  SectorFamily vac = vacuum_family(3, 3, 3, phi);
  ManyBodyState pv = reconstruct_state(vac);
  CHECK(norm_difference_sq(pv, product_state(3, 3, phi)) <= 1e-12);

  // pack/unpack is the identity on the family
  std::vector<cplx> flat = pack_family(fam);
  SectorFamily fam2 = vacuum_family(3, 3, 3, phi);
  unpack_family(flat, fam2);
  for (int k = 0; k <= 3; ++k)
    for (std::size_t i = 0; i < fam.chis[k].size(); ++i)
      CHECK(fam.chis[k][i] == fam2.chis[k][i]);
}

TEST_CASE("ladder coefficients: frozen values and boundary zeros") {
  using HK = HierarchyKind;
  using DP = DownwardPairSum;
  const double s6 = std::sqrt(6.0);

  CHECK(hierarchy_k1_factor(HK::finite_n, 4, 0) == doctest::Approx(1.0));
  CHECK(hierarchy_k1_factor(HK::finite_n, 4, 1) == doctest::Approx(0.75));
  CHECK(hierarchy_k1_factor(HK::finite_n, 4, 2) == doctest::Approx(0.5));
  CHECK(hierarchy_k1_factor(HK::finite_n, 4, 4) == doctest::Approx(0.0));
  CHECK(hierarchy_k1_factor(HK::bogoliubov, 4, 3) == doctest::Approx(1.0));

  CHECK(hierarchy_down_factor(HK::finite_n, DP::unordered, 4, 2) ==
        doctest::Approx(s6 / 4).epsilon(1e-14));
  CHECK(hierarchy_down_factor(HK::bogoliubov, DP::unordered, 4, 2) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(hierarchy_down_factor(HK::finite_n, DP::ordered_literal, 4, 2) ==
        doctest::Approx(s6 / 8).epsilon(1e-14));
  CHECK(hierarchy_down_factor(HK::bogoliubov, DP::unordered, 4, 0) == doctest::Approx(0.0));
  CHECK(hierarchy_down_factor(HK::bogoliubov, DP::unordered, 4, 1) == doctest::Approx(0.0));

  CHECK(hierarchy_up_factor(HK::finite_n, 4, 2) == doctest::Approx(s6 / 4).epsilon(1e-14));
  CHECK(hierarchy_up_factor(HK::bogoliubov, 4, 2) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(hierarchy_up_factor(HK::finite_n, 4, 3) == doctest::Approx(0.0));
  CHECK(hierarchy_up_factor(HK::finite_n, 4, 4) == doctest::Approx(0.0));

  // adjoint pairing of the two-step ladder, unordered convention
  for (int k = 0; k + 2 <= 6; ++k) {
    double up = hierarchy_up_factor(HK::bogoliubov, 8, k);
    double down = hierarchy_down_factor(HK::bogoliubov, DP::unordered, 8, k + 2);
    double pairs = 0.5 * (k + 2) * (k + 1);
    CHECK(up == doctest::Approx(down * pairs).epsilon(1e-13));
  }
}

TEST_CASE("one generator application to the vacuum fills exactly sector two") {
  Lattice lat = Lattice::make(1, 3);
  Potential v = Potential::gaussian(lat, 1.2, 0.8);
  ModelParams pm = ModelParams::for_lattice(lat, 6, 1.0, 0.01, 0.1);
  Rng rng(47);
  Eigen::VectorXcd phi = rng.cgauss_vector(3);
  phi /= phi.norm();
  Kernels ker = build_kernels(lat, v, pm, phi);
  REQUIRE(ker.k2.norm() > 1e-8);

  for (HierarchyKind kind : {HierarchyKind::finite_n, HierarchyKind::bogoliubov}) {
    HierarchyGenerator gen(kind, DownwardPairSum::unordered, ker, 6, 4);
    SectorFamily vac = vacuum_family(3, 6, 4, phi);
    std::vector<cplx> out = gen(pack_family(vac));

    double sec2 = 0;
    for (std::int64_t i = gen.offset(2); i < gen.offset(3); ++i) sec2 += std::norm(out[i]);
    sec2 = std::sqrt(sec2);
    double expected = hierarchy_up_factor(kind, 6, 0) * ker.k2.norm();
    CHECK(std::abs(sec2 - expected) <= 1e-12 * (1 + expected));

    double rest = 0;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (static_cast<std::int64_t>(i) < gen.offset(2) ||
          static_cast<std::int64_t>(i) >= gen.offset(3))
        rest += std::norm(out[i]);
    CHECK(std::sqrt(rest) <= 1e-13);
  }
}

TEST_CASE("unordered ladder is self-adjoint on symmetric families, literal is not") {
  Lattice lat = Lattice::make(1, 2);
  Potential v = Potential::gaussian(lat, 1.0, 1.0);
  ModelParams pm = ModelParams::for_lattice(lat, 5, 1.0, 0.01, 0.1);
  Rng rng(53);
  Eigen::VectorXcd phi = rng.cgauss_vector(2);
  phi /= phi.norm();
  Kernels ker = build_kernels(lat, v, pm, phi);

  std::vector<cplx> x = pack_family(random_symmetric_family(2, 5, 4, phi, rng));
  std::vector<cplx> y = pack_family(random_symmetric_family(2, 5, 4, phi, rng));

  for (HierarchyKind kind : {HierarchyKind::finite_n, HierarchyKind::bogoliubov}) {
    HierarchyGenerator gen(kind, DownwardPairSum::unordered, ker, 5, 4);
    cplx lhs = dot(x, gen(y)), rhs = dot(gen(x), y);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
  HierarchyGenerator lit(HierarchyKind::bogoliubov, DownwardPairSum::ordered_literal, ker, 5, 4);
  CHECK(std::abs(dot(x, lit(y)) - dot(lit(x), y)) > 1e-6);
}

TEST_CASE("vacuum run stays even, mass-accounted and slot-orthogonal") {
  Lattice lat = Lattice::make(1, 3);
  Potential v = Potential::gaussian(lat, 1.2, 0.8);
  ModelParams pm = ModelParams::for_lattice(lat, 9, 1.0, 0.01, 0.2);
  ExcitationSplit split = make_flat_excitation(lat);
  HartreeTrajectory traj = evolve_hartree(lat, v, pm, split.phi0_unit);

  HierarchyOptions opt;
  opt.kind = HierarchyKind::bogoliubov;
  HierarchyResult res =
      evolve_hierarchy(vacuum_family(3, 9, 8, split.phi0_unit), lat, v, pm, traj, opt);

  REQUIRE(res.frames.size() == 21);
  for (const HierarchyFrame& fr : res.frames) {
    CHECK(fr.odd_mass <= 1e-12);
    CHECK(std::abs(fr.total_mass + fr.reprojection_removed - 1.0) <= 1e-8);
  }
  CHECK(res.frames[1].masses[4] <= 1e-6);          // double-pair mass needs two kicks
  CHECK(res.frames.back().masses[2] > 1e-6);       // pair creation did act
  CHECK(slot_orthogonality_residual(res.family) <= 1e-8);
}

TEST_CASE("undersized cutoff trips the tail monitor") {
  Lattice lat = Lattice::make(1, 3);
  Potential v = Potential::gaussian(lat, 2.0, 0.8);
  ModelParams pm = ModelParams::for_lattice(lat, 9, 1.0, 0.01, 0.4);
  ExcitationSplit split = make_flat_excitation(lat);
  HartreeTrajectory traj = evolve_hartree(lat, v, pm, split.phi0_unit);

  HierarchyOptions opt;
  opt.kind = HierarchyKind::bogoliubov;
  CHECK_THROWS_AS(evolve_hierarchy(vacuum_family(3, 9, 2, split.phi0_unit), lat, v, pm, traj, opt),
                  std::runtime_error);
}

TEST_CASE("untruncated family tracks the projected full-space flow") {
  Lattice lat = Lattice::make(1, 2);
  const int n = 3;
  Potential v = Potential::gaussian(lat, 1.0, 1.0);
  ModelParams pm = ModelParams::for_lattice(lat, n, 1.0, 0.002, 0.3);
  Rng rng(59);
  Eigen::VectorXcd phi0 = rng.cgauss_vector(2);
  phi0 /= phi0.norm();
  HartreeTrajectory traj = evolve_hartree(lat, v, pm, phi0);

  ManyBodyState st = random_symmetric_state(2, n, rng);
  std::vector<ManyBodyState> states = {st};
  std::vector<GeneratorKind> kinds = {GeneratorKind::pair_projected};
  co_evolve(kinds, states, lat, v, pm, traj, {}, [](int, double) {});

  HierarchyOptions opt;  // finite_n, unordered
  HierarchyResult res = evolve_hierarchy(decompose_sectors(st, phi0, n), lat, v, pm, traj, opt);

  ManyBodyState rec = reconstruct_state(res.family);
  CHECK(std::sqrt(norm_difference_sq(states[0], rec)) <= 1e-6);
  CHECK(std::abs(res.frames.back().total_mass - 1.0) <= 1e-8);
}
