#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bogolab {

namespace {

std::int64_t ipow(int base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void site_coords(int s, int d, int m, int* out) {
  for (int i = 0; i < d; ++i) {
    out[i] = s % m;
    s /= m;
  }
}

}  // namespace

Lattice Lattice::make(int d, int m) {
  require(d >= 1 && d <= 4, "lattice dimension out of range");
  require(m >= 1, "sites per dimension must be positive");
  std::int64_t total = ipow(m, d);
  require(total >= 2, "lattice needs at least two sites");
  require(total <= (1 << 20), "lattice too large");

  Lattice lat;
  lat.dim = d;
  lat.sites_per_dim = m;
  lat.site_count = static_cast<int>(total);

  const int L = lat.site_count;
  lat.nbr.resize(static_cast<std::size_t>(L) * 2 * d);
  lat.disp.resize(static_cast<std::size_t>(L) * L);

  std::vector<int> ca(d), cb(d);
  for (int s = 0; s < L; ++s) {
    site_coords(s, d, m, ca.data());
    for (int dd = 0; dd < d; ++dd) {
      // +e_dd and -e_dd; for m == 2 both land on the same site (kept twice on purpose,
      // the stencil needs the multiplicity)
      int up = s + ((ca[dd] + 1) % m - ca[dd]) * static_cast<int>(ipow(m, dd));
      int dn = s + ((ca[dd] + m - 1) % m - ca[dd]) * static_cast<int>(ipow(m, dd));
      lat.nbr[static_cast<std::size_t>(s) * 2 * d + 2 * dd] = up;
      lat.nbr[static_cast<std::size_t>(s) * 2 * d + 2 * dd + 1] = dn;
    }
  }
  for (int a = 0; a < L; ++a) {
    site_coords(a, d, m, ca.data());
    for (int b = 0; b < L; ++b) {
      site_coords(b, d, m, cb.data());
      int idx = 0;
      for (int dd = d - 1; dd >= 0; --dd) idx = idx * m + ((ca[dd] - cb[dd] + m) % m);
      lat.disp[static_cast<std::size_t>(a) * L + b] = idx;
    }
  }
  return lat;
}

Eigen::MatrixXd Lattice::neg_laplacian() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(site_count, site_count);
  for (int s = 0; s < site_count; ++s) {
    a(s, s) += 2.0 * dim;
    for (int k = 0; k < 2 * dim; ++k) a(s, neighbor(s, k)) -= 1.0;
  }
  return a;
}

std::vector<double> Lattice::neg_laplacian_spectrum() const {
  std::vector<double> ev;
  ev.reserve(site_count);
  const int m = sites_per_dim;
  std::vector<int> c(dim);
  for (int s = 0; s < site_count; ++s) {
    site_coords(s, dim, m, c.data());
    double e = 0;
    for (int dd = 0; dd < dim; ++dd) {
      double x = std::sin(M_PI * c[dd] / m);
      e += 4.0 * x * x;
    }
    ev.push_back(e);
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

Potential Potential::from_values(const Lattice& lat, Eigen::VectorXd vals) {
  require(vals.size() == lat.site_count, "potential table size must equal site count");
  for (int i = 0; i < vals.size(); ++i)
    require(std::isfinite(vals[i]), "potential values must be finite");
  // evenness: v(x) == v(-x) on the torus
  const int L = lat.site_count;
  for (int s = 0; s < L; ++s) {
    int neg = lat.displacement(0, s);  // encodes -s
    require(std::abs(vals[s] - vals[neg]) <= 1e-12 * (1.0 + std::abs(vals[s])),
            "potential must be even under x -> -x");
  }
  Potential v;
  v.values = std::move(vals);
  v.repulsive = v.values.minCoeff() >= 0.0;
  return v;
}

Potential Potential::zero(const Lattice& lat) {
  return from_values(lat, Eigen::VectorXd::Zero(lat.site_count));
}

Potential Potential::delta(const Lattice& lat, double amplitude) {
  Eigen::VectorXd vals = Eigen::VectorXd::Zero(lat.site_count);
  vals[0] = amplitude;
  return from_values(lat, vals);
}

namespace {
double periodic_dist_sq(const Lattice& lat, int s) {
  int m = lat.sites_per_dim;
  double r2 = 0;
  for (int dd = 0; dd < lat.dim; ++dd) {
    int c = s % m;
    s /= m;
    int dist = std::min(c, m - c);
    r2 += static_cast<double>(dist) * dist;
  }
  return r2;
}
}  // namespace

Potential Potential::gaussian(const Lattice& lat, double amplitude, double sigma) {
  require(sigma > 0, "gaussian potential needs sigma > 0");
  Eigen::VectorXd vals(lat.site_count);
  for (int s = 0; s < lat.site_count; ++s)
    vals[s] = amplitude * std::exp(-periodic_dist_sq(lat, s) / (2.0 * sigma * sigma));
  return from_values(lat, vals);
}

Potential Potential::box(const Lattice& lat, double amplitude, double radius) {
  require(radius >= 0, "box potential needs radius >= 0");
  Eigen::VectorXd vals(lat.site_count);
  for (int s = 0; s < lat.site_count; ++s)
    vals[s] = periodic_dist_sq(lat, s) <= radius * radius ? amplitude : 0.0;
  return from_values(lat, vals);
}

Potential::Norms Potential::norms() const {
  Norms n;
  for (int i = 0; i < values.size(); ++i) {
    double a = std::abs(values[i]);
    n.l1 += a;
    n.l2 += a * a;
    n.linf = std::max(n.linf, a);
  }
  n.l2 = std::sqrt(n.l2);
  return n;
}

ModelParams ModelParams::make(int n, double rho, double hbar, double dt, double t_final) {
  require(n >= 2, "need at least two particles");
  require(rho > 0 && std::isfinite(rho), "density must be positive");
  require(hbar > 0 && std::isfinite(hbar), "hbar must be positive");
  require(dt > 0 && std::isfinite(dt), "dt must be positive");
  require(t_final >= 0 && std::isfinite(t_final), "t_final must be nonnegative");
  ModelParams p;
  p.n_particles = n;
  p.rho = rho;
  p.lambda = n / rho;
  p.hbar = hbar;
  p.dt = dt;
  p.t_final = t_final;
  require(std::abs(p.lambda * p.rho - n) <= 1e-12 * n, "lambda * rho must reproduce N");
  return p;
}

ModelParams ModelParams::for_lattice(const Lattice& lat, int n, double hbar, double dt,
                                     double t_final) {
  ModelParams p = make(n, static_cast<double>(n) / lat.site_count, hbar, dt, t_final);
  require(std::abs(p.lambda - lat.site_count) <= 1e-9, "lambda must equal the site count");
  p.lambda = lat.site_count;
  return p;
}

double default_dt(const Lattice& lat, int n, double rho, double hbar, const Potential& v) {
  double h0 = 4.0 * lat.dim * hbar * hbar;
  double w = (n - 1) * v.norms().linf / rho;
  return 0.05 * hbar / (h0 + w);
}

double coupling_constant_d(const ModelParams& params, const Potential& v, double phi_sup,
                           DForm form) {
  require(std::isfinite(phi_sup) && phi_sup >= 0, "condensate sup must be finite and nonnegative");
  auto n = v.norms();
  double vn = n.l1 + n.l2 + n.linf;
  double m = std::sqrt(params.lambda) * phi_sup;
  double pref = form == DForm::tight ? 4.0 : 9.0;
  return pref * (1.0 + m) * (1.0 + m) * vn / params.hbar;
}

}  // namespace bogolab
