// Simple-random-walk two-point function on the discrete torus by three
// independent routes (exact dual-lattice sum, dense linear solve, unfolded
// image sum), the killed-walk Monte Carlo estimator, and the plateau check
//   C_z(x) + c1' chi0/r^d <= C^T_z(x) <= C_z(x) + c2' chi0/r^d.
#pragma once

#include <Eigen/Dense>

#include "plateau/rng.hpp"
#include "plateau/srw.hpp"

namespace plateau {
namespace torus {

// Exact finite sum over the r^d dual frequencies:
//   C^T_z(x) = (1/r^d) sum_k e^{-ik.x} / (1 - z Omega Dhat(k)).
// The k = 0 term is chi0(z)/r^d, the plateau's zero mode.
inline FieldTable green_fourier(int d, int r, double z) {
  const double a = z * 2.0 * d;
  if (a >= 1.0) throw std::invalid_argument("torus green: requires z Omega < 1");
  Geometry g = Geometry::torus(d, r);
  DualGrid grid(DualKind::TorusDual, d, r);
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    auto k = grid.freq(i);
    grid[i] = cplx{1.0 / (1.0 - a * dhat(k, d)), 0.0};
  }
  return inverse_fourier(grid, g);
}

// Independent oracle: solve (delta - z Omega D_T) * C = delta as a dense
// r^d x r^d linear system.
inline FieldTable green_solve(int d, int r, double z, const Point* source = nullptr) {
  const double a = z * 2.0 * d;
  if (a >= 1.0) throw std::invalid_argument("torus green: requires z Omega < 1");
  Geometry g = Geometry::torus(d, r);
  const std::int64_t n = g.volume();
  if (n > 20000)
    throw budget_error("torus solve: " + std::to_string(n) +
                       " unknowns exceeds the dense-solve budget (20000)");
  TorusIndex idx(d, r);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    Point x = idx.unpack(i);
    for (int j = 0; j < d; ++j)
      for (int s : {+1, -1}) {
        Point y = g.project(x + Point::unit(d, j, s));
        A(i, idx.pack(y)) -= z;  // z Omega * (1/Omega) per step
      }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(source ? idx.pack(*source) : 0) = 1.0;
  Eigen::VectorXd c = A.partialPivLu().solve(rhs);
  FieldTable out = FieldTable::zeros(g);
  for (std::int64_t i = 0; i < n; ++i) out.raw()[std::size_t(i)] = c(i);
  return out;
}

struct UnfoldResult {
  FieldTable table;       // partial image sum on the torus
  double tail_bound = 0.0;  // geometric bound on the dropped shells
  int shells = 0;
};

// Image sum C^T_z(x) = sum_u C_z(x + r u) over ||u||_inf <= shell_cutoff,
// with the Z^d values from the quadrature route.
inline UnfoldResult green_unfold(int d, int r, double z, int shell_cutoff, int grid = 0) {
  const double a = z * 2.0 * d;
  if (a >= 1.0) throw std::invalid_argument("torus green: requires z Omega < 1");
  const int L = r * shell_cutoff + r / 2;
  int M = grid;
  if (M == 0) {
    double m0 = srw::mass_m0(d, z);
    M = std::max(2 * L + 4, L + int(std::ceil(25.0 / std::max(m0, 0.02))));
    M += M % 2;
  }
  srw::GreenParams p;
  p.dim = d;
  p.mu = z;
  p.box = L;
  p.grid = M;
  srw::GreenResult zg = srw::green_fourier(p);

  Geometry g = Geometry::torus(d, r);
  UnfoldResult res;
  res.shells = shell_cutoff;
  res.table = FieldTable::zeros(g);
  BoxIndex ubox(d, shell_cutoff);
  for (std::int64_t i = 0; i < res.table.size(); ++i) {
    Point x = res.table.point_at(i);
    double s = 0.0;
    for (std::int64_t ui = 0; ui < ubox.count; ++ui) {
      Point u = ubox.unpack(ui);
      s += zg.at(x + u * r);
    }
    res.table.raw()[std::size_t(i)] = s;
  }
  // dropped shells: C(y) <= chi0 e^{-m0 ||y||_inf}, ||x + r u||_inf >= r(s - 1/2)
  double m0 = srw::mass_m0(d, z);
  double amp = srw::chi0(a);
  for (int s = shell_cutoff + 1; s < shell_cutoff + 64; ++s) {
    double cnt = std::pow(2.0 * s + 1.0, d) - std::pow(2.0 * s - 1.0, d);
    double term = cnt * std::exp(-m0 * r * (double(s) - 0.5));
    res.tail_bound += amp * term;
    if (amp * term < 1e-320) break;
  }
  res.tail_bound += zg.budget() * std::pow(2.0 * shell_cutoff + 1.0, d);
  return res;
}

struct PlateauReport {
  int d = 0, r = 0;
  double z = 0.0, rho = 0.0, chi0 = 0.0;
  double c1_emp = 0.0;  // min over x of (C^T - C) r^d / chi0
  double c2_emp = 0.0;  // max over x of same
  bool in_regime = false;
  bool asserted = false;   // positivity assertion applied (in-regime, d != 4)
  bool positive = false;
  double corner_ratio = 0.0;   // C(corner) / Delta(corner)
  double d4_weakened_min = 0.0;  // min of Delta r^d log(chi0) / chi0, d = 4 only
};

// Theorem-style plateau check at a single (d, r, z).  Outside the theorem's
// hypotheses the same numbers are reported without assertion.
inline PlateauReport plateau_check(int d, int r, double z, double c3prime = 0.5, int grid = 0) {
  if (d < 3) throw std::invalid_argument("plateau_check: requires d >= 3");
  const double a = z * 2.0 * d;
  const double z0 = 1.0 / (2.0 * d);
  if (z <= 0.0 || z >= z0) throw std::invalid_argument("plateau_check: requires z in (0, 1/Omega)");
  PlateauReport rep;
  rep.d = d;
  rep.r = r;
  rep.z = z;
  rep.rho = z0 - z;
  rep.chi0 = srw::chi0(a);
  rep.in_regime = rep.rho <= c3prime / double(r) / double(r);

  FieldTable ct = green_fourier(d, r, z);

  double m0 = srw::mass_m0(d, z);
  const int L = (r + 1) / 2;
  int M = grid;
  if (M == 0) {
    M = std::max(2 * L + 4, L + int(std::ceil(25.0 / std::max(m0, 0.02))));
    M += M % 2;
  }
  srw::GreenParams p;
  p.dim = d;
  p.mu = z;
  p.box = L;
  p.grid = M;
  srw::GreenResult cz = srw::green_fourier(p);

  double vol = std::pow(double(r), d);
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
  ct.for_each([&](const Point& x, double vT) {
    double delta = vT - cz.at(x);
    double scaled = delta * vol / rep.chi0;
    dmin = std::min(dmin, scaled);
    dmax = std::max(dmax, scaled);
  });
  rep.c1_emp = dmin;
  rep.c2_emp = dmax;
  rep.positive = dmin > 0.0 && std::isfinite(dmax);
  rep.asserted = rep.in_regime && d != 4;

  Point corner = Point::zero(d);
  for (int j = 0; j < d; ++j) corner.c[j] = r / 2 - 1;
  double cz_corner = cz.at(corner);
  double delta_corner = ct.at(corner) - cz_corner;
  rep.corner_ratio = delta_corner != 0.0 ? cz_corner / delta_corner : 0.0;

  if (d == 4) rep.d4_weakened_min = dmin * std::log(std::max(rep.chi0, 1.000001));
  return rep;
}

struct KilledWalkResult {
  FieldTable mean;    // per-site estimate of C^T_z(x)
  FieldTable se;      // per-site standard error
  double chi_mean = 0.0;
  double chi_se = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int shards = 1;
};

// Unbiased visit-count estimator (CN): draw a geometric length N with
// P(N = n) = (z Omega)^n (1 - z Omega), walk uniformly on the torus, count
// visits per site.  Sharded; merge order is fixed by shard index so results
// are bit-reproducible for a given (seed, shards).
inline KilledWalkResult killed_walk_mc(int d, int r, double z, std::uint64_t samples,
                                       std::uint64_t seed, int shards = 1) {
  const double a = z * 2.0 * d;
  if (a >= 1.0) throw std::invalid_argument("killed_walk_mc: requires z Omega < 1");
  if (shards < 1) throw std::invalid_argument("killed_walk_mc: shards >= 1");
  Geometry g = Geometry::torus(d, r);
  TorusIndex idx(d, r);
  const std::int64_t vol = g.volume();

  std::vector<double> acc(std::size_t(vol), 0.0), acc2(std::size_t(vol), 0.0);
  double chi_acc = 0.0, chi_acc2 = 0.0;

  std::vector<double> scratch(std::size_t(vol), 0.0);
  std::vector<std::int64_t> touched;
  std::array<std::int64_t, kMaxDim> step_stride{};
  for (int j = 0; j < d; ++j) step_stride[j] = idx.stride[j];

  std::uint64_t done = 0;
  for (int shard = 0; shard < shards; ++shard) {
    std::uint64_t n_shard = samples / shards + (std::uint64_t(shard) < samples % shards ? 1 : 0);
    for (std::uint64_t i = 0; i < n_shard; ++i) {
      CounterRng rng = CounterRng::keyed(seed, std::uint64_t(shard), i);
      std::uint64_t N = rng.next_geometric(a);
      // walk in the [0, r)^d chart, packed index updated incrementally
      Point pos = Point::zero(d);
      std::int64_t flat = 0;
      scratch[0] += 1.0;
      touched.push_back(0);
      double total = 1.0;
      for (std::uint64_t n = 0; n < N; ++n) {
        std::uint32_t dir = rng.next_below(std::uint32_t(2 * d));
        int axis = int(dir >> 1);
        int sgn = (dir & 1u) ? -1 : 1;
        int c = pos.c[axis] + sgn;
        if (c >= r) c -= r;
        if (c < 0) c += r;
        flat += std::int64_t(c - pos.c[axis]) * step_stride[axis];
        pos.c[axis] = c;
        double& cell = scratch[std::size_t(flat)];
        if (cell == 0.0) touched.push_back(flat);
        cell += 1.0;
        total += 1.0;
      }
      for (std::int64_t t : touched) {
        acc[std::size_t(t)] += scratch[std::size_t(t)];
        acc2[std::size_t(t)] += scratch[std::size_t(t)] * scratch[std::size_t(t)];
        scratch[std::size_t(t)] = 0.0;
      }
      touched.clear();
      chi_acc += total;
      chi_acc2 += total * total;
      ++done;
    }
  }

  KilledWalkResult res;
  res.mean = FieldTable::zeros(g);
  res.se = FieldTable::zeros(g);
  const double S = double(done);
  for (std::int64_t i = 0; i < vol; ++i) {
    double m = acc[std::size_t(i)] / S;
    double var = std::max(0.0, acc2[std::size_t(i)] / S - m * m);
    res.mean.raw()[std::size_t(i)] = m;
    res.se.raw()[std::size_t(i)] = std::sqrt(var / S);
  }
  res.chi_mean = chi_acc / S;
  double cvar = std::max(0.0, chi_acc2 / S - res.chi_mean * res.chi_mean);
  res.chi_se = std::sqrt(cvar / S);
  res.samples = done;
  res.seed = seed;
  res.shards = shards;
  return res;
}

}  // namespace torus
}  // namespace plateau
