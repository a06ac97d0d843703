// Simple-random-walk two-point function (lattice Green function) on Z^d by
// two independent routes, the mass m_0(mu), and the empirical verification of
// the massive decay, heat kernel, and infrared bounds.
//
//   C_mu(x) = sum_n (mu Omega)^n D^{*n}(x),   C_hat(k) = 1/(1 - mu Omega Dhat(k))
//   cosh m_0(mu) = 1 + (1 - mu Omega) / (2 mu)
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "plateau/dual.hpp"
#include "plateau/fit.hpp"
#include "plateau/symtable.hpp"

namespace plateau {
namespace srw {

struct GreenParams {
  int dim = 1;
  double mu = 0.0;   // fugacity, mu * Omega <= 1
  int box = 10;      // box radius L for the series route
  int nmax = 100;    // series cutoff N
  int grid = 64;     // quadrature size M per axis (even)

  int omega() const { return 2 * dim; }
  double mu_omega() const { return mu * omega(); }
  static GreenParams with_mu_omega(int d, double a, int box, int nmax, int grid) {
    GreenParams p;
    p.dim = d;
    p.mu = a / (2.0 * d);
    p.box = box;
    p.nmax = nmax;
    p.grid = grid;
    return p;
  }
};

inline double chi0(double mu_omega) { return 1.0 / (1.0 - mu_omega); }

// m_0(mu): unique nonnegative solution of cosh m0 = 1 + (1 - mu Omega)/(2 mu).
// Evaluated as log(y + sqrt(y^2 - 1)); for y - 1 < 1e-8 the expansion
// sqrt(2(y-1)) avoids the cancellation in y^2 - 1.
inline double mass_m0(int d, double mu) {
  if (mu <= 0.0) throw std::invalid_argument("mass_m0: mu must be positive");
  double omega = 2.0 * d;
  if (mu * omega > 1.0 + 1e-12) throw std::invalid_argument("mass_m0: mu beyond 1/Omega");
  double y = 1.0 + (1.0 - mu * omega) / (2.0 * mu);
  if (y - 1.0 < 1e-8) return std::sqrt(2.0 * (y - 1.0 > 0 ? y - 1.0 : 0.0));
  return std::log(y + std::sqrt(y * y - 1.0));
}

struct GreenResult {
  SymTable table;           // symmetric values on the box
  double series_tail = 0.0; // (mu Omega)^{N+1} / (1 - mu Omega), series route
  double box_loss = 0.0;    // sum_n (mu Omega)^n * (mass escaped by step n)
  double quad_budget = 0.0; // image bound for the quadrature route
  bool critical_warning = false;
  int terms = 0;

  double at(const Point& x) const { return table.at(x); }
  // total error budget for cross-route comparisons
  double budget() const { return series_tail + box_loss + quad_budget; }
};

// Series route: sum_{n<=N} (mu Omega)^n D^{*n}(x), iterated on the box
// ||x||_inf <= L with absorbing truncation.  L >= N is not required; whatever
// probability mass leaves the box is accounted in box_loss.
inline GreenResult green_series(const GreenParams& p) {
  if (p.mu < 0.0) throw std::invalid_argument("green_series: mu < 0");
  const double a = p.mu_omega();
  if (a >= 1.0) throw std::invalid_argument("green_series: requires mu Omega < 1");

  GreenResult res;
  res.table = SymTable(p.dim, p.box);
  res.terms = p.nmax;
  SymTable cur(p.dim, p.box), nxt(p.dim, p.box);
  const auto nb = cur.neighbour_ids();
  const int deg = 2 * p.dim;
  const double w = 1.0 / deg;
  const std::int64_t n_fund = cur.count();

  cur.fund(cur.rank(Point::zero(p.dim))) = 1.0;
  res.table.fund(cur.rank(Point::zero(p.dim))) = 1.0;  // n = 0 term

  double weight = 1.0;
  for (int n = 1; n <= p.nmax; ++n) {
    weight *= a;
    if (weight < 1e-320) break;
    for (std::int64_t i = 0; i < n_fund; ++i) {
      double s = 0.0;
      const std::int32_t* row = nb.data() + std::size_t(i) * deg;
      for (int j = 0; j < deg; ++j)
        if (row[j] >= 0) s += cur.fund(row[j]);
      nxt.fund(i) = s * w;
    }
    std::swap(cur.raw(), nxt.raw());
    double mass = cur.sum();
    res.box_loss += weight * (1.0 - mass);
    for (std::int64_t i = 0; i < n_fund; ++i) res.table.fund(i) += weight * cur.fund(i);
  }
  res.series_tail = std::pow(a, p.nmax + 1) / (1.0 - a);
  return res;
}

// Quadrature route: midpoint Riemann sum of the inverse Fourier integral of
// 1/(1 - mu Omega Dhat).  The midpoint grid never hits k = 0, so mu Omega = 1
// is accepted (with a warning flag and no finite image budget).
inline GreenResult green_fourier(const GreenParams& p) {
  const double a = p.mu_omega();
  if (a > 1.0 + 1e-12) throw std::invalid_argument("green_fourier: mu Omega > 1");
  if (p.grid % 2 != 0) throw std::invalid_argument("green_fourier: grid size must be even");
  if (2 * p.box >= p.grid)
    throw std::invalid_argument("green_fourier: box must satisfy 2L < M");

  GreenResult res;
  res.table = SymTable(p.dim, p.box);
  res.critical_warning = (a >= 1.0 - 1e-15);

  // Two evaluation strategies for the same finite sum: a dense axis-factored
  // inverse when the full grid fits comfortably, otherwise the
  // symmetry-reduced kernel (many fewer frequencies, costlier per target).
  double dense_cells = std::pow(double(p.grid), p.dim);
  if (dense_cells <= 8.0e7) {
    DualGrid grid(DualKind::Quadrature, p.dim, p.grid);
    for (std::int64_t i = 0; i < grid.size(); ++i) {
      auto k = grid.freq(i);
      grid[i] = cplx{1.0 / (1.0 - a * dhat(k, p.dim)), 0.0};
    }
    FieldTable dense = inverse_fourier(grid, Geometry::lattice(p.dim), p.box);
    for (std::int64_t i = 0; i < res.table.count(); ++i)
      res.table.fund(i) = dense.at(res.table.fund_point(i));
  } else {
    SymSpectrum sp;
    sp.dim = p.dim;
    sp.M = p.grid;
    detail::fill_sym_points(sp);
    for (std::size_t i = 0; i < sp.pts.size(); ++i) {
      double dh = 0.0;
      for (int j = 0; j < p.dim; ++j) dh += std::cos(sp.freq_of(sp.pts[i][j]));
      dh /= p.dim;
      sp.val[i] = 1.0 / (1.0 - a * dh);
    }
    std::vector<Point> targets;
    targets.reserve(std::size_t(res.table.count()));
    for (std::int64_t i = 0; i < res.table.count(); ++i)
      targets.push_back(res.table.fund_point(i));
    std::vector<double> vals = sym_inverse(sp, targets, p.box);
    for (std::int64_t i = 0; i < res.table.count(); ++i) res.table.fund(i) = vals[std::size_t(i)];
  }

  if (a <= 0.0) {
    res.quad_budget = 0.0;  // integrand is identically 1; the sum is exact
  } else if (res.critical_warning) {
    res.quad_budget = std::numeric_limits<double>::infinity();
  } else {
    // images at distance >= sM - L, using C(y) <= C(0) e^{-m0 ||y||_inf} with
    // C(0) <= chi0 as the crude amplitude
    double m0 = mass_m0(p.dim, p.mu);
    double amp = chi0(a);
    double budget = 0.0;
    for (int s = 1; s < 64; ++s) {
      double cnt = std::pow(2.0 * s + 1.0, p.dim) - std::pow(2.0 * s - 1.0, p.dim);
      double term = cnt * std::exp(-m0 * (double(s) * p.grid - p.box));
      budget += term;
      if (term < 1e-320) break;
    }
    res.quad_budget = amp * budget;
  }
  return res;
}

struct MassiveDecayReport {
  DecayFit fit;
  double m0 = 0.0;
  double a1 = 0.0;
  bool rate_in_band = false;  // fitted rate in [a1 m0, (1+0.05) m0]
};

// Least-squares fit of log C_mu(n e_axis) to log A - p log n - m n on an
// explicit window.  The window is never chosen automatically.
inline MassiveDecayReport fit_massive_decay(const GreenParams& p, int axis, int win_lo,
                                            int win_hi, double a1 = 0.8) {
  if (p.dim <= 2) throw std::invalid_argument("fit_massive_decay: requires d > 2");
  if (p.mu_omega() >= 1.0) throw std::invalid_argument("fit_massive_decay: requires mu Omega < 1");
  if (win_hi > p.box) throw std::invalid_argument("fit window exceeds box");
  GreenResult g = green_series(p);
  std::vector<int> ns;
  std::vector<double> vals;
  for (int n = win_lo; n <= win_hi; ++n) {
    ns.push_back(n);
    vals.push_back(g.at(Point::unit(p.dim, axis) * n));
  }
  MassiveDecayReport rep;
  rep.fit = fit_log_decay(ns, vals, true);
  rep.m0 = mass_m0(p.dim, p.mu);
  rep.a1 = a1;
  rep.rate_in_band = rep.fit.rate >= a1 * rep.m0 && rep.fit.rate <= 1.05 * rep.m0;
  return rep;
}

// Pure power fit at criticality: log C = log A - p log n.
inline DecayFit fit_critical_power(const GreenParams& p, int axis, int win_lo, int win_hi) {
  GreenResult g = green_fourier(p);
  std::vector<double> xs, ys;
  for (int n = win_lo; n <= win_hi; ++n) {
    xs.push_back(std::log(double(n)));
    ys.push_back(std::log(g.at(Point::unit(p.dim, axis) * n)));
  }
  LinearFit lf = fit_linear(xs, ys);
  DecayFit fit;
  fit.power = -lf.slope;
  fit.amplitude = std::exp(lf.intercept);
  fit.window_lo = win_lo;
  fit.window_hi = win_hi;
  fit.points = int(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    fit.residual = std::max(fit.residual, std::abs(ys[i] - (lf.intercept + lf.slope * xs[i])));
  return fit;
}

struct HeatKernelReport {
  double A = 0.0;  // smallest usable amplitude (with 5% headroom)
  double a = 0.0;  // largest Gaussian rate compatible with A on the data
  bool bound_holds = false;
  std::vector<double> on_diagonal_scaled;  // n^{d/2} D^{*n}(0), even n
};

// Empirical constants for D^{*n}(x) <= A n^{-d/2} exp(-a ||x||_inf^2 / n) on
// all computed (n, x) with n >= ||x||_inf.  The ladder box equals n_max so no
// probability mass is lost.
inline HeatKernelReport fit_heat_kernel(int d, int nmax) {
  SymTable cur(d, nmax), nxt(d, nmax);
  const auto nb = cur.neighbour_ids();
  const int deg = 2 * d;
  const double w = 1.0 / deg;
  cur.fund(cur.rank(Point::zero(d))) = 1.0;

  HeatKernelReport rep;
  double A0 = 0.0;
  std::vector<std::vector<double>> ladder;  // keep fund values per n
  for (int n = 1; n <= nmax; ++n) {
    for (std::int64_t i = 0; i < cur.count(); ++i) {
      double s = 0.0;
      const std::int32_t* row = nb.data() + std::size_t(i) * deg;
      for (int j = 0; j < deg; ++j)
        if (row[j] >= 0) s += cur.fund(row[j]);
      nxt.fund(i) = s * w;
    }
    std::swap(cur.raw(), nxt.raw());
    ladder.push_back(cur.raw());
    for (std::int64_t i = 0; i < cur.count(); ++i) {
      double v = cur.fund(i);
      int ell = cur.fund_point(i).norm_sup();
      if (v > 0.0 && n >= ell) A0 = std::max(A0, v * std::pow(double(n), d / 2.0));
    }
    if (n % 2 == 0) {
      double v0 = cur.fund(cur.rank(Point::zero(d)));
      rep.on_diagonal_scaled.push_back(v0 * std::pow(double(n), d / 2.0));
    }
  }

  rep.A = 1.05 * A0;
  double a = std::numeric_limits<double>::infinity();
  SymTable probe(d, nmax);
  for (int n = 1; n <= nmax; ++n) {
    const auto& vals = ladder[std::size_t(n - 1)];
    for (std::int64_t i = 0; i < probe.count(); ++i) {
      double v = vals[std::size_t(i)];
      int ell = probe.fund_point(i).norm_sup();
      if (v <= 0.0 || ell == 0 || n < ell) continue;
      double bound = std::log(rep.A * std::pow(double(n), -d / 2.0) / v) * double(n) / (double(ell) * ell);
      a = std::min(a, bound);
    }
  }
  rep.a = a;
  rep.bound_holds = true;
  for (int n = 1; n <= nmax && rep.bound_holds; ++n) {
    const auto& vals = ladder[std::size_t(n - 1)];
    for (std::int64_t i = 0; i < probe.count(); ++i) {
      double v = vals[std::size_t(i)];
      int ell = probe.fund_point(i).norm_sup();
      if (v <= 0.0 || n < ell) continue;
      double rhs = rep.A * std::pow(double(n), -d / 2.0) *
                   std::exp(-rep.a * double(ell) * ell / double(n));
      if (v > rhs * (1.0 + 1e-12)) rep.bound_holds = false;
    }
  }
  return rep;
}

// A_hat^{(m)}(k) = 1 - mu Omega Dhat^{(m)}(k)
inline cplx ahat_tilted(const std::array<double, kMaxDim>& k, int d, double mu, double m) {
  return cplx{1.0, 0.0} - (mu * 2.0 * d) * dhat_tilted(k, d, m);
}

struct InfraredReport {
  double m0 = 0.0;
  double c_lower = 0.0;                 // largest c with |A_hat| >= c (|k|+m0)^2
  std::vector<double> deriv_constants;  // per alpha: max |grad^a C_hat| (|k|+m0)^{2+|a|}
  std::vector<std::string> deriv_labels;
};

// Massive infrared bound check on the quadrature grid: |A_hat^{(m)}| against
// c (|k| + m0)^2, and centered finite differences of C_hat^{(m)} = 1/A_hat
// for |alpha| <= 2 against const (|k| + m0)^{-(2+|alpha|)}.
inline InfraredReport infrared_check(int d, double mu, double m, int M, double sigma = 0.9) {
  double omega = 2.0 * d;
  if (mu < 1.0 / (2.0 * omega) - 1e-12 || mu >= 1.0 / omega)
    throw std::invalid_argument("infrared_check: mu outside [1/(2 Omega), 1/Omega)");
  InfraredReport rep;
  rep.m0 = mass_m0(d, mu);
  if (m > sigma * rep.m0 + 1e-12)
    throw std::invalid_argument("infrared_check: m exceeds sigma * m0");

  DualGrid grid(DualKind::Quadrature, d, M);
  std::vector<cplx> chat(std::size_t(grid.size()));
  double c_low = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    auto k = grid.freq(i);
    cplx A = ahat_tilted(k, d, mu, m);
    chat[std::size_t(i)] = 1.0 / A;
    double kn = 0.0;
    for (int a = 0; a < d; ++a) kn += k[a] * k[a];
    kn = std::sqrt(kn);
    c_low = std::min(c_low, std::abs(A) / ((kn + rep.m0) * (kn + rep.m0)));
  }
  rep.c_lower = c_low;

  // centered differences with periodic wrap; grid spacing h = 2 pi / M
  const double h = 2.0 * M_PI / M;
  std::array<std::int64_t, kMaxDim> stride{};
  std::int64_t sstep = 1;
  for (int a = 0; a < d; ++a) {
    stride[a] = sstep;
    sstep *= M;
  }
  auto wrap_at = [&](std::int64_t flat, int axis, int delta) {
    std::int64_t pos = (flat / stride[axis]) % M;
    std::int64_t base = flat - pos * stride[axis];
    std::int64_t q = (pos + delta + M) % M;
    return base + q * stride[axis];
  };
  auto record = [&](const std::string& label, int order, auto&& derive) {
    double cmax = 0.0;
    for (std::int64_t i = 0; i < grid.size(); ++i) {
      auto k = grid.freq(i);
      double kn = 0.0;
      for (int a = 0; a < d; ++a) kn += k[a] * k[a];
      kn = std::sqrt(kn);
      double dv = std::abs(derive(i));
      cmax = std::max(cmax, dv * std::pow(kn + rep.m0, 2.0 + order));
    }
    rep.deriv_labels.push_back(label);
    rep.deriv_constants.push_back(cmax);
  };

  for (int a = 0; a < d; ++a) {
    record("d/dk" + std::to_string(a + 1), 1, [&](std::int64_t i) {
      return (chat[std::size_t(wrap_at(i, a, 1))] - chat[std::size_t(wrap_at(i, a, -1))]) /
             (2.0 * h);
    });
    record("d2/dk" + std::to_string(a + 1) + "^2", 2, [&](std::int64_t i) {
      return (chat[std::size_t(wrap_at(i, a, 1))] - 2.0 * chat[std::size_t(i)] +
              chat[std::size_t(wrap_at(i, a, -1))]) /
             (h * h);
    });
  }
  for (int a = 0; a < d; ++a)
    for (int b2 = a + 1; b2 < d; ++b2)
      record("d2/dk" + std::to_string(a + 1) + "dk" + std::to_string(b2 + 1), 2,
             [&](std::int64_t i) {
               std::int64_t pp = wrap_at(wrap_at(i, a, 1), b2, 1);
               std::int64_t pm = wrap_at(wrap_at(i, a, 1), b2, -1);
               std::int64_t mp = wrap_at(wrap_at(i, a, -1), b2, 1);
               std::int64_t mm = wrap_at(wrap_at(i, a, -1), b2, -1);
               return (chat[std::size_t(pp)] - chat[std::size_t(pm)] - chat[std::size_t(mp)] +
                       chat[std::size_t(mm)]) /
                      (4.0 * h * h);
             });
  return rep;
}

}  // namespace srw
}  // namespace plateau
