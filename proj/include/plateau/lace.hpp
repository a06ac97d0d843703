// Lace-expansion numerics.  The irreducible kernel is recovered by inverting
// the convolution equation on a quadrature grid,
//     Pi_hat(k) = 1 - z Omega Dhat(k) - 1/Ghat(k),
// rather than by summing diagrams.  From its moments the decomposition
//     G = lambda C_mu + f,   f = C_mu * E * G,   E = A_mu - lambda F
// is assembled with lambda, mu chosen so that sum E = sum |x|^2 E = 0, and the
// two assemblies of f are cross-checked pointwise.
//
// All moments feeding (lambda, mu) are taken from the same inverted table, so
// the E-moment cancellation is algebraically exact and the rebuilt G*F = delta
// identity holds to grid accuracy.  The identity F_hat(0) = 1/chi(z) then
// holds up to the series truncation; the gap |1 - z Omega - Pi_hat(0) -
// 1/chi| is reported as chi_gap rather than enforced.
#pragma once

#include "plateau/srw.hpp"
#include "plateau/wsaw.hpp"

namespace plateau {
namespace lace {

inline int default_grid(int d, int nmax) {
  int M = d <= 2 ? 128 : (d == 3 ? 64 : 32);
  if (M < 2 * nmax + 6) M = 2 * nmax + 6;
  M += M % 2;
  return M;
}

struct PiResult {
  SymTable pi;          // Pi_z on the box ||x||_inf <= nmax
  SymSpectrum pi_hat;   // spectrum on the symmetry-reduced midpoint grid
  SymSpectrum g_hat;    // Ghat on the same grid
  double chi = 0.0;
  double pi_hat0 = 0.0;      // sum_x Pi(x) over the table
  double pi_moment2 = 0.0;   // sum_x |x|^2 Pi(x)
  double pi_abs_sum = 0.0;   // sum_x |Pi(x)|
  double chi_gap = 0.0;      // (1 - z Omega - 1/chi) - Pi_hat(0), a truncation diagnostic
  double trunc_sensitivity = 0.0;  // max |Pi - Pi at nmax-2| on the box
  double ghat_min = 0.0;
  int grid = 0;
};

namespace detail {

// canonical support of G_z evaluated from the series, truncated at n_cut
inline std::vector<SymPoint> g_support(const wsaw::SeriesTable& s, double z, int n_cut) {
  SymTable g(s.params().dim, s.nmax());
  for (std::int64_t i = 0; i < g.count(); ++i) {
    const Point& x = g.fund_point(i);
    double v = 0.0, zp = 1.0;
    for (int n = 0; n <= n_cut; ++n) {
      v += s.coeff(n, x) * zp;
      zp *= z;
    }
    g.fund(i) = v;
  }
  std::vector<SymPoint> pts;
  for (std::int64_t i = 0; i < g.count(); ++i) {
    const Point& x = g.fund_point(i);
    double stab = 1.0;
    // |stab| = group order / orbit size
    double dfact = 1.0;
    for (int t = 2; t <= g.dim(); ++t) dfact *= t;
    stab = dfact * double(1u << g.dim()) / g.orbit_size(i);
    if (g.fund(i) != 0.0 || x.norm_sup() == 0) pts.push_back({x, g.fund(i), 1.0 / stab});
  }
  return pts;
}

struct PiCore {
  SymTable pi;
  SymSpectrum pi_hat, g_hat;
  double chi, ghat_min, dc;
};

inline PiCore invert_once(const wsaw::SeriesTable& s, double z, int M, int n_cut) {
  const int d = s.params().dim;
  const double omega = 2.0 * d;
  const int nmax = s.nmax();

  double chi = 0.0;
  for (int n = 0; n <= n_cut; ++n) chi += s.chi_coeff(n) * std::pow(z, n);

  auto support = g_support(s, z, n_cut);
  SymSpectrum gh = sym_fourier(support, d, M, nmax);

  double gmin = std::numeric_limits<double>::infinity();
  for (double v : gh.val) gmin = std::min(gmin, std::abs(v));
  if (gmin < 1e-9)
    throw std::runtime_error("pi_from_g: Ghat nearly vanishes on the grid (min |Ghat| = " +
                             std::to_string(gmin) + "); refusing to invert");

  SymSpectrum ph = gh;
  for (std::size_t i = 0; i < ph.pts.size(); ++i) {
    double dh = 0.0;
    for (int j = 0; j < d; ++j) dh += std::cos(ph.freq_of(ph.pts[i][j]));
    dh /= d;
    ph.val[i] = 1.0 - z * omega * dh - 1.0 / gh.val[i];
  }

  // Evaluate the inverse out to ||x||_1 <= nmax + 3.  The series itself lives
  // on the l1 ball of radius nmax, but 1/Ghat carries mass a little beyond it
  // (the decay rate per unit l1 distance is slowest along diagonals), so a
  // margin of a few shells keeps the dropped remainder at transform-noise
  // scale.  The remaining deficit shows up in chi_gap.
  PiCore core{SymTable(d, nmax), ph, gh, chi, gmin, 0.0};
  std::vector<Point> targets;
  std::vector<std::int64_t> ids;
  for (std::int64_t i = 0; i < core.pi.count(); ++i)
    if (core.pi.fund_point(i).norm_l1() <= nmax + 3) {
      targets.push_back(core.pi.fund_point(i));
      ids.push_back(i);
    }
  std::vector<double> vals = sym_inverse(ph, targets, nmax);
  for (std::size_t i = 0; i < ids.size(); ++i) core.pi.fund(ids[i]) = vals[i];

  double want = 1.0 - z * omega - 1.0 / chi;
  core.dc = want - core.pi.sum();
  return core;
}

}  // namespace detail

// Pi_hat on the grid and its inverse transform on the box, with a truncation
// sensitivity computed by redoing the inversion at nmax - 2.
inline PiResult pi_from_g(const wsaw::SeriesTable& s, double z, int M = 0) {
  if (s.params().geom.is_torus())
    throw std::invalid_argument("pi_from_g: FullLattice series only");
  const int nmax = s.nmax();
  if (M == 0) M = default_grid(s.params().dim, nmax);
  wsaw::ZcEstimate zc = wsaw::zc_estimate(s);
  if (z >= zc.value)
    throw std::invalid_argument("pi_from_g: z must lie below the estimated critical point");

  detail::PiCore core = detail::invert_once(s, z, M, nmax);
  detail::PiCore low = detail::invert_once(s, z, M, nmax - 2);

  PiResult res;
  res.pi = std::move(core.pi);
  res.pi_hat = std::move(core.pi_hat);
  res.g_hat = std::move(core.g_hat);
  res.chi = core.chi;
  res.ghat_min = core.ghat_min;
  res.chi_gap = core.dc;
  res.grid = M;
  for (std::int64_t i = 0; i < res.pi.count(); ++i) {
    double v = res.pi.fund(i), o = res.pi.orbit_size(i);
    const Point& x = res.pi.fund_point(i);
    res.pi_hat0 += o * v;
    res.pi_moment2 += o * v * double(x.norm2_sq());
    res.pi_abs_sum += o * std::abs(v);
    res.trunc_sensitivity =
        std::max(res.trunc_sensitivity, std::abs(v - low.pi.fund(i)));
  }
  return res;
}

// max-per-radius log-log slope of |Pi| against |x| (noise floor excluded)
inline double pi_decay_slope(const PiResult& pr, double floor = 0.0) {
  if (floor <= 0.0) floor = std::max(1e-14, 10.0 * pr.trunc_sensitivity * 1e-3);
  std::vector<double> lx, lv;
  for (std::int64_t i = 0; i < pr.pi.count(); ++i) {
    const Point& x = pr.pi.fund_point(i);
    if (x.norm_sup() == 0) continue;
    double v = std::abs(pr.pi.fund(i));
    if (v <= floor) continue;
    lx.push_back(0.5 * std::log(double(x.norm2_sq())));
    lv.push_back(std::log(v));
  }
  if (lx.size() < 2) return -std::numeric_limits<double>::infinity();
  return fit_linear(lx, lv).slope;
}

struct LambdaMu {
  double lambda = 1.0;
  double mu = 0.0;       // mu_z
  double mu_omega = 0.0;
  bool mu_in_range = true;  // mu Omega in (0, 1)
};

// lambda_z = 1/(1 - Pi_hat(0) + sum |x|^2 Pi);  mu_z Omega = 1 - lambda F_hat(0).
// F_hat(0) equals 1/chi(z) exactly for the untruncated objects; here it is
// evaluated as 1 - z Omega - Pi_hat(0) from the same table that supplies the
// moments, which is what makes the assembled E moments cancel to rounding.
// The distance to 1/chi is the chi_gap diagnostic.
inline LambdaMu solve_lambda_mu(double pi_hat0, double pi_moment2, double chi, double z, int d) {
  double den = 1.0 - pi_hat0 + pi_moment2;
  if (den == 0.0 || chi == 0.0) throw std::invalid_argument("solve_lambda_mu: zero denominator");
  LambdaMu lm;
  lm.lambda = 1.0 / den;
  lm.mu_omega = 1.0 - lm.lambda * (1.0 - z * 2.0 * d - pi_hat0);
  lm.mu = lm.mu_omega / (2.0 * d);
  lm.mu_in_range = lm.mu_omega > 0.0 && lm.mu_omega < 1.0;
  return lm;
}

struct LaceSolution {
  double z = 0.0, beta = 0.0, m_tilt = 0.0;
  double chi = 0.0;
  LambdaMu lm;
  double pi_hat0 = 0.0, pi_moment2 = 0.0, pi_abs_sum = 0.0;
  double e_moment0 = 0.0, e_moment2 = 0.0;   // residuals after assembly
  double f_sup_weighted = 0.0;               // max |f^{(m)}(x)| (1 v |x|^{d-2})
  double c_sup_weighted = 0.0;               // same functional of lambda C^{(m)}
  double f_route_residual = 0.0;             // max |(G - lambda C) - C*E*G|
  double gf_delta_residual = 0.0;            // max |(G*F)(x) - delta| (real space)
  double chi_gap = 0.0, trunc_sensitivity = 0.0;
  int grid = 0;
};

// Full decomposition G^{(m)} = lambda C^{(m)}_{mu} + f^{(m)} at one z.
// f is assembled both as G - lambda C (pointwise) and as C*E*G (spectral
// product on the grid), and the two must agree within combined truncation.
inline LaceSolution decompose(const wsaw::SeriesTable& s, double z, double m_tilt = 0.0,
                              int M = 0) {
  const int d = s.params().dim;
  const int nmax = s.nmax();
  const double omega = 2.0 * d;
  if (M == 0) M = default_grid(d, nmax);
  if (m_tilt > 0.0) {
    DecayFit mf = wsaw::mass_estimate(s, z, 2, std::min(nmax - 2, 6));
    if (m_tilt > 0.5 * mf.rate)
      throw std::invalid_argument("decompose: tilt exceeds half the fitted mass");
  }

  PiResult pr = pi_from_g(s, z, M);
  LambdaMu lm = solve_lambda_mu(pr.pi_hat0, pr.pi_moment2, pr.chi, z, d);

  LaceSolution sol;
  sol.z = z;
  sol.beta = s.params().beta;
  sol.m_tilt = m_tilt;
  sol.chi = pr.chi;
  sol.lm = lm;
  sol.pi_hat0 = pr.pi_hat0;
  sol.pi_moment2 = pr.pi_moment2;
  sol.pi_abs_sum = pr.pi_abs_sum;
  sol.chi_gap = pr.chi_gap;
  sol.trunc_sensitivity = pr.trunc_sensitivity;
  sol.grid = M;

  // E = (1 - lambda) delta - (mu Omega - lambda z Omega) D + lambda Pi
  const double dcoef = lm.mu_omega - lm.lambda * z * omega;
  SymTable etab(d, nmax);
  for (std::int64_t i = 0; i < etab.count(); ++i) etab.fund(i) = lm.lambda * pr.pi.fund(i);
  etab.fund(etab.rank(Point::zero(d))) += 1.0 - lm.lambda;
  {
    Point e1 = Point::unit(d, 0);
    etab.fund(etab.rank(e1)) -= dcoef / omega;  // D(x) = 1/Omega on each unit vector
  }
  double m0r = 0.0, m2r = 0.0;
  for (std::int64_t i = 0; i < etab.count(); ++i) {
    double o = etab.orbit_size(i), v = etab.fund(i);
    m0r += o * v;
    m2r += o * v * double(etab.fund_point(i).norm2_sq());
  }
  sol.e_moment0 = std::abs(m0r);
  sol.e_moment2 = std::abs(m2r);

  // G on the box from the series
  SymTable g = wsaw::evaluate_sym(s, z);

  // real-space rebuild: (G*F)(x) = G(x) - z Omega (D*G)(x) - (Pi*G)(x) vs delta
  {
    auto pi_full = pr.pi.full_list(1e-16 * std::max(1.0, pr.pi_abs_sum));
    SymTable probe(d, nmax - 1);
    for (std::int64_t i = 0; i < probe.count(); ++i) {
      if (probe.fund_point(i).norm_l1() > nmax - 1) continue;
      const Point& x = probe.fund_point(i);
      double dg = 0.0;
      for (int j = 0; j < d; ++j)
        for (int sgn : {+1, -1}) dg += g.at(x + Point::unit(d, j, sgn));
      dg /= omega;
      double pig = 0.0;
      for (const auto& [y, v] : pi_full) pig += v * g.at(x - y);
      double gf = g.at(x) - z * omega * dg - pig;
      double delta = x.norm_sup() == 0 ? 1.0 : 0.0;
      sol.gf_delta_residual = std::max(sol.gf_delta_residual, std::abs(gf - delta));
    }
  }

  // Outside mu_z Omega in (0,1) the C_mu leg has no subcritical Green
  // function; that is a regime warning (the paper guarantees the range only
  // for z in [1/Omega, z_c) at small beta), so the f decomposition is skipped.
  if (!lm.mu_in_range) {
    sol.f_sup_weighted = sol.c_sup_weighted = sol.f_route_residual =
        std::numeric_limits<double>::quiet_NaN();
    return sol;
  }

  // C_{mu_z} by the series route on the comparison box
  const int Lc = nmax + 2;
  srw::GreenParams cp;
  cp.dim = d;
  cp.mu = lm.mu;
  cp.box = Lc;
  cp.grid = 2 * Lc + 2;
  {
    double a = cp.mu_omega();
    cp.nmax = a > 0.0 ? std::max(60, int(std::ceil(std::log(1e-16) / std::log(a)))) : 1;
    cp.nmax = std::min(cp.nmax, 4000);
  }
  srw::GreenResult cg = srw::green_series(cp);

  // f1 = G - lambda C on the box; f2 = C*E*G via the spectral product
  // f2_hat(k) = Chat(k) Ehat(k) Ghat(k) with Chat exact and Ehat assembled
  SymSpectrum fh = pr.g_hat;
  for (std::size_t i = 0; i < fh.pts.size(); ++i) {
    double dh = 0.0;
    for (int j = 0; j < d; ++j) dh += std::cos(fh.freq_of(fh.pts[i][j]));
    dh /= d;
    double chat = 1.0 / (1.0 - lm.mu_omega * dh);
    double ehat = (1.0 - lm.lambda) - dcoef * dh + lm.lambda * pr.pi_hat.val[i];
    fh.val[i] = chat * ehat * pr.g_hat.val[i];
  }
  // comparison region: the l1 ball carrying the enumerated series
  SymTable f2(d, nmax);
  std::vector<Point> targets;
  std::vector<std::int64_t> ids;
  for (std::int64_t i = 0; i < f2.count(); ++i)
    if (f2.fund_point(i).norm_l1() <= nmax) {
      targets.push_back(f2.fund_point(i));
      ids.push_back(i);
    }
  {
    std::vector<double> vals = sym_inverse(fh, targets, nmax);
    for (std::size_t i = 0; i < ids.size(); ++i) f2.fund(ids[i]) = vals[i];
  }

  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Point& x = targets[t];
    double f1 = g.fund(g.rank(x)) - lm.lambda * cg.table.at(x);
    sol.f_route_residual = std::max(sol.f_route_residual, std::abs(f1 - f2.fund(ids[t])));
    double tiltmax = std::exp(m_tilt * x.norm_sup());  // max of e^{m x_1} on the orbit
    double wgt = std::max(1.0, std::pow(x.norm_euclid(), d - 2));
    sol.f_sup_weighted = std::max(sol.f_sup_weighted, std::abs(f1) * tiltmax * wgt);
    sol.c_sup_weighted =
        std::max(sol.c_sup_weighted, lm.lambda * cg.table.at(x) * tiltmax * wgt);
  }
  return sol;
}

// RHS of the mass identity: 2z [cosh m - 1] + [Pi_hat^{(m)}(0) - Pi_hat(0)],
// with Pi_hat^{(m)}(0) = sum_x Pi(x) cosh(m x_1) evaluated by the symmetric
// average (1/d) sum_j cosh(m x_j) per orbit.
inline double mass_identity_rhs(const SymTable* pi, double z, double m) {
  double rhs = 2.0 * z * (std::cosh(m) - 1.0);
  if (pi) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < pi->count(); ++i) {
      const Point& x = pi->fund_point(i);
      double cav = 0.0;
      for (int j = 0; j < pi->dim(); ++j) cav += std::cosh(m * x.c[j]);
      cav /= pi->dim();
      acc += pi->orbit_size(i) * pi->fund(i) * (cav - 1.0);
    }
    rhs += acc;
  }
  return rhs;
}

struct MassIdentityRow {
  double z = 0.0, chi = 0.0, m_hat = 0.0, lhs = 0.0, rhs = 0.0, rel_residual = 0.0;
};

struct MassIdentityReport {
  std::vector<MassIdentityRow> rows;
  double zc = 0.0, zc_uncertainty = 0.0;
  double c_sq_estimate = 0.0;  // slope of m_hat^2 against (1 - z/zc); expect Omega + O(beta)
  double a_estimate = 0.0;     // chi asymptote amplitude; expect 1 + O(beta)
};

// Evaluates 1/chi(z) = 2z[cosh m(z) - 1] + [Pi_hat^{(m(z))}(0) - Pi_hat(0)]
// with the fitted on-axis mass standing in for m(z); the residual mixes fit
// and truncation error and is reported jointly.
inline MassIdentityReport mass_identity_check(const wsaw::SeriesTable& s,
                                              const std::vector<double>& zs, int win_lo,
                                              int win_hi, int M = 0) {
  MassIdentityReport rep;
  wsaw::ZcEstimate zc = wsaw::zc_estimate(s);
  rep.zc = zc.value;
  rep.zc_uncertainty = zc.uncertainty;
  std::vector<double> xs, ys, cx, cy;
  for (double z : zs) {
    MassIdentityRow row;
    row.z = z;
    // susceptibility with the truncated tail completed geometrically at the
    // measured ratio z/zc_hat (chi_n z^n is asymptotically geometric)
    {
      double v = 0.0, zp = 1.0, tlast = 0.0;
      for (int n = 0; n <= s.nmax(); ++n) {
        double t = s.chi_coeff(n) * zp;
        v += t;
        zp *= z;
        if (t > 0.0) tlast = t;
      }
      double q = z / zc.value;
      if (q > 0.0 && q < 0.98) v += tlast * q / (1.0 - q);
      row.chi = v;
    }
    PiResult pr = pi_from_g(s, z, M);
    DecayFit mf = wsaw::mass_estimate(s, z, win_lo, win_hi);
    row.m_hat = mf.rate;
    row.lhs = 1.0 / row.chi;
    row.rhs = mass_identity_rhs(&pr.pi, z, mf.rate);
    row.rel_residual = std::abs(row.lhs - row.rhs) / std::max(std::abs(row.lhs), 1e-300);
    rep.rows.push_back(row);
    double eps = 1.0 - z / zc.value;
    xs.push_back(eps);
    ys.push_back(mf.rate * mf.rate);
    cx.push_back(eps);
    cy.push_back(1.0 / row.chi);
  }
  if (xs.size() >= 2) {
    rep.c_sq_estimate = fit_linear(xs, ys).slope;
    rep.a_estimate = 1.0 / fit_linear(cx, cy).slope;
  }
  return rep;
}

}  // namespace lace
}  // namespace plateau
