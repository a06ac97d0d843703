// Log-linear least squares for decay fits, plain linear regression, and
// Aitken delta-squared acceleration for series ratio estimates.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "plateau/lattice.hpp"

namespace plateau {

// Fit of log f(n) = log(amplitude) - power*log(n) - rate*n over a window of
// integer distances.  residual is the max |log-scale deviation| on the window.
struct DecayFit {
  double rate = 0.0;
  double power = 0.0;
  double amplitude = 0.0;
  double residual = 0.0;
  int window_lo = 0;
  int window_hi = 0;
  int points = 0;
};

namespace detail {

// solve a small SPD system in place by Gaussian elimination with pivoting
inline void solve_small(std::vector<double>& A, std::vector<double>& b, int n) {
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A[std::size_t(r) * n + c]) > std::abs(A[std::size_t(piv) * n + c])) piv = r;
    if (A[std::size_t(piv) * n + c] == 0.0) throw std::runtime_error("singular fit system");
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(A[std::size_t(piv) * n + k], A[std::size_t(c) * n + k]);
      std::swap(b[std::size_t(piv)], b[std::size_t(c)]);
    }
    for (int r = c + 1; r < n; ++r) {
      double m = A[std::size_t(r) * n + c] / A[std::size_t(c) * n + c];
      for (int k = c; k < n; ++k) A[std::size_t(r) * n + k] -= m * A[std::size_t(c) * n + k];
      b[std::size_t(r)] -= m * b[std::size_t(c)];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[std::size_t(r)];
    for (int k = r + 1; k < n; ++k) s -= A[std::size_t(r) * n + k] * b[std::size_t(k)];
    b[std::size_t(r)] = s / A[std::size_t(r) * n + r];
  }
}

}  // namespace detail

// ns: distances (>=1); vals: positive function values.  Entries below
// `underflow` are treated as exact zero and excluded.  with_power co-fits the
// power-law correction; otherwise power is fixed to 0.
inline DecayFit fit_log_decay(const std::vector<int>& ns, const std::vector<double>& vals,
                              bool with_power = true, double underflow = 1e-300) {
  std::vector<double> xs, ys, ls;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(vals[i] > underflow)) continue;
    xs.push_back(double(ns[i]));
    ls.push_back(std::log(double(ns[i])));
    ys.push_back(std::log(vals[i]));
  }
  const int npar = with_power ? 3 : 2;
  if (int(xs.size()) < (with_power ? 4 : 3))
    throw std::invalid_argument("fit window too short (need >= 4 usable points)");

  // basis: [1, -log n, -n] . (logA, power, rate)
  std::vector<double> A(std::size_t(npar) * npar, 0.0), b(std::size_t(npar), 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double phi[3] = {1.0, -ls[i], -xs[i]};
    if (!with_power) phi[1] = -xs[i];
    for (int r = 0; r < npar; ++r) {
      for (int c = 0; c < npar; ++c) A[std::size_t(r) * npar + c] += phi[r] * phi[c];
      b[std::size_t(r)] += phi[r] * ys[i];
    }
  }
  detail::solve_small(A, b, npar);

  DecayFit fit;
  fit.amplitude = std::exp(b[0]);
  fit.power = with_power ? b[1] : 0.0;
  fit.rate = with_power ? b[2] : b[1];
  fit.points = int(xs.size());
  fit.window_lo = ns.front();
  fit.window_hi = ns.back();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double pred = b[0] - fit.power * ls[i] - fit.rate * xs[i];
    fit.residual = std::max(fit.residual, std::abs(ys[i] - pred));
  }
  return fit;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

inline LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("fit_linear: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double den = double(n) * sxx - sx * sx;
  LinearFit f;
  f.slope = (double(n) * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / double(n);
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  if (n > 2) f.slope_stderr = std::sqrt(ss / double(n - 2) * double(n) / den);
  return f;
}

// Aitken delta-squared: t'_n = t_{n+2} - (dt)^2 / d2t.  A vanishing second
// difference means the sequence is (locally) exact; keep the value as is.
inline std::vector<double> aitken(const std::vector<double>& t) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 2 < t.size(); ++i) {
    double d1 = t[i + 2] - t[i + 1];
    double d2 = d1 - (t[i + 1] - t[i]);
    double scale = std::max({std::abs(t[i]), std::abs(t[i + 1]), std::abs(t[i + 2]), 1e-30});
    if (std::abs(d2) <= 1e-13 * scale)
      out.push_back(t[i + 2]);
    else
      out.push_back(t[i + 2] - d1 * d1 / d2);
  }
  return out;
}

}  // namespace plateau
