// Fourier machinery: f_hat(k) = sum_x f(x) e^{ik.x} evaluated either on the
// exact torus dual lattice (frequencies (2pi/r) j) or on a uniform midpoint
// quadrature grid of the continuum torus [-pi,pi)^d.  The midpoint grid never
// contains k = 0, which is what lets callers evaluate at the critical point.
//
// Transforms are factored axis by axis, which is the same finite sum as the
// direct formula, just reassociated; no FFT is used or needed at desk scale.
#pragma once

#include <complex>
#include <vector>

#include "plateau/field.hpp"

namespace plateau {

using cplx = std::complex<double>;

enum class DualKind { TorusDual, Quadrature };

class DualGrid {
 public:
  DualGrid() = default;
  DualGrid(DualKind kind, int dim, int n) : kind_(kind), dim_(dim), n_(n) {
    if (kind == DualKind::Quadrature && n % 2 != 0)
      throw std::invalid_argument("quadrature grid size M must be even");
    std::int64_t c = 1;
    for (int i = 0; i < dim; ++i) {
      stride_[i] = c;
      c *= n;
    }
    count_ = c;
    v_.assign(std::size_t(c), cplx{0.0, 0.0});
  }

  DualKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int extent() const { return n_; }
  std::int64_t size() const { return count_; }
  cplx& operator[](std::int64_t i) { return v_[std::size_t(i)]; }
  const cplx& operator[](std::int64_t i) const { return v_[std::size_t(i)]; }
  std::vector<cplx>& raw() { return v_; }
  const std::vector<cplx>& raw() const { return v_; }

  // frequency component along one axis for slot index i in [0, n);
  // TorusDual uses the index set {-floor((r-1)/2), ..., ceil((r-1)/2)}
  double freq1(int i) const {
    if (kind_ == DualKind::TorusDual) {
      int j = i <= n_ / 2 ? i : i - n_;
      return 2.0 * M_PI * j / n_;
    }
    return -M_PI + (2.0 * M_PI / n_) * (i + 0.5);
  }

  std::array<double, kMaxDim> freq(std::int64_t flat) const {
    std::array<double, kMaxDim> k{};
    for (int a = 0; a < dim_; ++a) {
      k[a] = freq1(int(flat % n_));
      flat /= n_;
    }
    return k;
  }

  bool has_zero_mode() const { return kind_ == DualKind::TorusDual; }
  std::int64_t zero_index() const { return 0; }

 private:
  DualKind kind_ = DualKind::Quadrature;
  int dim_ = 1;
  int n_ = 2;
  std::array<std::int64_t, kMaxDim> stride_{};
  std::int64_t count_ = 0;
  std::vector<cplx> v_;
};

namespace detail {

// Apply a dense kernel along axis `a` of a row-major tensor (axis 0 fastest):
// out[..., q, ...] = sum_p in[..., p, ...] K[p * n_out + q].
inline std::vector<cplx> axis_apply(const std::vector<cplx>& in, std::vector<int>& ext, int a,
                                    int n_out, const std::vector<cplx>& K) {
  std::int64_t inner = 1, outer = 1;
  for (int i = 0; i < a; ++i) inner *= ext[i];
  for (std::size_t i = std::size_t(a) + 1; i < ext.size(); ++i) outer *= ext[i];
  const int n_in = ext[a];
  std::vector<cplx> out(std::size_t(inner * n_out * outer), cplx{0.0, 0.0});
  for (std::int64_t o = 0; o < outer; ++o) {
    const cplx* inO = in.data() + o * inner * n_in;
    cplx* outO = out.data() + o * inner * n_out;
    for (int p = 0; p < n_in; ++p) {
      const cplx* row = inO + std::int64_t(p) * inner;
      const cplx* Kp = K.data() + std::int64_t(p) * n_out;
      for (int q = 0; q < n_out; ++q) {
        cplx kv = Kp[q];
        if (kv == cplx{0.0, 0.0}) continue;
        cplx* dst = outO + std::int64_t(q) * inner;
        for (std::int64_t i = 0; i < inner; ++i) dst[i] += row[i] * kv;
      }
    }
  }
  ext[a] = n_out;
  return out;
}

}  // namespace detail

// Forward transform of a table onto a dual grid.
inline DualGrid fourier(const FieldTable& f, DualKind kind, int n) {
  const Geometry& g = f.geometry();
  DualGrid out(kind, g.dim, n);
  if (kind == DualKind::TorusDual && (!g.is_torus() || g.period != n))
    throw std::invalid_argument("fourier: torus dual grid requires matching torus table");

  // load table into a complex tensor
  std::vector<int> ext(std::size_t(g.dim), g.is_torus() ? g.period : 2 * f.radius() + 1);
  std::vector<cplx> data(f.raw().size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = cplx{f.raw()[i], 0.0};

  for (int a = 0; a < g.dim; ++a) {
    const int n_in = ext[a];
    std::vector<cplx> K(std::size_t(n_in) * n);
    for (int p = 0; p < n_in; ++p) {
      // coordinate represented by slot p along this axis
      double x = g.is_torus() ? double(p) : double(p - f.radius());
      for (int q = 0; q < n; ++q) {
        double k = out.freq1(q);
        K[std::size_t(p) * n + q] = std::polar(1.0, k * x);
      }
    }
    data = detail::axis_apply(data, ext, a, n, K);
  }
  out.raw() = std::move(data);
  return out;
}

// Inverse transform at a single point: exact finite sum on TorusDual,
// midpoint Riemann approximation of the continuum integral on Quadrature.
inline cplx inverse_fourier_at(const DualGrid& grid, const Point& x) {
  cplx s{0.0, 0.0};
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    auto k = grid.freq(i);
    double phase = 0.0;
    for (int a = 0; a < grid.dim(); ++a) phase -= k[a] * x.c[a];
    s += grid[i] * std::polar(1.0, phase);
  }
  double norm = 1.0;
  for (int a = 0; a < grid.dim(); ++a) norm /= grid.extent();
  return s * norm;
}

// Inverse transform onto a whole table (box of radius L, or the torus for
// TorusDual grids); real part is returned, the imaginary part of a transform
// of real symmetric data vanishes to rounding.
inline FieldTable inverse_fourier(const DualGrid& grid, const Geometry& g, int L = 0) {
  std::vector<int> ext(std::size_t(grid.dim()), grid.extent());
  std::vector<cplx> data = grid.raw();
  const int side = g.is_torus() ? g.period : 2 * L + 1;
  if (g.is_torus() && (grid.kind() != DualKind::TorusDual || g.period != grid.extent()))
    throw std::invalid_argument("inverse_fourier: grid/geometry mismatch");
  const double norm1 = 1.0 / grid.extent();
  for (int a = 0; a < grid.dim(); ++a) {
    std::vector<cplx> K(std::size_t(grid.extent()) * side);
    for (int p = 0; p < grid.extent(); ++p) {
      double k = grid.freq1(p);
      for (int q = 0; q < side; ++q) {
        double x = g.is_torus() ? double(q) : double(q - L);
        K[std::size_t(p) * side + q] = std::polar(norm1, -k * x);
      }
    }
    data = detail::axis_apply(data, ext, a, side, K);
  }
  FieldTable out = FieldTable::zeros(g, L);
  for (std::size_t i = 0; i < data.size(); ++i) out.raw()[i] = data[i].real();
  return out;
}

// ---------------------------------------------------------------------------
// Symmetry-reduced quadrature spectrum.
//
// For tables invariant under the hyperoctahedral group the whole M^d midpoint
// grid is redundant: it is enough to keep one frequency per orbit.  The orbit
// sum of plane waves reduces to the permanent-style kernel
//     P(k, x) = sum_{perm} prod_j 2 cos(k_j x_{perm(j)}),
// which is what makes d = 5 grids affordable.  Used by the lace module.
// ---------------------------------------------------------------------------

struct SymPoint {
  Point x;          // canonical representative (nonnegative, sorted descending)
  double value;     // table value at x
  double inv_stab;  // 1 / |stabilizer(x)|
};

// canonical support of a symmetric table (one entry per orbit)
inline std::vector<SymPoint> symmetric_support(const FieldTable& f) {
  if (f.geometry().is_torus())
    throw std::invalid_argument("symmetric_support: FullLattice tables only");
  std::vector<SymPoint> pts;
  const int d = f.geometry().dim;
  f.for_each([&](const Point& x, double v) {
    Point cx = PointGroup::canonical(x);
    if (!(cx == x)) return;
    if (v == 0.0 && x.norm_sup() > 0) return;
    // |stab| = prod over positive values multiplicities! * m0! * 2^{m0}
    double stab = 1.0;
    int i = 0;
    while (i < d) {
      int j = i;
      while (j < d && x.c[j] == x.c[i]) ++j;
      int m = j - i;
      for (int t = 2; t <= m; ++t) stab *= t;
      if (x.c[i] == 0) stab *= double(1u << m);
      i = j;
    }
    pts.push_back({x, v, 1.0 / stab});
  });
  return pts;
}

struct SymSpectrum {
  int dim = 1;
  int M = 2;
  std::vector<std::array<std::int16_t, kMaxDim>> pts;  // sorted tuples t, |k_j|=(2t_j+1)pi/M
  std::vector<double> orbit;                           // full-grid multiplicity
  std::vector<double> val;                             // spectrum value (real)

  double freq_of(int t) const { return (2.0 * t + 1.0) * M_PI / M; }
  Point kpoint(std::size_t i) const {
    Point k = Point::zero(dim);
    for (int a = 0; a < dim; ++a) k.c[a] = pts[i][a];
    return k;
  }
};

namespace detail {

// kernel engine: P(t-tuple, x) with cos table cos((2t+1)pi/M * c)
class SymKernel {
 public:
  SymKernel(int d, int M, int cmax) : d_(d), grp_(d), half_(M / 2), cmax_(cmax) {
    cosv_.resize(std::size_t(half_) * (cmax + 1));
    for (int t = 0; t < half_; ++t) {
      double k = (2.0 * t + 1.0) * M_PI / M;
      for (int c = 0; c <= cmax; ++c) cosv_[std::size_t(t) * (cmax_ + 1) + c] = 2.0 * std::cos(k * c);
    }
  }

  double operator()(const std::array<std::int16_t, kMaxDim>& t, const Point& x) const {
    double s = 0.0;
    for (const auto& pr : grp_.perms) {
      double p = 1.0;
      for (int j = 0; j < d_; ++j) p *= cosv_[std::size_t(t[j]) * (cmax_ + 1) + x.c[pr[j]]];
      s += p;
    }
    return s;
  }

 private:
  int d_;
  PointGroup grp_;
  int half_;
  int cmax_;
  std::vector<double> cosv_;
};

inline void fill_sym_points(SymSpectrum& sp) {
  const int d = sp.dim, half = sp.M / 2;
  double dfact = 1.0;
  for (int i = 2; i <= d; ++i) dfact *= i;
  const double group = dfact * double(1u << d);
  // nondecreasing tuples 0 <= t_0 <= ... <= t_{d-1} < M/2; orbit size is
  // 2^d d! / prod(mult!) since |k_j| is never zero on the midpoint grid
  std::vector<int> cur(std::size_t(d), 0);
  while (true) {
    std::array<std::int16_t, kMaxDim> arr{};
    double stab = 1.0;
    for (int i = 0; i < d; ++i) arr[i] = std::int16_t(cur[std::size_t(i)]);
    int i = 0;
    while (i < d) {
      int j = i;
      while (j < d && cur[std::size_t(j)] == cur[std::size_t(i)]) ++j;
      for (int m = 2; m <= j - i; ++m) stab *= m;
      i = j;
    }
    sp.pts.push_back(arr);
    sp.orbit.push_back(group / stab);
    int a = d - 1;
    while (a >= 0 && cur[std::size_t(a)] == half - 1) --a;
    if (a < 0) break;
    ++cur[std::size_t(a)];
    for (int b = a + 1; b < d; ++b) cur[std::size_t(b)] = cur[std::size_t(a)];
  }
  sp.val.assign(sp.pts.size(), 0.0);
}

}  // namespace detail

// f_hat on the symmetry-reduced midpoint grid, from the canonical support.
inline SymSpectrum sym_fourier(const std::vector<SymPoint>& support, int d, int M, int cmax) {
  if (M % 2 != 0) throw std::invalid_argument("sym_fourier: M must be even");
  SymSpectrum sp;
  sp.dim = d;
  sp.M = M;
  detail::fill_sym_points(sp);
  detail::SymKernel ker(d, M, cmax);
  for (std::size_t i = 0; i < sp.pts.size(); ++i) {
    double s = 0.0;
    for (const auto& p : support) s += p.value * p.inv_stab * ker(sp.pts[i], p.x);
    sp.val[i] = s;
  }
  return sp;
}

// inverse transform of a symmetric spectrum at canonical target points
inline std::vector<double> sym_inverse(const SymSpectrum& sp, const std::vector<Point>& targets,
                                       int cmax) {
  detail::SymKernel ker(sp.dim, sp.M, cmax);
  double norm = 1.0;
  for (int a = 0; a < sp.dim; ++a) norm /= sp.M;
  // 1/|stab(k)| = orbit / |group|
  double dfact = 1.0;
  for (int i = 2; i <= sp.dim; ++i) dfact *= i;
  const double group = dfact * double(1u << sp.dim);
  std::vector<double> out(targets.size(), 0.0);
  for (std::size_t j = 0; j < targets.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < sp.pts.size(); ++i)
      s += sp.val[i] * (sp.orbit[i] / group) * ker(sp.pts[i], targets[j]);
    out[j] = s * norm;
  }
  return out;
}

// D_hat(k) = (1/d) sum_j cos k_j
inline double dhat(const std::array<double, kMaxDim>& k, int d) {
  double s = 0.0;
  for (int a = 0; a < d; ++a) s += std::cos(k[a]);
  return s / d;
}

// Tilted step transform (Dk):
//   D_hat^{(m)}(k) = i (1/d) sinh m sin k_1 + (1/d) cosh m cos k_1
//                    + (1/d) sum_{j>=2} cos k_j
inline cplx dhat_tilted(const std::array<double, kMaxDim>& k, int d, double m) {
  double re = std::cosh(m) * std::cos(k[0]);
  double im = std::sinh(m) * std::sin(k[0]);
  for (int a = 1; a < d; ++a) re += std::cos(k[a]);
  return cplx{re / d, im / d};
}

}  // namespace plateau
