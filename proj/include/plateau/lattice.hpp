// Lattice geometry shared by every module: points of Z^d or of the discrete
// torus T_r^d, norms, the representative convention, and the hyperoctahedral
// point group used for symmetry reduction.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace plateau {

inline constexpr int kMaxDim = 8;

using Coords = std::array<int, kMaxDim>;

// Refusal distinct from invalid input: the request is well formed but exceeds
// the configured cost budget.  The CLI maps this to its own exit code.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

struct Point {
  Coords c{};
  int dim = 0;

  static Point zero(int d) {
    Point p;
    p.dim = d;
    return p;
  }
  static Point unit(int d, int axis, int sign = 1) {
    Point p = zero(d);
    p.c[axis] = sign;
    return p;
  }
  static Point of(std::initializer_list<int> xs) {
    Point p;
    p.dim = static_cast<int>(xs.size());
    int i = 0;
    for (int x : xs) p.c[i++] = x;
    return p;
  }

  int operator[](int i) const { return c[i]; }
  int& operator[](int i) { return c[i]; }

  bool operator==(const Point& o) const {
    if (dim != o.dim) return false;
    for (int i = 0; i < dim; ++i)
      if (c[i] != o.c[i]) return false;
    return true;
  }
  bool operator!=(const Point& o) const { return !(*this == o); }

  Point operator+(const Point& o) const {
    Point p = *this;
    for (int i = 0; i < dim; ++i) p.c[i] += o.c[i];
    return p;
  }
  Point operator-(const Point& o) const {
    Point p = *this;
    for (int i = 0; i < dim; ++i) p.c[i] -= o.c[i];
    return p;
  }
  Point operator-() const {
    Point p = *this;
    for (int i = 0; i < dim; ++i) p.c[i] = -p.c[i];
    return p;
  }
  Point operator*(int n) const {
    Point p = *this;
    for (int i = 0; i < dim; ++i) p.c[i] *= n;
    return p;
  }

  int norm_sup() const {
    int m = 0;
    for (int i = 0; i < dim; ++i) m = std::max(m, std::abs(c[i]));
    return m;
  }
  int norm_l1() const {
    int s = 0;
    for (int i = 0; i < dim; ++i) s += std::abs(c[i]);
    return s;
  }
  std::int64_t norm2_sq() const {
    std::int64_t s = 0;
    for (int i = 0; i < dim; ++i) s += std::int64_t(c[i]) * c[i];
    return s;
  }
  double norm_euclid() const { return std::sqrt(double(norm2_sq())); }
};

enum class GeometryKind { FullLattice, Torus };

// Torus points are always handled through their unique representative in
// [-r/2, r/2)^d componentwise.
struct Geometry {
  GeometryKind kind = GeometryKind::FullLattice;
  int dim = 1;
  int period = 0;  // r, Torus only

  static Geometry lattice(int d) {
    check_dim(d);
    Geometry g;
    g.kind = GeometryKind::FullLattice;
    g.dim = d;
    return g;
  }
  static Geometry torus(int d, int r) {
    check_dim(d);
    if (r < 3)
      throw std::invalid_argument("torus period must be >= 3 (projection would merge +e_j and -e_j)");
    Geometry g;
    g.kind = GeometryKind::Torus;
    g.dim = d;
    g.period = r;
    return g;
  }

  static void check_dim(int d) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("dimension out of supported range [1,8]");
  }

  bool is_torus() const { return kind == GeometryKind::Torus; }
  int degree() const { return 2 * dim; }  // Omega = 2d
  std::int64_t volume() const {  // number of sites, Torus only
    std::int64_t v = 1;
    for (int i = 0; i < dim; ++i) v *= period;
    return v;
  }

  static int representative(int x, int r) {
    int m = x % r;
    if (m < 0) m += r;
    return m >= (r + 1) / 2 ? m - r : m;
  }

  Point project(const Point& x) const {
    if (!is_torus()) return x;
    Point p = x;
    for (int i = 0; i < dim; ++i) p.c[i] = representative(p.c[i], period);
    return p;
  }

  bool operator==(const Geometry& o) const {
    return kind == o.kind && dim == o.dim && period == o.period;
  }
};

// Packed row-major index over the box [-L, L]^d.
struct BoxIndex {
  int dim = 1;
  int radius = 0;
  int side = 1;
  std::array<std::int64_t, kMaxDim> stride{};
  std::int64_t count = 1;

  BoxIndex() = default;
  BoxIndex(int d, int L) : dim(d), radius(L), side(2 * L + 1) {
    std::int64_t s = 1;
    for (int i = 0; i < d; ++i) {
      stride[i] = s;
      s *= side;
    }
    count = s;
  }
  bool contains(const Point& p) const { return p.norm_sup() <= radius; }
  std::int64_t pack(const Point& p) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim; ++i) idx += stride[i] * (p.c[i] + radius);
    return idx;
  }
  Point unpack(std::int64_t idx) const {
    Point p = Point::zero(dim);
    for (int i = 0; i < dim; ++i) {
      p.c[i] = int(idx % side) - radius;
      idx /= side;
    }
    return p;
  }
};

// Packed index over torus representatives, through the [0, r)^d chart.
struct TorusIndex {
  int dim = 1;
  int period = 3;
  std::array<std::int64_t, kMaxDim> stride{};
  std::int64_t count = 1;

  TorusIndex() = default;
  TorusIndex(int d, int r) : dim(d), period(r) {
    std::int64_t s = 1;
    for (int i = 0; i < d; ++i) {
      stride[i] = s;
      s *= r;
    }
    count = s;
  }
  std::int64_t pack(const Point& p) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim; ++i) {
      int m = p.c[i] % period;
      if (m < 0) m += period;
      idx += stride[i] * m;
    }
    return idx;
  }
  Point unpack(std::int64_t idx) const {
    Point p = Point::zero(dim);
    for (int i = 0; i < dim; ++i) {
      int m = int(idx % period);
      idx /= period;
      p.c[i] = m >= (period + 1) / 2 ? m - period : m;
    }
    return p;
  }
};

// The hyperoctahedral group (signed permutations) fixing the origin.  Small
// dimensions only; 2^d d! <= 10321920 is never iterated for d > 6 here.
struct PointGroup {
  int dim;
  std::vector<std::array<std::int8_t, kMaxDim>> perms;

  explicit PointGroup(int d) : dim(d) {
    std::array<std::int8_t, kMaxDim> p{};
    std::iota(p.begin(), p.begin() + d, std::int8_t{0});
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.begin() + d));
  }

  std::size_t order() const { return perms.size() << dim; }

  // image of x under (perm, sign mask): y_i = sign_i * x_perm[i]
  Point apply(const Point& x, std::size_t perm_id, unsigned signs) const {
    Point y = Point::zero(dim);
    const auto& pr = perms[perm_id];
    for (int i = 0; i < dim; ++i) {
      int v = x.c[pr[i]];
      y.c[i] = (signs >> i) & 1u ? -v : v;
    }
    return y;
  }

  template <typename F>
  void for_each_image(const Point& x, F&& f) const {
    for (std::size_t pi = 0; pi < perms.size(); ++pi)
      for (unsigned s = 0; s < (1u << dim); ++s) f(apply(x, pi, s));
  }

  // canonical orbit representative: absolute values sorted descending
  static Point canonical(const Point& x) {
    Point y = x;
    for (int i = 0; i < y.dim; ++i) y.c[i] = std::abs(y.c[i]);
    std::sort(y.c.begin(), y.c.begin() + y.dim, std::greater<int>());
    return y;
  }

  std::size_t orbit_size(const Point& x) const {
    std::vector<Point> seen;
    for_each_image(x, [&](const Point& y) {
      if (std::find(seen.begin(), seen.end(), y) == seen.end()) seen.push_back(y);
    });
    return seen.size();
  }
};

}  // namespace plateau
