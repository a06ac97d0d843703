// Tabulated real-valued functions on a finite box of Z^d or on a torus, with
// the convolution and exponential-tilt operations everything else builds on.
//
// Semantics are by the mapping only; the dense array behind a table is an
// internal choice.  FullLattice tables live on the box ||x||_inf <= radius and
// the radius is an explicit parameter everywhere, so every truncation is
// steerable by the caller.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "plateau/lattice.hpp"

namespace plateau {

class FieldTable {
 public:
  FieldTable() = default;

  static FieldTable zeros(const Geometry& g, int radius = 0) {
    FieldTable f;
    f.geom_ = g;
    if (g.is_torus()) {
      f.torus_ = TorusIndex(g.dim, g.period);
      f.v_.assign(std::size_t(f.torus_.count), 0.0);
    } else {
      f.radius_ = radius;
      f.box_ = BoxIndex(g.dim, radius);
      f.v_.assign(std::size_t(f.box_.count), 0.0);
    }
    return f;
  }

  static FieldTable delta(const Geometry& g, int radius = 0) {
    FieldTable f = zeros(g, radius);
    f.ref(Point::zero(g.dim)) = 1.0;
    return f;
  }

  const Geometry& geometry() const { return geom_; }
  int radius() const { return radius_; }
  std::int64_t size() const { return std::int64_t(v_.size()); }
  std::vector<double>& raw() { return v_; }
  const std::vector<double>& raw() const { return v_; }

  double at(const Point& x) const {
    if (geom_.is_torus()) return v_[std::size_t(torus_.pack(x))];
    if (!box_.contains(x)) return 0.0;
    return v_[std::size_t(box_.pack(x))];
  }
  double& ref(const Point& x) {
    if (geom_.is_torus()) return v_[std::size_t(torus_.pack(x))];
    if (!box_.contains(x)) throw std::out_of_range("point outside table box");
    return v_[std::size_t(box_.pack(x))];
  }

  Point point_at(std::int64_t flat) const {
    return geom_.is_torus() ? torus_.unpack(flat) : box_.unpack(flat);
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::int64_t i = 0; i < size(); ++i) f(point_at(i), v_[std::size_t(i)]);
  }

  double sum() const {
    double s = 0.0;
    for (double x : v_) s += x;
    return s;
  }
  double sum_abs() const {
    double s = 0.0;
    for (double x : v_) s += std::abs(x);
    return s;
  }
  double max_abs() const {
    double s = 0.0;
    for (double x : v_) s = std::max(s, std::abs(x));
    return s;
  }

  bool is_symmetric(double tol = 0.0) const {
    PointGroup grp(geom_.dim);
    bool ok = true;
    for_each([&](const Point& x, double v) {
      grp.for_each_image(x, [&](const Point& y) {
        Point yy = geom_.project(y);
        if (geom_.is_torus() || yy.norm_sup() <= radius_)
          if (std::abs(at(yy) - v) > tol) ok = false;
      });
    });
    return ok;
  }

 private:
  Geometry geom_ = Geometry::lattice(1);
  int radius_ = 0;
  BoxIndex box_{1, 0};
  TorusIndex torus_{};
  std::vector<double> v_;
};

// One-step transition probability of simple random walk: D(x) = 1/(2d) on the
// 2d unit vectors (torus: on their projections, distinct because r >= 3).
inline FieldTable step_distribution(const Geometry& g) {
  FieldTable f = FieldTable::zeros(g, 1);
  const double w = 1.0 / g.degree();
  for (int j = 0; j < g.dim; ++j)
    for (int s : {+1, -1}) f.ref(g.project(Point::unit(g.dim, j, s))) += w;
  return f;
}

// (f*g)(x) = sum_y f(y) g(x-y).  Torus sums wrap; FullLattice results are
// truncated to the box of radius L_f + L_g (callers may re-truncate).
inline FieldTable convolve(const FieldTable& f, const FieldTable& g) {
  if (!(f.geometry() == g.geometry()))
    throw std::invalid_argument("convolve: geometry mismatch");
  const Geometry& geom = f.geometry();
  if (geom.is_torus()) {
    FieldTable out = FieldTable::zeros(geom);
    f.for_each([&](const Point& y, double fy) {
      if (fy == 0.0) return;
      g.for_each([&](const Point& w, double gw) {
        out.ref(geom.project(y + w)) += fy * gw;
      });
    });
    return out;
  }
  FieldTable out = FieldTable::zeros(geom, f.radius() + g.radius());
  f.for_each([&](const Point& y, double fy) {
    if (fy == 0.0) return;
    g.for_each([&](const Point& w, double gw) { out.ref(y + w) += fy * gw; });
  });
  return out;
}

inline FieldTable truncate(const FieldTable& f, int radius) {
  if (f.geometry().is_torus()) return f;
  FieldTable out = FieldTable::zeros(f.geometry(), radius);
  f.for_each([&](const Point& x, double v) {
    if (x.norm_sup() <= radius) out.ref(x) = v;
  });
  return out;
}

// Exponential tilt f^(m)(x) = f(x) e^{m x_1}.  Not torus-periodic, so torus
// input is rejected.
inline FieldTable tilt(const FieldTable& f, double m) {
  if (f.geometry().is_torus())
    throw std::invalid_argument("tilt: defined on FullLattice tables only");
  FieldTable out = f;
  if (m == 0.0) return out;
  out = FieldTable::zeros(f.geometry(), f.radius());
  f.for_each([&](const Point& x, double v) {
    if (v != 0.0) out.ref(x) = v * std::exp(m * x.c[0]);
  });
  return out;
}

}  // namespace plateau
