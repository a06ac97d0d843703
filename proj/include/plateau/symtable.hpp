// Storage for hyperoctahedrally symmetric functions on a box of Z^d, keeping
// one value per orbit.  The orbit representative (coordinates nonnegative,
// sorted descending) is ranked by the combinatorial number system, so lookups
// need no dense index over the box.  This is the difference between d = 5
// being feasible and not: the box ||x||_inf <= 20 in d = 5 has 1.2e8 sites but
// only C(25,5) = 53130 orbits.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "plateau/field.hpp"

namespace plateau {

class SymTable {
 public:
  SymTable() = default;
  SymTable(int d, int L) : dim_(d), radius_(L) {
    Geometry::check_dim(d);
    // binomials C(n, k) for n <= L + d, k <= d
    binom_.assign(std::size_t(L + d + 1) * (d + 1), 0.0);
    for (int n = 0; n <= L + d; ++n) {
      b(n, 0) = 1.0;
      for (int k = 1; k <= d && k <= n; ++k)
        b(n, k) = (n - 1 >= k ? b(n - 1, k) : 0.0) + b(n - 1, k - 1);
    }
    count_ = std::int64_t(b(L + d, d));
    v_.assign(std::size_t(count_), 0.0);
    pts_.resize(std::size_t(count_));
    orbit_.resize(std::size_t(count_));
    Point p = Point::zero(d);
    fill_points(p, 0, L);
  }

  int dim() const { return dim_; }
  int radius() const { return radius_; }
  std::int64_t count() const { return count_; }
  const Point& fund_point(std::int64_t id) const { return pts_[std::size_t(id)]; }
  double orbit_size(std::int64_t id) const { return orbit_[std::size_t(id)]; }
  double& fund(std::int64_t id) { return v_[std::size_t(id)]; }
  double fund(std::int64_t id) const { return v_[std::size_t(id)]; }
  std::vector<double>& raw() { return v_; }
  const std::vector<double>& raw() const { return v_; }

  // rank of a canonical point (nonnegative, sorted descending)
  std::int64_t rank(const Point& c) const {
    std::int64_t r = 0;
    for (int i = 0; i < dim_; ++i) r += std::int64_t(b(c.c[i] + dim_ - 1 - i, dim_ - i));
    return r;
  }

  std::int64_t rank_of(const Point& any) const {
    Point c = PointGroup::canonical(any);
    if (c.c[0] > radius_) return -1;
    return rank(c);
  }

  double at(const Point& any) const {
    std::int64_t id = rank_of(any);
    return id < 0 ? 0.0 : v_[std::size_t(id)];
  }

  double sum() const {
    double s = 0.0;
    for (std::int64_t i = 0; i < count_; ++i) s += orbit_[std::size_t(i)] * v_[std::size_t(i)];
    return s;
  }

  // ids of the 2d stencil neighbours x +- e_j of every fundamental point
  // (-1 when outside the box); valid for evaluating D * f on symmetric f
  std::vector<std::int32_t> neighbour_ids() const {
    std::vector<std::int32_t> nb(std::size_t(count_) * 2 * dim_);
    for (std::int64_t i = 0; i < count_; ++i) {
      const Point& p = pts_[std::size_t(i)];
      int slot = 0;
      for (int j = 0; j < dim_; ++j)
        for (int s : {+1, -1}) {
          Point q = p;
          q.c[j] += s;
          std::int64_t id = rank_of(q);
          nb[std::size_t(i) * 2 * dim_ + slot] = std::int32_t(id);
          ++slot;
        }
    }
    return nb;
  }

  std::vector<std::pair<Point, double>> full_list(double drop_below = 0.0) const {
    PointGroup grp(dim_);
    std::vector<std::pair<Point, double>> out;
    for (std::int64_t i = 0; i < count_; ++i) {
      double val = v_[std::size_t(i)];
      if (std::abs(val) <= drop_below) continue;
      std::vector<Point> seen;
      grp.for_each_image(pts_[std::size_t(i)], [&](const Point& y) {
        if (std::find(seen.begin(), seen.end(), y) == seen.end()) seen.push_back(y);
      });
      for (const Point& y : seen) out.emplace_back(y, val);
    }
    return out;
  }

  FieldTable to_field() const {
    FieldTable f = FieldTable::zeros(Geometry::lattice(dim_), radius_);
    for (std::int64_t i = 0; i < f.size(); ++i) {
      Point x = f.point_at(i);
      f.raw()[std::size_t(i)] = at(x);
    }
    return f;
  }

 private:
  double& b(int n, int k) { return binom_[std::size_t(n) * (dim_ + 1) + k]; }
  double b(int n, int k) const { return binom_[std::size_t(n) * (dim_ + 1) + k]; }

  void fill_points(Point& p, int axis, int hi) {
    if (axis == dim_) {
      std::int64_t id = rank(p);
      pts_[std::size_t(id)] = p;
      // orbit = 2^{#nonzero} d! / prod(mult!)
      double o = 1.0;
      for (int i = 2; i <= dim_; ++i) o *= i;
      int i = 0;
      while (i < dim_) {
        int j = i;
        while (j < dim_ && p.c[j] == p.c[i]) ++j;
        for (int m = 2; m <= j - i; ++m) o /= m;
        if (p.c[i] != 0) o *= double(1u << (j - i));
        i = j;
      }
      orbit_[std::size_t(id)] = o;
      return;
    }
    for (int x = hi; x >= 0; --x) {
      p.c[axis] = x;
      fill_points(p, axis + 1, x);
    }
  }

  int dim_ = 1;
  int radius_ = 0;
  std::int64_t count_ = 0;
  std::vector<double> binom_;
  std::vector<double> v_;
  std::vector<Point> pts_;
  std::vector<double> orbit_;
};

}  // namespace plateau
