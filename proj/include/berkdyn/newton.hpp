#pragma once

#include "berkdyn/poly.hpp"

namespace berkdyn {

/// Newton polygon of a polynomial: lower convex hull of the points
/// (i, vp(c_i)). Sign convention: a hull segment of slope -s with horizontal
/// length L accounts for L roots of valuation s, so
///   roots with vp >= t  <->  segments of slope <= -t,
///   roots with vp >  t  <->  segments of slope  < -t.
/// Roots "at zero" (c_0 = ... = c_{m-1} = 0) have valuation +inf and are
/// counted by every threshold.
class NewtonPolygon {
public:
    NewtonPolygon(const Poly& f, const Int& p);

    int degree() const { return degree_; }
    int zero_order() const { return zero_order_; }

    /// Number of roots x with vp(x) >= t (closed disk of radius p^{-t}).
    /// Equals zero_order + the largest index minimizing vp(c_i) + i t over
    /// the deflated polynomial.
    int count_ge(const Rat& t) const;
    /// Number of roots x with vp(x) > t (open disk).
    int count_gt(const Rat& t) const;
    /// Roots in the open annulus {t_out < vp(x) < t_in}.
    int count_in_open_annulus(const Rat& t_out, const Rat& t_in) const;

    /// Hull vertices (i, vp(c_i)) of the deflated polynomial, increasing i.
    const std::vector<std::pair<long, Rat>>& vertices() const { return hull_; }

    /// Distinct root valuations (finite ones), increasing.
    std::vector<Rat> root_valuations() const;

private:
    int degree_ = -1;
    int zero_order_ = 0;
    std::vector<std::pair<long, Rat>> hull_;  // for the polynomial with x^m removed
};

} // namespace berkdyn
