#include "berkdyn/newton.hpp"

#include <algorithm>

namespace berkdyn {

NewtonPolygon::NewtonPolygon(const Poly& f, const Int& p) {
    if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "Newton polygon of zero polynomial");
    degree_ = f.degree();
    zero_order_ = f.order_at_zero();
    // points (i, vp(c_i)) for the deflated polynomial f / x^{zero_order}
    std::vector<std::pair<long, Rat>> pts;
    for (int i = zero_order_; i <= f.degree(); ++i) {
        Rat c = f.coeff(static_cast<size_t>(i));
        if (c == 0) continue;
        pts.emplace_back(i - zero_order_, vp(c, p).v);
    }
    // lower convex hull by monotone scan (points already sorted by i)
    for (const auto& pt : pts) {
        while (hull_.size() >= 2) {
            const auto& a = hull_[hull_.size() - 2];
            const auto& b = hull_[hull_.size() - 1];
            // drop b if it lies on or above segment a--pt
            Rat lhs = (b.second - a.second) * Rat(pt.first - a.first);
            Rat rhs = (pt.second - a.second) * Rat(b.first - a.first);
            if (lhs >= rhs)
                hull_.pop_back();
            else
                break;
        }
        hull_.push_back(pt);
    }
}

int NewtonPolygon::count_ge(const Rat& t) const {
    // largest index attaining min_i (v_i + i t); ties resolve to the larger
    // index since the hull is scanned in increasing i
    long best_i = 0;
    Rat best;
    bool first = true;
    for (const auto& [i, v] : hull_) {
        Rat val = v + Rat(i) * t;
        if (first || val <= best) {
            best = val;
            best_i = i;
            first = false;
        }
    }
    return zero_order_ + static_cast<int>(best_i);
}

int NewtonPolygon::count_gt(const Rat& t) const {
    // smallest index attaining the min
    long best_i = 0;
    Rat best;
    bool first = true;
    for (const auto& [i, v] : hull_) {
        Rat val = v + Rat(i) * t;
        if (first || val < best) {
            best = val;
            best_i = i;
            first = false;
        }
    }
    return zero_order_ + static_cast<int>(best_i);
}

int NewtonPolygon::count_in_open_annulus(const Rat& t_out, const Rat& t_in) const {
    if (!(t_in > t_out)) fail(ErrorCode::InvalidArgument, "annulus requires t_in > t_out");
    return count_gt(t_out) - count_ge(t_in);
}

std::vector<Rat> NewtonPolygon::root_valuations() const {
    std::vector<Rat> out;
    for (size_t i = 0; i + 1 < hull_.size(); ++i) {
        Rat slope = (hull_[i + 1].second - hull_[i].second) / Rat(hull_[i + 1].first - hull_[i].first);
        out.push_back(-slope);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace berkdyn
