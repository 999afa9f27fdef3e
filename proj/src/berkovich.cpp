#include "berkdyn/berkovich.hpp"

#include <algorithm>
#include <sstream>

namespace berkdyn {

namespace {

// Internal tree coordinates rooted at infinity: a finite type I point x is
// (x, +inf), a type II disk is (a, t), and infinity is the root. The meet of
// two branches sits at exponent min(t, t', vp(a - a')).
struct Ext {
    bool root = false;  // the type I point at infinity
    Rat a;
    ValExp t;
};

Ext to_ext(const BerkPoint& s) {
    if (s.kind == BerkPoint::Kind::TypeI) {
        if (s.pt.infinite) return Ext{true, Rat(0), ValExp::infinity()};
        return Ext{false, s.pt.x, ValExp::infinity()};
    }
    return Ext{false, s.center, ValExp::of(s.t)};
}

BerkPoint from_ext(const Ext& e, const Int& p) {
    if (e.root) return BerkPoint::type1(ProjPoint::infinity());
    if (e.t.inf) return BerkPoint::type1(ProjPoint::finite(e.a));
    return BerkPoint::type2(e.a, e.t.v, p);
}

bool ext_eq(const Ext& x, const Ext& y, const Int& p) {
    if (x.root || y.root) return x.root == y.root;
    if (x.t != y.t) return false;
    if (x.t.inf) return x.a == y.a;
    return vp(x.a - y.a, p) >= x.t;
}

// meet (join toward the root) of two non-root points
Ext meet(const Ext& x, const Ext& y, const Int& p) {
    ValExp m = min(min(x.t, y.t), vp(x.a - y.a, p));
    return Ext{false, x.a, m};
}

// true iff x lies weakly under s (in the subtree hanging below s)
bool under(const Ext& s, const Ext& x, const Int& p) {
    if (x.root) return false;
    return x.t >= s.t && vp(x.a - s.a, p) >= s.t;
}

} // namespace

BerkPoint BerkPoint::type2(const Rat& a, const Rat& t, const Int& p) {
    BerkPoint s;
    s.kind = Kind::TypeII;
    s.t = t;
    s.center = trunc_padic(a, ceil_long(t), p);
    return s;
}

bool BerkPoint::operator==(const BerkPoint& o) const {
    if (kind != o.kind) return false;
    if (kind == Kind::TypeI) return pt == o.pt;
    return center == o.center && t == o.t;
}

std::string BerkPoint::to_string() const {
    if (kind == Kind::TypeI) return "I(" + pt.to_string() + ")";
    return "II(" + rat_to_string(center) + ", " + rat_to_string(t) + ")";
}

Rat hyperbolic_distance(const BerkPoint& a, const BerkPoint& b, const Int& p) {
    if (!a.is_type2() || !b.is_type2())
        fail(ErrorCode::TypeIInfinite, "distance to a type I point is infinite");
    Ext x = to_ext(a), y = to_ext(b);
    ValExp m = min(min(x.t, y.t), vp(x.a - y.a, p));
    return (x.t.v - m.v) + (y.t.v - m.v);
}

BerkPoint median(const BerkPoint& xb, const BerkPoint& yb, const BerkPoint& zb, const Int& p) {
    Ext x = to_ext(xb), y = to_ext(yb), z = to_ext(zb);
    if (ext_eq(x, y, p) || ext_eq(x, z, p) || ext_eq(y, z, p))
        fail(ErrorCode::EqualPoints, "median requires three distinct points");
    if (x.root) return from_ext(meet(y, z, p), p);
    if (y.root) return from_ext(meet(x, z, p), p);
    if (z.root) return from_ext(meet(x, y, p), p);
    Ext m1 = meet(x, y, p), m2 = meet(x, z, p), m3 = meet(y, z, p);
    // the deepest of the three pairwise meets is the Steiner point
    Ext best = m1;
    if (m2.t > best.t) best = m2;
    if (m3.t > best.t) best = m3;
    return from_ext(best, p);
}

BerkPoint join_towards_infinity(const BerkPoint& x, const BerkPoint& y, const Int& p) {
    return median(x, y, BerkPoint::type1(ProjPoint::infinity()), p);
}

bool between(const BerkPoint& sb, const BerkPoint& s0b, const BerkPoint& s1b, const Int& p) {
    if (!sb.is_type2()) fail(ErrorCode::InvalidArgument, "between requires a type II middle point");
    Ext s = to_ext(sb), s0 = to_ext(s0b), s1 = to_ext(s1b);
    if (ext_eq(s, s0, p) || ext_eq(s, s1, p)) return false;
    bool u0 = under(s, s0, p), u1 = under(s, s1, p);
    if (u0 != u1) return true;
    if (!u0) return false;  // both in the direction toward the root
    Ext m = meet(s0, s1, p);
    return !(m.t > s.t);
}

BerkPoint geodesic_point(const BerkPoint& s0b, const BerkPoint& s1b, const Rat& d, const Int& p) {
    if (!s0b.is_type2()) fail(ErrorCode::InvalidArgument, "geodesic start must be type II");
    if (d < 0) fail(ErrorCode::OutOfRange, "negative arc length");
    Ext s0 = to_ext(s0b), s1 = to_ext(s1b);
    if (ext_eq(s0, s1, p)) {
        if (d == 0) return s0b;
        fail(ErrorCode::OutOfRange, "positive distance along a degenerate geodesic");
    }
    if (s1.root) return BerkPoint::type2(s0.a, s0.t.v - d, p);
    Ext m = meet(s0, s1, p);
    Rat up = s0.t.v - m.t.v;
    if (d <= up) return BerkPoint::type2(s0.a, s0.t.v - d, p);
    Rat rem = d - up;
    if (!s1.t.inf) {
        Rat down_max = s1.t.v - m.t.v;
        if (rem > down_max) fail(ErrorCode::OutOfRange, "arc length exceeds the distance");
    }
    return BerkPoint::type2(s1.a, m.t.v + rem, p);
}

Direction direction_at(const BerkPoint& sb, const BerkPoint& target, const Int& p) {
    if (!sb.is_type2()) fail(ErrorCode::InvalidArgument, "directions exist at type II points only");
    if (!is_integer(sb.t))
        fail(ErrorCode::NonIntegralExponent,
             "residue charts need an integral exponent, got " + rat_to_string(sb.t));
    Ext s = to_ext(sb), x = to_ext(target);
    if (ext_eq(s, x, p)) fail(ErrorCode::TargetEqualsBase, "direction toward the point itself");
    if (!under(s, x, p)) return Direction{sb, Residue{true, 0}};
    Rat delta = x.a - sb.center;  // canonical center of the base
    long tt = static_cast<long>(sb.t.get_num().get_si());
    if (delta == 0) return Direction{sb, Residue{false, 0}};
    ValExp vd = vp(delta, p);
    if (vd.inf || vd.v > tt) return Direction{sb, Residue{false, 0}};
    Rat unit = delta / pow_p(p, tt);
    Int num = unit.get_num() % p;
    if (num < 0) num += p;
    Int den = unit.get_den() % p;
    Int r = (num * inv_mod(den, p)) % p;
    return Direction{sb, Residue{false, r.get_si()}};
}

namespace {

// 0 = toward the root, k>0 = distinct direction classes under s
int direction_class(const Ext& s, const Ext& x, std::vector<Ext>& reps, const Int& p) {
    if (!under(s, x, p)) return 0;
    for (size_t i = 0; i < reps.size(); ++i) {
        if (meet(reps[i], x, p).t > s.t) return static_cast<int>(i) + 1;
    }
    reps.push_back(x);
    return static_cast<int>(reps.size());
}

} // namespace

bool separates(const BerkPoint& sb, const std::vector<BerkPoint>& X, const Int& p) {
    if (!sb.is_type2()) fail(ErrorCode::InvalidArgument, "separation tested at type II points");
    Ext s = to_ext(sb);
    std::vector<Ext> reps;
    int first_class = -1;
    for (const auto& xb : X) {
        Ext x = to_ext(xb);
        if (ext_eq(s, x, p)) continue;
        int c = direction_class(s, x, reps, p);
        if (first_class == -1)
            first_class = c;
        else if (c != first_class)
            return true;
    }
    return false;
}

bool ball_contains_point(const OpenBall& b, const ProjPoint& x, const Int& p) {
    return ball_contains_tree_point(b, BerkPoint::type1(x), p);
}

bool ball_contains_tree_point(const OpenBall& b, const BerkPoint& s, const Int& p) {
    Ext base = to_ext(b.boundary), x = to_ext(s);
    if (ext_eq(base, x, p)) return false;
    Direction d = direction_at(b.boundary, s, p);
    return d.residue == b.dir;
}

BallRelation classify_balls(const OpenBall& a, const OpenBall& b, const Int& p) {
    if (a.boundary == b.boundary)
        return (a.dir == b.dir) ? BallRelation::Equal : BallRelation::Disjoint;
    bool a_in_b = ball_contains_tree_point(b, a.boundary, p);
    bool b_in_a = ball_contains_tree_point(a, b.boundary, p);
    if (a_in_b && b_in_a) return BallRelation::UnionIsP1;
    if (b_in_a) return BallRelation::SecondInsideFirst;
    if (a_in_b) return BallRelation::FirstInsideSecond;
    return BallRelation::Disjoint;
}

namespace {

std::vector<ProjPoint> ball_sample_points(const OpenBall& b, const Int& p) {
    std::vector<ProjPoint> out;
    const Rat& a = b.boundary.center;
    long t = static_cast<long>(b.boundary.t.get_num().get_si());
    long pl = p.get_si();
    if (!b.dir.inf) {
        Rat base = a + Rat(b.dir.r) * pow_p(p, t);
        out.push_back(ProjPoint::finite(base));
        for (long s = 0; s < pl && s < 6; ++s)
            out.push_back(ProjPoint::finite(base + Rat(s) * pow_p(p, t + 1)));
        out.push_back(ProjPoint::finite(base + pow_p(p, t + 2)));
    } else {
        out.push_back(ProjPoint::infinity());
        for (long s = 1; s < pl && s <= 6; ++s) {
            out.push_back(ProjPoint::finite(a + Rat(s) * pow_p(p, t - 1)));
            out.push_back(ProjPoint::finite(a + Rat(s) * pow_p(p, t - 2)));
        }
    }
    return out;
}

std::vector<OpenBall> reduce_balls(std::vector<OpenBall> balls, const Int& p) {
    // drop duplicates and any ball containing another (intersection keeps the
    // smaller); a disjoint pair means the intersection is empty
    std::vector<OpenBall> out;
    for (const auto& b : balls) {
        bool skip = false;
        for (auto it = out.begin(); it != out.end();) {
            switch (classify_balls(*it, b, p)) {
                case BallRelation::Equal:
                case BallRelation::FirstInsideSecond:
                    skip = true;
                    ++it;
                    break;
                case BallRelation::SecondInsideFirst:
                    it = out.erase(it);
                    break;
                case BallRelation::Disjoint:
                    fail(ErrorCode::EmptyIntersection, "defining balls are disjoint");
                case BallRelation::UnionIsP1:
                    ++it;
                    break;
            }
            if (skip) break;
        }
        if (!skip) out.push_back(b);
    }
    return out;
}

} // namespace

Affinoid make_affinoid(std::vector<OpenBall> balls, const Int& p) {
    if (balls.empty()) fail(ErrorCode::InvalidArgument, "affinoid needs at least one ball");
    auto reduced = reduce_balls(std::move(balls), p);
    std::vector<ProjPoint> candidates;
    for (const auto& b : reduced) {
        auto s = ball_sample_points(b, p);
        candidates.insert(candidates.end(), s.begin(), s.end());
        candidates.push_back(ProjPoint::finite(b.boundary.center));
    }
    candidates.push_back(ProjPoint::infinity());
    candidates.push_back(ProjPoint::finite(0));
    for (const auto& c : candidates) {
        bool ok = true;
        for (const auto& b : reduced) {
            if (!ball_contains_point(b, c, p)) {
                ok = false;
                break;
            }
        }
        if (ok) return Affinoid{reduced, c};
    }
    fail(ErrorCode::EmptyIntersection, "no witness point found for the ball intersection");
}

bool affinoid_contains(const Affinoid& a, const ProjPoint& x, const Int& p) {
    for (const auto& b : a.balls)
        if (!ball_contains_point(b, x, p)) return false;
    return true;
}

std::vector<ClosedBallCompl> affinoid_complement(const Affinoid& a, const Int& p) {
    auto reduced = reduce_balls(a.balls, p);
    std::vector<ClosedBallCompl> out;
    out.reserve(reduced.size());
    for (const auto& b : reduced) out.push_back(ClosedBallCompl{b});
    return out;
}

std::optional<Affinoid> affinoid_intersect(const Affinoid& a, const Affinoid& b, const Int& p) {
    std::vector<OpenBall> all = a.balls;
    all.insert(all.end(), b.balls.begin(), b.balls.end());
    try {
        return make_affinoid(std::move(all), p);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::EmptyIntersection) return std::nullopt;
        throw;
    }
}

Affinoid affinoid_union_if_overlapping(const Affinoid& a, const Affinoid& b, const Int& p) {
    if (!affinoid_intersect(a, b, p))
        fail(ErrorCode::DisjointUnion, "union of disjoint affinoids is not an affinoid");
    auto ra = reduce_balls(a.balls, p);
    auto rb = reduce_balls(b.balls, p);
    // complement of the union = pairwise intersections of complements; each
    // nonempty one is the complement of the larger of the two open balls
    std::vector<OpenBall> out;
    for (const auto& ba : ra) {
        for (const auto& bb : rb) {
            switch (classify_balls(ba, bb, p)) {
                case BallRelation::UnionIsP1:
                    break;  // complements disjoint: contributes nothing
                case BallRelation::Equal:
                case BallRelation::FirstInsideSecond:
                    out.push_back(bb);
                    break;
                case BallRelation::SecondInsideFirst:
                    out.push_back(ba);
                    break;
                case BallRelation::Disjoint:
                    fail(ErrorCode::Internal, "overlapping affinoids with disjoint defining balls");
            }
        }
    }
    return make_affinoid(std::move(out), p);
}

bool separates_affinoid(const BerkPoint& s, const Affinoid& a, const Int& p) {
    std::vector<BerkPoint> probes;
    probes.push_back(BerkPoint::type1(a.witness));
    for (const auto& b : a.balls) {
        for (const auto& q : ball_sample_points(b, p)) {
            if (affinoid_contains(a, q, p)) probes.push_back(BerkPoint::type1(q));
        }
    }
    // points of the region near s itself, when s sits inside every ball
    if (s.is_type2() && is_integer(s.t)) {
        bool inside = true;
        for (const auto& b : a.balls)
            if (!ball_contains_tree_point(b, s, p)) inside = false;
        if (inside) {
            long t = static_cast<long>(s.t.get_num().get_si());
            for (long r = 0; r < std::min<long>(p.get_si(), 6); ++r) {
                ProjPoint q = ProjPoint::finite(s.center + Rat(r) * pow_p(p, t) + pow_p(p, t + 1));
                if (affinoid_contains(a, q, p)) probes.push_back(BerkPoint::type1(q));
            }
            if (affinoid_contains(a, ProjPoint::infinity(), p))
                probes.push_back(BerkPoint::type1(ProjPoint::infinity()));
            ProjPoint far = ProjPoint::finite(s.center + pow_p(p, t - 1));
            if (affinoid_contains(a, far, p)) probes.push_back(BerkPoint::type1(far));
        }
    }
    return separates(s, probes, p);
}

Annulus make_annulus(const Rat& center, const Rat& t_in, const Rat& t_out, bool inverted) {
    if (!(t_in > t_out)) fail(ErrorCode::InvalidArgument, "annulus requires t_in > t_out");
    if (inverted && center == 0) return Annulus{Rat(0), -t_out, -t_in, false};
    return Annulus{center, t_in, t_out, inverted};
}

Annulus mobius_annulus_image(const Mobius& m, const Annulus& c0, const Int& p) {
    Annulus c = c0;
    if (c.inverted) {
        if (c.center != 0)
            fail(ErrorCode::InvalidArgument, "inverted annulus with nonzero center");
        c = Annulus{Rat(0), -c.t_out, -c.t_in, false};
    }
    for (const auto& step : m.generator_steps()) {
        switch (step.kind) {
            case Mobius::StepKind::Translate:
                c.center += step.value;
                break;
            case Mobius::StepKind::Scale: {
                ValExp v = vp(step.value, p);
                c.center *= step.value;
                c.t_in += v.v;
                c.t_out += v.v;
                break;
            }
            case Mobius::StepKind::Invert: {
                if (c.center == 0) {
                    c = Annulus{Rat(0), -c.t_out, -c.t_in, false};
                    break;
                }
                ValExp va = vp(c.center, p);
                if (va.v >= c.t_in) {
                    // 0 lies inside the inner disk: same region centered at 0
                    c = Annulus{Rat(0), -c.t_out, -c.t_in, false};
                } else if (va.v <= c.t_out) {
                    Rat shift = Rat(2) * va.v;
                    c = Annulus{Rat(1) / c.center, c.t_in - shift, c.t_out - shift, false};
                } else {
                    fail(ErrorCode::InvalidArgument,
                         "annulus wraps the pole of the coordinate change");
                }
                break;
            }
        }
    }
    return c;
}

HullTree convex_hull(const std::vector<BerkPoint>& generators, const Int& p) {
    if (generators.size() < 2)
        fail(ErrorCode::InvalidArgument, "convex hull needs at least two generators");
    std::vector<BerkPoint> verts;
    auto add = [&](const BerkPoint& q) {
        for (const auto& v : verts)
            if (v == q) return;
        verts.push_back(q);
    };
    for (const auto& g : generators) add(g);
    size_t ngen = verts.size();
    if (ngen < 2) fail(ErrorCode::EqualPoints, "generators coincide");
    for (size_t i = 0; i < ngen; ++i)
        for (size_t j = i + 1; j < ngen; ++j)
            for (size_t k = j + 1; k < ngen; ++k)
                add(median(verts[i], verts[j], verts[k], p));

    HullTree tree;
    tree.vertices = verts;
    for (size_t i = 0; i < ngen; ++i) tree.generator_index.push_back(i);
    for (size_t i = 0; i < verts.size(); ++i) {
        for (size_t j = i + 1; j < verts.size(); ++j) {
            bool adjacent = true;
            for (size_t k = 0; k < verts.size() && adjacent; ++k) {
                if (k == i || k == j) continue;
                if (!verts[k].is_type2()) continue;
                if (between(verts[k], verts[i], verts[j], p)) adjacent = false;
            }
            if (!adjacent) continue;
            std::optional<Rat> len;
            if (verts[i].is_type2() && verts[j].is_type2())
                len = hyperbolic_distance(verts[i], verts[j], p);
            tree.edges.push_back(HullTree::Edge{i, j, len});
        }
    }
    if (tree.edges.size() + 1 != tree.vertices.size())
        fail(ErrorCode::Internal, "hull adjacency did not produce a tree");
    return tree;
}

} // namespace berkdyn
