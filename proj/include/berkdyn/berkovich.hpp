#pragma once

#include <optional>
#include <string>
#include <vector>

#include "berkdyn/ratmap.hpp"

namespace berkdyn {

/// Point of the hyperbolic space over Q-data. Type I is a point of P^1(Q);
/// TypeII(a, t) is the point of the closed disk D(a, p^{-t}) with rational
/// center and rational radius exponent. Centers are canonicalized (p-adic
/// truncation at level ceil(t)) so structural equality is point equality:
/// TypeII(a, t) = TypeII(a', t) iff vp(a - a') >= t. The Gauss point is
/// TypeII(0, 0).
struct BerkPoint {
    enum class Kind { TypeI, TypeII };
    Kind kind;
    ProjPoint pt;  // TypeI
    Rat center;    // TypeII
    Rat t;         // TypeII

    static BerkPoint type1(ProjPoint p) { return BerkPoint{Kind::TypeI, std::move(p), 0, 0}; }
    static BerkPoint type2(const Rat& a, const Rat& t, const Int& p);
    static BerkPoint gauss() { return BerkPoint{Kind::TypeII, {}, 0, 0}; }

    bool is_type2() const { return kind == Kind::TypeII; }
    bool operator==(const BerkPoint& o) const;
    std::string to_string() const;
};

/// Hyperbolic distance between type II points: with
/// t_meet = min(t, t', vp(a - a')), d = (t - t_meet) + (t' - t_meet).
Rat hyperbolic_distance(const BerkPoint& a, const BerkPoint& b, const Int& p);

/// Median (Steiner point) of three distinct points; the unique point lying on
/// all three pairwise geodesics. Type I points allowed.
BerkPoint median(const BerkPoint& x, const BerkPoint& y, const BerkPoint& z, const Int& p);

/// Join of two distinct points toward infinity: the highest point of the
/// geodesic (x, y), i.e. median(x, y, infinity).
BerkPoint join_towards_infinity(const BerkPoint& x, const BerkPoint& y, const Int& p);

/// True iff s0 and s1 lie in distinct components of H_p minus {s}; s type II.
bool between(const BerkPoint& s, const BerkPoint& s0, const BerkPoint& s1, const Int& p);

/// The unique point on [s0, s1] at distance d from s0 (s0 type II). s1 may be
/// type I (half-geodesic; any d >= 0).
BerkPoint geodesic_point(const BerkPoint& s0, const BerkPoint& s1, const Rat& d, const Int& p);

/// Residue direction at a type II point with integral exponent: the class of
/// the target in the chart z = a + p^t w, with `inf` denoting the complement
/// direction.
struct Residue {
    bool inf = false;
    long r = 0;
    bool operator==(const Residue& o) const { return inf == o.inf && (inf || r == o.r); }
    std::string to_string() const { return inf ? "inf" : std::to_string(r); }
};

struct Direction {
    BerkPoint base;  // type II, integral exponent
    Residue residue;
};

Direction direction_at(const BerkPoint& s, const BerkPoint& target, const Int& p);

/// True iff X meets at least two distinct directions at s.
bool separates(const BerkPoint& s, const std::vector<BerkPoint>& X, const Int& p);

/// Open ball of P^1 given by a boundary type II point and the residue of the
/// direction pointing into the ball.
struct OpenBall {
    BerkPoint boundary;  // type II, integral exponent
    Residue dir;
};

bool ball_contains_point(const OpenBall& b, const ProjPoint& x, const Int& p);
bool ball_contains_tree_point(const OpenBall& b, const BerkPoint& s, const Int& p);
/// Containment / overlap classification for a pair of open balls.
enum class BallRelation { Disjoint, Equal, FirstInsideSecond, SecondInsideFirst, UnionIsP1 };
BallRelation classify_balls(const OpenBall& a, const OpenBall& b, const Int& p);

/// Nonempty finite intersection of open balls, with a witness point.
struct Affinoid {
    std::vector<OpenBall> balls;
    ProjPoint witness;
};

/// Closed ball of P^1 as the complement of an open ball.
struct ClosedBallCompl {
    OpenBall complement_of;
};

Affinoid make_affinoid(std::vector<OpenBall> balls, const Int& p);  // finds a witness
bool affinoid_contains(const Affinoid& a, const ProjPoint& x, const Int& p);
std::vector<ClosedBallCompl> affinoid_complement(const Affinoid& a, const Int& p);
std::optional<Affinoid> affinoid_intersect(const Affinoid& a, const Affinoid& b, const Int& p);
Affinoid affinoid_union_if_overlapping(const Affinoid& a, const Affinoid& b, const Int& p);
bool separates_affinoid(const BerkPoint& s, const Affinoid& a, const Int& p);

/// Open annulus {t_out < v(z - center) < t_in}. With the inverted flag the
/// region lives in the 1/z chart: {t_out < v(1/z - center) < t_in}.
struct Annulus {
    Rat center;
    Rat t_in;   // inner (deep) exponent, larger
    Rat t_out;  // outer exponent, smaller
    bool inverted = false;

    Rat modulus() const { return t_in - t_out; }
};

Annulus make_annulus(const Rat& center, const Rat& t_in, const Rat& t_out, bool inverted = false);
/// Image of an annulus under a Mobius transformation (modulus is preserved).
Annulus mobius_annulus_image(const Mobius& m, const Annulus& c, const Int& p);

/// Finite subtree spanned by a generator set: vertices are the generators
/// plus all medians of triples; edges carry hyperbolic lengths (absent for
/// edges reaching a type I leaf).
struct HullTree {
    std::vector<BerkPoint> vertices;
    struct Edge {
        size_t a, b;
        std::optional<Rat> length;
    };
    std::vector<Edge> edges;
    std::vector<size_t> generator_index;
};

HullTree convex_hull(const std::vector<BerkPoint>& generators, const Int& p);

} // namespace berkdyn
