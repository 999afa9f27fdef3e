#pragma once

#include <optional>
#include <string>
#include <vector>

#include "berkdyn/padic.hpp"
#include "berkdyn/poly.hpp"

namespace berkdyn {

/// Point of the projective line over Q, canonicalized: finite x as [x : 1],
/// infinity as [1 : 0].
struct ProjPoint {
    Rat x = 0;
    bool infinite = false;

    static ProjPoint infinity() { return ProjPoint{Rat(0), true}; }
    static ProjPoint finite(Rat v) { return ProjPoint{std::move(v), false}; }
    static ProjPoint homogeneous(const Rat& a, const Rat& b);

    bool operator==(const ProjPoint& o) const {
        return infinite == o.infinite && (infinite || x == o.x);
    }
    std::string to_string() const;
};

/// 2x2 rational matrix with nonzero determinant acting on P^1.
class Mobius {
public:
    Mobius(Rat a, Rat b, Rat c, Rat d);
    static Mobius identity() { return Mobius(1, 0, 0, 1); }
    static Mobius translation(const Rat& c) { return Mobius(1, c, 0, 1); }
    static Mobius scaling(const Rat& s) { return Mobius(s, 0, 0, 1); }
    static Mobius inversion() { return Mobius(0, 1, 1, 0); }

    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    const Rat& c() const { return c_; }
    const Rat& d() const { return d_; }
    Rat det() const { return a_ * d_ - b_ * c_; }

    ProjPoint apply(const ProjPoint& p) const;
    Mobius compose(const Mobius& o) const;  // this ∘ o
    Mobius inverse() const;

    /// Decomposition into translation/scaling/inversion generators, applied
    /// left to right.
    enum class StepKind { Translate, Scale, Invert };
    struct Step {
        StepKind kind;
        Rat value;
    };
    std::vector<Step> generator_steps() const;

private:
    Rat a_, b_, c_, d_;
};

struct FixedPointRecord;  // defined below

/// Rational map P/Q over Q in coprime normalized form: gcd(P, Q) = 1 and the
/// minimum p-adic valuation over all coefficients of P and Q is 0. A fixed
/// canonical scaling makes render/parse round-trips exact.
class RatMap {
public:
    RatMap(Poly num, Poly den, Int prime);
    static RatMap from_mobius(const Mobius& m, const Int& p);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    const Int& prime() const { return p_; }
    int degree() const { return deg_; }

    ProjPoint eval(const ProjPoint& x) const;
    ProjPoint eval(const Rat& x) const { return eval(ProjPoint::finite(x)); }

    /// Derivative as a rational map (not normalized to the same scaling).
    RatMap derivative() const;
    /// Derivative value at a finite non-pole point.
    Rat derivative_at(const Rat& x) const;

    bool is_pole(const Rat& x) const { return den_.eval(x) == 0; }

    /// M^{-1} ∘ R ∘ M.
    RatMap conjugate(const Mobius& m) const;
    /// R ∘ S; exact, subject to the degree cap.
    RatMap compose_with(const RatMap& s, long degree_cap = 100000) const;
    /// R^n by repeated composition.
    RatMap iterate(int n, long degree_cap = 100000) const;

    bool operator==(const RatMap& o) const {
        return num_ == o.num_ && den_ == o.den_ && p_ == o.p_;
    }

private:
    Poly num_, den_;
    Int p_;
    int deg_;
};

/// deg_R(w): order of vanishing of R - R(w) at w after charts moving w and
/// R(w) to 0. Satisfies deg_{Q∘R}(w) = deg_Q(R(w)) · deg_R(w).
int local_degree(const RatMap& R, const ProjPoint& w);

/// Chordal distance |x y' - x' y| / (max{|x|,|y|} max{|x'|,|y'|}) as the
/// exponent e with distance p^{-e}; +inf for equal points.
ValExp chordal_distance_exp(const ProjPoint& a, const ProjPoint& b, const Int& p);

struct FixedPointRecord {
    ProjPoint point;
    int period = 1;
    PadicScalar multiplier;
    enum class Class { Attracting, Indifferent, Repelling } cls;
    bool exact = true;
    int hensel_precision = 0;  // meaningful when !exact
    std::string class_name() const {
        switch (cls) {
            case Class::Attracting: return "attracting";
            case Class::Indifferent: return "indifferent";
            case Class::Repelling: return "repelling";
        }
        return "?";
    }
};

FixedPointRecord::Class classify_multiplier(const PadicScalar& lambda);

/// Multiplier of a verified cycle, with the chain rule along the cycle and a
/// chart change when the cycle passes through infinity.
FixedPointRecord multiplier(const RatMap& R, const std::vector<ProjPoint>& cycle);

struct CriticalDivisor {
    Poly finite;          // Wronskian P'Q - PQ'; roots = finite critical points
    int multiplicity_at_infinity = 0;
    int total() const { return std::max(finite.degree(), 0) + multiplicity_at_infinity; }
};

/// Critical points with multiplicity; total is 2 deg(R) - 2.
CriticalDivisor critical_divisor(const RatMap& R);

/// Jet of R around the finite point a on the disk {v(x - a) >= t}; requires
/// Q(a + x) to have no zeros on the closed disk so the inverse series has a
/// certified geometric tail.
Jet ratmap_jet(const RatMap& R, const Rat& a, const Rat& t, int K);

} // namespace berkdyn
