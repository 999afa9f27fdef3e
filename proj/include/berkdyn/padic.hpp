#pragma once

#include <vector>

#include "berkdyn/rational.hpp"

namespace berkdyn {

/// Exact rational carrying its p-adic valuation. |x| = p^{-valuation}.
class PadicScalar {
public:
    PadicScalar(Rat value, Int prime)
        : value_(std::move(value)), prime_(std::move(prime)), valuation_(vp(value_, prime_)) {}

    const Rat& value() const { return value_; }
    const Int& prime() const { return prime_; }
    const ValExp& valuation() const { return valuation_; }
    bool is_zero() const { return value_ == 0; }

    PadicScalar operator+(const PadicScalar& o) const { return {value_ + o.value_, prime_}; }
    PadicScalar operator-(const PadicScalar& o) const { return {value_ - o.value_, prime_}; }
    PadicScalar operator*(const PadicScalar& o) const { return {value_ * o.value_, prime_}; }
    PadicScalar operator/(const PadicScalar& o) const {
        if (o.value_ == 0) fail(ErrorCode::InvalidArgument, "division by zero");
        return {value_ / o.value_, prime_};
    }
    bool operator==(const PadicScalar& o) const { return value_ == o.value_ && prime_ == o.prime_; }

private:
    Rat value_;
    Int prime_;
    ValExp valuation_;
};

/// Finite-precision p-adic number: value = p^val · unit with the unit known
/// modulo p^prec. Every operation reports the precision it can still
/// guarantee; results that would fall below half the default working
/// precision raise PrecisionExhausted instead of degrading silently.
class ApproxPadic {
public:
    static constexpr int kDefaultPrecision = 64;

    /// Exact conversion from a rational at the given working precision.
    static ApproxPadic from_rational(const Rat& x, const Int& p, int precision = kDefaultPrecision);

    /// An "approximately zero" value: indistinguishable from 0 below p^{abs_prec}.
    static ApproxPadic zero(const Int& p, long abs_prec, int precision = kDefaultPrecision);

    const Int& prime() const { return prime_; }
    bool is_zero() const { return zero_; }
    long valuation() const;                // exact valuation; fails on zero()
    ValExp valuation_lower_bound() const;  // >= this, always available
    int precision() const { return prec_; }
    const Int& unit() const { return unit_; }

    ApproxPadic operator+(const ApproxPadic& o) const;
    ApproxPadic operator-(const ApproxPadic& o) const;
    ApproxPadic operator*(const ApproxPadic& o) const;
    ApproxPadic operator/(const ApproxPadic& o) const;
    ApproxPadic negate() const;

    /// Agreement check modulo p^k (both values reduced at absolute level k).
    bool congruent(const ApproxPadic& o, long k) const;

private:
    ApproxPadic(Int p, long val, Int unit, int prec, bool zero)
        : prime_(std::move(p)), val_(val), unit_(std::move(unit)), prec_(prec), zero_(zero) {}

    Int pow_prec(int n) const;
    void check_precision() const;

    Int prime_;
    long val_ = 0;   // for zero_: absolute level below which the value vanishes
    Int unit_;       // in [0, p^prec), vp(unit) = 0 unless zero_
    int prec_ = 0;
    bool zero_ = false;
};

/// Horner evaluation of a rational-coefficient polynomial at an ApproxPadic
/// point (coefficients converted exactly at the point's precision).
ApproxPadic eval_poly_approx(const std::vector<Rat>& coeffs, const ApproxPadic& x);

} // namespace berkdyn
