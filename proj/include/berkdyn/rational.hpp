#pragma once

#include <gmpxx.h>
#include <optional>
#include <string>

#include "berkdyn/errors.hpp"

namespace berkdyn {

using Int = mpz_class;
using Rat = mpq_class;

/// Exponent value in Q ∪ {+∞}. Used for p-adic valuations of rationals
/// (always integral or infinite) and for Gauss-norm exponents on disks of
/// radius p^{-t} with t rational: |x| = p^{-exponent}.
struct ValExp {
    bool inf = false;
    Rat v = 0;

    static ValExp infinity() { return ValExp{true, 0}; }
    static ValExp of(const Rat& x) { return ValExp{false, x}; }

    bool is_finite() const { return !inf; }

    ValExp operator+(const ValExp& o) const {
        if (inf || o.inf) return infinity();
        return of(v + o.v);
    }
    ValExp operator-() const {
        if (inf) fail(ErrorCode::InvalidArgument, "negating infinite exponent");
        return of(-v);
    }
    friend ValExp min(const ValExp& a, const ValExp& b) {
        if (a.inf) return b;
        if (b.inf) return a;
        return of(a.v < b.v ? a.v : b.v);
    }
    friend ValExp max(const ValExp& a, const ValExp& b) {
        if (a.inf || b.inf) return infinity();
        return of(a.v > b.v ? a.v : b.v);
    }
    bool operator==(const ValExp& o) const {
        if (inf != o.inf) return false;
        return inf || v == o.v;
    }
    bool operator!=(const ValExp& o) const { return !(*this == o); }
    bool operator<(const ValExp& o) const {
        if (inf) return false;
        if (o.inf) return true;
        return v < o.v;
    }
    bool operator<=(const ValExp& o) const { return *this < o || *this == o; }
    bool operator>(const ValExp& o) const { return o < *this; }
    bool operator>=(const ValExp& o) const { return o <= *this; }
};

/// p-adic valuation of a nonzero integer.
inline long vp_int(const Int& n, const Int& p) {
    if (n == 0) fail(ErrorCode::InvalidArgument, "vp_int of zero");
    Int tmp;
    return static_cast<long>(mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

/// p-adic valuation of a rational; vp(0) = +∞.
inline ValExp vp(const Rat& x, const Int& p) {
    if (x == 0) return ValExp::infinity();
    long vn = (x.get_num() == 0) ? 0 : vp_int(x.get_num(), p);
    long vd = (x.get_den() == 1) ? 0 : vp_int(x.get_den(), p);
    return ValExp::of(Rat(vn - vd));
}

/// p^e for integral e (possibly negative), as an exact rational.
inline Rat pow_p(const Int& p, long e) {
    Int num = 1, den = 1;
    if (e >= 0)
        mpz_pow_ui(num.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
    else
        mpz_pow_ui(den.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(-e));
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& x) { return x.get_den() == 1; }

/// Floor/ceil of a rational as plain long (desk-scale exponents).
inline long floor_long(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return static_cast<long>(q.get_si());
}
inline long ceil_long(const Rat& x) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return static_cast<long>(q.get_si());
}

/// Modular inverse of a mod m (m > 1, gcd(a, m) = 1).
inline Int inv_mod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        fail(ErrorCode::NonUnit, "not invertible modulo " + m.get_str());
    return r;
}

/// Truncation of a rational to its p-adic digits below level u: the unique
/// rational of the form m·p^{vp(a)} with 0 <= m < p^{u - vp(a)} congruent to
/// a modulo p^u. Requires nothing of a except a != 0 handling; trunc(0) = 0.
/// Used to canonicalize disk centers: vp(a - trunc(a,u)) >= u.
inline Rat trunc_padic(const Rat& a, long u, const Int& p) {
    if (a == 0) return Rat(0);
    ValExp va = vp(a, p);
    long v = static_cast<long>(va.v.get_num().get_si());
    if (v >= u) return Rat(0);
    long digits = u - v;
    Int pN;
    mpz_pow_ui(pN.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(digits));
    // a = p^v * num'/den' with num', den' units; unit value mod p^digits
    Rat unit = a / pow_p(p, v);
    Int num = unit.get_num() % pN;
    if (num < 0) num += pN;
    Int deninv = inv_mod(unit.get_den() % pN, pN);
    Int m = (num * deninv) % pN;
    return Rat(m) * pow_p(p, v);
}

std::string rat_to_string(const Rat& x);
std::optional<Rat> rat_from_string(const std::string& s);

} // namespace berkdyn
