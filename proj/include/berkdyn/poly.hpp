#pragma once

#include <vector>

#include "berkdyn/rational.hpp"

namespace berkdyn {

/// Dense univariate polynomial over Q; coeffs[i] is the coefficient of z^i,
/// trailing coefficient nonzero (empty vector = zero polynomial).
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(const Rat& a) { return Poly(std::vector<Rat>{a}); }
    static Poly variable() { return Poly({Rat(0), Rat(1)}); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat coeff(size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }
    Rat lead() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rat& s) const;
    bool operator==(const Poly& o) const { return c_ == o.c_; }

    Rat eval(const Rat& x) const;
    Poly derivative() const;

    /// f(z + a): Taylor recentering by Horner.
    Poly shift(const Rat& a) const;
    /// f(s·z)
    Poly scale_arg(const Rat& s) const;
    /// z^n · f(1/z) for n >= degree: coefficient reversal at width n+1.
    Poly reverse(int n) const;

    /// Order of vanishing at 0 (index of lowest nonzero coefficient).
    int order_at_zero() const;

    std::pair<Poly, Poly> divrem(const Poly& d) const;
    friend Poly gcd(Poly a, Poly b);  // monic gcd over Q

    /// Exact composition f(g(z)); the resulting degree is capped.
    Poly compose(const Poly& g, long degree_cap = 100000) const;

    /// min_i (vp(c_i) + i t): exponent of the sup norm of |f| on the closed
    /// disk of radius p^{-t} centered at 0. Additive over products.
    Rat gauss_norm(const Rat& t, const Int& p) const;  // fails on zero poly
    ValExp gauss_norm_exp(const Rat& t, const Int& p) const;  // +inf for zero

    /// All rational roots with multiplicities. The flag reports whether the
    /// divisor search was exhaustive (small leading/constant coefficients).
    std::vector<std::pair<Rat, int>> rational_roots(bool* complete = nullptr) const;

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;
};

/// Truncated power series around 0 with a certified tail bound. `tail` is a
/// lower bound on min_{i >= K} (vp(c_i) + i·t) over all discarded terms, i.e.
/// the Gauss-norm exponent of the dropped tail on the disk {v(x) >= t}.
struct Jet {
    std::vector<Rat> c;  // coefficients 0..K-1
    int K = 0;
    Rat t = 0;           // disk radius exponent the bounds refer to
    ValExp tail = ValExp::infinity();
    Int p = 2;

    Rat coeff(size_t i) const { return i < c.size() ? c[i] : Rat(0); }
    /// Gauss exponent of the kept part (+inf if identically zero).
    ValExp kept_norm() const;
    /// Gauss exponent lower bound for the full series.
    ValExp full_norm_lower() const { return min(kept_norm(), tail); }
};

Jet jet_from_poly(const Poly& f, int K, const Rat& t, const Int& p);
Jet jet_add(const Jet& a, const Jet& b);
Jet jet_sub(const Jet& a, const Jet& b);
Jet jet_mul(const Jet& a, const Jet& b);
/// f(g(x)) for jets on the same disk; requires that g maps the disk into
/// itself (full_norm_lower(g) >= t), which makes the substitution of f's
/// discarded tail controllable.
Jet jet_compose(const Jet& f, const Jet& g);

} // namespace berkdyn
