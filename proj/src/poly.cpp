#include "berkdyn/poly.hpp"

#include <algorithm>

namespace berkdyn {

Rat Poly::lead() const {
    if (c_.empty()) fail(ErrorCode::ZeroPolynomial, "leading coefficient of zero");
    return c_.back();
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
    std::vector<Rat> r = c_;
    for (auto& x : r) x = -x;
    return Poly(std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
    if (c_.empty() || o.c_.empty()) return Poly();
    std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Poly(std::move(r));
}

Poly Poly::operator*(const Rat& s) const {
    if (s == 0) return Poly();
    std::vector<Rat> r = c_;
    for (auto& x : r) x *= s;
    return Poly(std::move(r));
}

Rat Poly::eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Rat> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rat(static_cast<long>(i));
    return Poly(std::move(r));
}

Poly Poly::shift(const Rat& a) const {
    Poly acc;
    Poly za({a, Rat(1)});
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = acc * za + Poly::constant(*it);
    }
    return acc;
}

Poly Poly::scale_arg(const Rat& s) const {
    std::vector<Rat> r = c_;
    Rat pw(1);
    for (size_t i = 0; i < r.size(); ++i) {
        r[i] *= pw;
        pw *= s;
    }
    return Poly(std::move(r));
}

Poly Poly::reverse(int n) const {
    if (degree() > n) fail(ErrorCode::InvalidArgument, "reverse width below degree");
    std::vector<Rat> r(static_cast<size_t>(n) + 1, Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) r[static_cast<size_t>(n) - i] = c_[i];
    return Poly(std::move(r));
}

int Poly::order_at_zero() const {
    if (c_.empty()) fail(ErrorCode::ZeroPolynomial, "order of zero polynomial");
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) return static_cast<int>(i);
    return 0;
}

std::pair<Poly, Poly> Poly::divrem(const Poly& d) const {
    if (d.is_zero()) fail(ErrorCode::InvalidArgument, "division by zero polynomial");
    Poly r = *this;
    std::vector<Rat> q(r.c_.size() > d.c_.size() ? r.c_.size() - d.c_.size() + 1 : 1, Rat(0));
    Rat lead_inv = Rat(1) / d.lead();
    while (!r.is_zero() && r.degree() >= d.degree()) {
        int k = r.degree() - d.degree();
        Rat f = r.lead() * lead_inv;
        q[static_cast<size_t>(k)] += f;
        std::vector<Rat> sub(static_cast<size_t>(k), Rat(0));
        for (const auto& dc : d.c_) sub.push_back(dc * f);
        r = r - Poly(std::move(sub));
    }
    return {Poly(std::move(q)), r};
}

Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a.divrem(b).second;
        a = b;
        b = r;
    }
    if (!a.is_zero()) a = a * (Rat(1) / a.lead());
    return a;
}

Poly Poly::compose(const Poly& g, long degree_cap) const {
    if (is_zero()) return Poly();
    long dg = std::max(g.degree(), 0);
    long prod = static_cast<long>(std::max(degree(), 0)) * dg;
    if (prod > degree_cap)
        fail(ErrorCode::DegreeOverflow,
             "composition degree " + std::to_string(prod) + " exceeds cap " + std::to_string(degree_cap));
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = acc * g + Poly::constant(*it);
    }
    return acc;
}

Rat Poly::gauss_norm(const Rat& t, const Int& p) const {
    if (c_.empty()) fail(ErrorCode::ZeroPolynomial, "Gauss norm of zero polynomial");
    bool first = true;
    Rat best;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        Rat v = vp(c_[i], p).v + Rat(static_cast<long>(i)) * t;
        if (first || v < best) {
            best = v;
            first = false;
        }
    }
    return best;
}

ValExp Poly::gauss_norm_exp(const Rat& t, const Int& p) const {
    if (c_.empty()) return ValExp::infinity();
    return ValExp::of(gauss_norm(t, p));
}

namespace {

// divisors of |n| up to full factorization by trial division; gives up (and
// reports incompleteness) when a cofactor above the bound remains composite
std::vector<Int> divisors(Int n, bool* complete) {
    if (n < 0) n = -n;
    std::vector<std::pair<Int, int>> fac;
    Int d = 2;
    const Int bound = 1000000;
    while (n > 1 && d * d <= n && d <= bound) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            fac.emplace_back(d, e);
        }
        d += (d == 2) ? 1 : 2;
    }
    if (n > 1) {
        if (mpz_probab_prime_p(n.get_mpz_t(), 30) > 0) {
            fac.emplace_back(n, 1);
        } else {
            if (complete) *complete = false;
        }
    }
    std::vector<Int> out{Int(1)};
    for (auto& [q, e] : fac) {
        size_t sz = out.size();
        Int pw = 1;
        for (int i = 1; i <= e; ++i) {
            pw *= q;
            for (size_t j = 0; j < sz; ++j) out.push_back(out[j] * pw);
        }
    }
    return out;
}

} // namespace

std::vector<std::pair<Rat, int>> Poly::rational_roots(bool* complete) const {
    if (complete) *complete = true;
    if (c_.empty()) fail(ErrorCode::ZeroPolynomial, "roots of zero polynomial");
    std::vector<std::pair<Rat, int>> out;
    Poly f = *this;
    // roots at zero
    int m0 = f.order_at_zero();
    if (m0 > 0) {
        out.emplace_back(Rat(0), m0);
        std::vector<Rat> shifted(f.c_.begin() + m0, f.c_.end());
        f = Poly(std::move(shifted));
    }
    if (f.degree() < 1) return out;
    // clear denominators to a primitive integer polynomial
    Int den_lcm = 1;
    for (const auto& c : f.c_) {
        Int g;
        mpz_gcd(g.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
        den_lcm = den_lcm / g * c.get_den();
    }
    std::vector<Int> ic;
    for (const auto& c : f.c_) ic.push_back(Int(c * Rat(den_lcm)));
    Int content = 0;
    for (const auto& c : ic) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
    if (content > 1)
        for (auto& c : ic) c /= content;

    auto nds = divisors(ic.front(), complete);
    auto dds = divisors(ic.back(), complete);
    auto try_root = [&](const Rat& r) {
        int mult = 0;
        Poly g = f;
        Poly lin({-r, Rat(1)});
        while (!g.is_zero() && g.eval(r) == 0) {
            g = g.divrem(lin).first;
            ++mult;
        }
        if (mult > 0) out.emplace_back(r, mult);
    };
    for (const auto& nd : nds) {
        for (const auto& dd : dds) {
            Rat r(nd, dd);
            r.canonicalize();
            try_root(r);
            try_root(-r);
        }
    }
    // dedupe (a root can be hit through several divisor pairs)
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              out.end());
    return out;
}

ValExp Jet::kept_norm() const {
    ValExp best = ValExp::infinity();
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        best = min(best, ValExp::of(vp(c[i], p).v + Rat(static_cast<long>(i)) * t));
    }
    return best;
}

Jet jet_from_poly(const Poly& f, int K, const Rat& t, const Int& p) {
    Jet j;
    j.K = K;
    j.t = t;
    j.p = p;
    j.c.assign(static_cast<size_t>(K), Rat(0));
    ValExp tail = ValExp::infinity();
    const auto& cs = f.coeffs();
    for (size_t i = 0; i < cs.size(); ++i) {
        if (i < static_cast<size_t>(K)) {
            j.c[i] = cs[i];
        } else if (cs[i] != 0) {
            tail = min(tail, ValExp::of(vp(cs[i], p).v + Rat(static_cast<long>(i)) * t));
        }
    }
    j.tail = tail;
    return j;
}

static void check_compatible(const Jet& a, const Jet& b) {
    if (a.K != b.K || a.t != b.t || a.p != b.p)
        fail(ErrorCode::InvalidArgument, "jet parameter mismatch");
}

Jet jet_add(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    Jet r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
    r.tail = min(a.tail, b.tail);
    return r;
}

Jet jet_sub(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    Jet r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
    r.tail = min(a.tail, b.tail);
    return r;
}

Jet jet_mul(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    Jet r;
    r.K = a.K;
    r.t = a.t;
    r.p = a.p;
    r.c.assign(static_cast<size_t>(a.K), Rat(0));
    ValExp spill = ValExp::infinity();  // kept x kept products with index >= K
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) {
            if (b.c[j] == 0) continue;
            size_t k = i + j;
            if (k < static_cast<size_t>(r.K)) {
                r.c[k] += a.c[i] * b.c[j];
            } else {
                Rat v = vp(a.c[i], a.p).v + vp(b.c[j], b.p).v + Rat(static_cast<long>(k)) * a.t;
                spill = min(spill, ValExp::of(v));
            }
        }
    }
    ValExp ga = a.full_norm_lower();
    ValExp gb = b.full_norm_lower();
    r.tail = min(spill, min(a.tail + gb, ga + b.tail));
    return r;
}

Jet jet_compose(const Jet& f, const Jet& g) {
    check_compatible(f, g);
    if (!(g.full_norm_lower() >= ValExp::of(g.t)))
        fail(ErrorCode::JetTailDominates,
             "inner jet does not map the disk into itself; tail is uncontrollable");
    Jet acc;
    acc.K = f.K;
    acc.t = f.t;
    acc.p = f.p;
    acc.c.assign(static_cast<size_t>(f.K), Rat(0));
    acc.tail = ValExp::infinity();
    for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) {
        acc = jet_mul(acc, g);
        acc.c[0] += *it;
    }
    // f's own discarded terms, evaluated at |g| <= p^{-t}, stay below f.tail
    acc.tail = min(acc.tail, f.tail);
    return acc;
}

} // namespace berkdyn
