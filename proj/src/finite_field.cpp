#include "berkdyn/finite_field.hpp"

#include <algorithm>
#include <sstream>

namespace berkdyn {

namespace {

// Irreducibility of a monic polynomial over F_p by trial division with all
// monic polynomials of degree 1..deg/2. Fields here are tiny.
bool is_irreducible(const ResidueField& Fp, const std::vector<long>& monic_coeffs, int deg) {
    FFPoly f;
    for (long c : monic_coeffs) f.push_back(Fp.from_int(c));
    f.push_back(Fp.one());
    for (int d = 1; 2 * d <= deg; ++d) {
        long count = 1;
        for (int i = 0; i < d; ++i) count *= Fp.p();
        for (long idx = 0; idx < count; ++idx) {
            FFPoly g;
            long t = idx;
            for (int i = 0; i < d; ++i) {
                g.push_back(Fp.from_int(t % Fp.p()));
                t /= Fp.p();
            }
            g.push_back(Fp.one());
            auto [q, r] = ffpoly_divrem(Fp, f, g);
            if (ffpoly_deg(Fp, r) < 0) return false;
        }
    }
    return true;
}

} // namespace

ResidueField::ResidueField(long p, int k) : p_(p), k_(k) {
    if (p < 2 || k < 1) fail(ErrorCode::InvalidArgument, "bad field parameters");
    size_ = 1;
    for (int i = 0; i < k; ++i) {
        size_ *= p;
        if (size_ > kExhaustionBound)
            fail(ErrorCode::FieldTooLarge,
                 "p^k exceeds exhaustion bound " + std::to_string(kExhaustionBound));
    }
    if (k == 1) {
        irred_ = {0};  // modulus x (unused for k = 1)
        return;
    }
    ResidueField Fp(p, 1);
    long count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (long idx = 0; idx < count; ++idx) {
        std::vector<long> coeffs(k);
        long t = idx;
        for (int i = 0; i < k; ++i) {
            coeffs[i] = t % p;
            t /= p;
        }
        if (is_irreducible(Fp, coeffs, k)) {
            irred_ = coeffs;
            return;
        }
    }
    fail(ErrorCode::Internal, "no irreducible polynomial found");
}

ResidueField::Elem ResidueField::one() const {
    Elem e(k_, 0);
    e[0] = 1 % p_;
    return e;
}

ResidueField::Elem ResidueField::from_int(long n) const {
    Elem e(k_, 0);
    long r = n % p_;
    if (r < 0) r += p_;
    e[0] = r;
    return e;
}

bool ResidueField::is_zero(const Elem& a) const {
    return std::all_of(a.begin(), a.end(), [](long c) { return c == 0; });
}

bool ResidueField::eq(const Elem& a, const Elem& b) const { return a == b; }

ResidueField::Elem ResidueField::add(const Elem& a, const Elem& b) const {
    Elem r(k_);
    for (int i = 0; i < k_; ++i) r[i] = (a[i] + b[i]) % p_;
    return r;
}

ResidueField::Elem ResidueField::sub(const Elem& a, const Elem& b) const {
    Elem r(k_);
    for (int i = 0; i < k_; ++i) r[i] = (a[i] + p_ - b[i]) % p_;
    return r;
}

ResidueField::Elem ResidueField::neg(const Elem& a) const { return sub(zero(), a); }

ResidueField::Elem ResidueField::mul(const Elem& a, const Elem& b) const {
    // schoolbook product then reduction by the monic modulus
    std::vector<long> prod(2 * k_ - 1, 0);
    for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
    for (int d = 2 * k_ - 2; d >= k_; --d) {
        long c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        for (int i = 0; i < k_; ++i)
            prod[d - k_ + i] = (prod[d - k_ + i] - c * irred_[i] % p_ + static_cast<long>(p_) * p_) % p_;
    }
    Elem r(k_);
    for (int i = 0; i < k_; ++i) r[i] = prod[i];
    return r;
}

ResidueField::Elem ResidueField::inv(const Elem& a) const {
    if (is_zero(a)) fail(ErrorCode::InvalidArgument, "inverse of zero");
    // a^(q-2); fields are tiny
    return pow(a, Int(size_ - 2));
}

ResidueField::Elem ResidueField::pow(Elem a, Int e) const {
    if (e < 0) {
        a = inv(a);
        e = -e;
    }
    Elem r = one();
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::vector<ResidueField::Elem> ResidueField::elements() const {
    std::vector<Elem> out;
    out.reserve(static_cast<size_t>(size_));
    for (long idx = 0; idx < size_; ++idx) out.push_back(decode(idx));
    return out;
}

long ResidueField::encode(const Elem& a) const {
    long idx = 0;
    for (int i = k_ - 1; i >= 0; --i) idx = idx * p_ + a[i];
    return idx;
}

ResidueField::Elem ResidueField::decode(long idx) const {
    Elem e(k_);
    for (int i = 0; i < k_; ++i) {
        e[i] = idx % p_;
        idx /= p_;
    }
    return e;
}

std::string ResidueField::to_string(const Elem& a) const {
    if (k_ == 1) return std::to_string(a[0]);
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < k_; ++i) {
        if (i) os << ",";
        os << a[i];
    }
    os << "]";
    return os.str();
}

bool ffproj_eq(const ResidueField& F, const FFProj& a, const FFProj& b) {
    if (a.inf != b.inf) return false;
    return a.inf || F.eq(a.value, b.value);
}

std::string ffproj_to_string(const ResidueField& F, const FFProj& a) {
    return a.inf ? "inf" : F.to_string(a.value);
}

FFPoly ffpoly_trim(const ResidueField& F, FFPoly f) {
    while (!f.empty() && F.is_zero(f.back())) f.pop_back();
    return f;
}

int ffpoly_deg(const ResidueField& F, const FFPoly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (!F.is_zero(f[static_cast<size_t>(i)])) return i;
    return -1;
}

FFPoly ffpoly_add(const ResidueField& F, const FFPoly& a, const FFPoly& b) {
    FFPoly r(std::max(a.size(), b.size()), F.zero());
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] = F.add(r[i], a[i]);
        if (i < b.size()) r[i] = F.add(r[i], b[i]);
    }
    return ffpoly_trim(F, r);
}

FFPoly ffpoly_sub(const ResidueField& F, const FFPoly& a, const FFPoly& b) {
    FFPoly nb = b;
    for (auto& c : nb) c = F.neg(c);
    return ffpoly_add(F, a, nb);
}

FFPoly ffpoly_mul(const ResidueField& F, const FFPoly& a, const FFPoly& b) {
    if (a.empty() || b.empty()) return {};
    FFPoly r(a.size() + b.size() - 1, F.zero());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    return ffpoly_trim(F, r);
}

FFPoly ffpoly_scale(const ResidueField& F, const FFPoly& a, const ResidueField::Elem& c) {
    FFPoly r = a;
    for (auto& x : r) x = F.mul(x, c);
    return ffpoly_trim(F, r);
}

std::pair<FFPoly, FFPoly> ffpoly_divrem(const ResidueField& F, FFPoly a, const FFPoly& b) {
    int db = ffpoly_deg(F, b);
    if (db < 0) fail(ErrorCode::InvalidArgument, "division by zero polynomial");
    auto lbinv = F.inv(b[static_cast<size_t>(db)]);
    a = ffpoly_trim(F, a);
    int da = ffpoly_deg(F, a);
    if (da < db) return {{}, a};
    FFPoly q(static_cast<size_t>(da - db + 1), F.zero());
    while (da >= db) {
        auto c = F.mul(a[static_cast<size_t>(da)], lbinv);
        q[static_cast<size_t>(da - db)] = c;
        for (int i = 0; i <= db; ++i) {
            a[static_cast<size_t>(da - db + i)] =
                F.sub(a[static_cast<size_t>(da - db + i)], F.mul(c, b[static_cast<size_t>(i)]));
        }
        a = ffpoly_trim(F, a);
        da = ffpoly_deg(F, a);
    }
    return {ffpoly_trim(F, q), a};
}

FFPoly ffpoly_gcd(const ResidueField& F, FFPoly a, FFPoly b) {
    a = ffpoly_trim(F, a);
    b = ffpoly_trim(F, b);
    while (ffpoly_deg(F, b) >= 0) {
        auto [q, r] = ffpoly_divrem(F, a, b);
        a = b;
        b = r;
    }
    int d = ffpoly_deg(F, a);
    if (d >= 0) a = ffpoly_scale(F, a, F.inv(a[static_cast<size_t>(d)]));
    return a;
}

FFPoly ffpoly_derivative(const ResidueField& F, const FFPoly& f) {
    if (f.size() <= 1) return {};
    FFPoly r(f.size() - 1, F.zero());
    for (size_t i = 1; i < f.size(); ++i) {
        auto c = F.mul(f[i], F.from_int(static_cast<long>(i)));
        r[i - 1] = c;
    }
    return ffpoly_trim(F, r);
}

ResidueField::Elem ffpoly_eval(const ResidueField& F, const FFPoly& f, const ResidueField::Elem& x) {
    auto acc = F.zero();
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = F.add(F.mul(acc, x), *it);
    return acc;
}

FFPoly ffpoly_shift(const ResidueField& F, const FFPoly& f, const ResidueField::Elem& a) {
    // Horner: f(x + a) accumulated as polynomials in x
    FFPoly acc;
    FFPoly xa = {a, F.one()};
    for (auto it = f.rbegin(); it != f.rend(); ++it) {
        acc = ffpoly_mul(F, acc, xa);
        acc = ffpoly_add(F, acc, FFPoly{*it});
    }
    return acc;
}

std::vector<std::pair<ResidueField::Elem, int>> ff_roots(const ResidueField& F, const FFPoly& f0) {
    FFPoly f = ffpoly_trim(F, f0);
    if (f.empty()) fail(ErrorCode::ZeroPolynomial, "roots of the zero polynomial");
    std::vector<std::pair<ResidueField::Elem, int>> out;
    for (const auto& x : F.elements()) {
        if (!F.is_zero(ffpoly_eval(F, f, x))) continue;
        int mult = 0;
        FFPoly g = f;
        FFPoly lin = {F.neg(x), F.one()};
        while (true) {
            auto [q, r] = ffpoly_divrem(F, g, lin);
            if (ffpoly_deg(F, r) >= 0) break;
            g = q;
            ++mult;
            if (ffpoly_deg(F, g) < 0) break;
        }
        out.emplace_back(x, mult);
    }
    return out;
}

FFRatMap ffmap_normalize(const ResidueField& F, FFPoly num, FFPoly den) {
    num = ffpoly_trim(F, num);
    den = ffpoly_trim(F, den);
    if (num.empty() && den.empty()) fail(ErrorCode::InvalidArgument, "0/0 map");
    FFPoly g = ffpoly_gcd(F, num, den);
    if (ffpoly_deg(F, g) > 0) {
        num = ffpoly_divrem(F, num, g).first;
        den = ffpoly_divrem(F, den, g).first;
    }
    // scale so the denominator (or numerator if den == 0) is monic
    int dd = ffpoly_deg(F, den);
    if (dd >= 0) {
        auto c = F.inv(den[static_cast<size_t>(dd)]);
        num = ffpoly_scale(F, num, c);
        den = ffpoly_scale(F, den, c);
    } else {
        int dn = ffpoly_deg(F, num);
        auto c = F.inv(num[static_cast<size_t>(dn)]);
        num = ffpoly_scale(F, num, c);
    }
    return FFRatMap{num, den};
}

int ffmap_deg(const ResidueField& F, const FFRatMap& m) {
    return std::max(ffpoly_deg(F, m.num), ffpoly_deg(F, m.den));
}

bool ffmap_is_constant(const ResidueField& F, const FFRatMap& m) {
    return ffpoly_deg(F, m.num) <= 0 && ffpoly_deg(F, m.den) <= 0;
}

FFProj ffmap_eval(const ResidueField& F, const FFRatMap& m, const FFProj& x) {
    int d = ffmap_deg(F, m);
    // homogeneous evaluation to handle infinity and poles uniformly
    auto hom = [&](const FFPoly& f, const FFProj& pt) {
        // f*(X, Y) = Y^d f(X/Y) evaluated at (x, 1) or (1, 0)
        auto acc = F.zero();
        if (pt.inf) {
            if (ffpoly_deg(F, f) == d && d >= 0) acc = f[static_cast<size_t>(d)];
            return acc;
        }
        return ffpoly_eval(F, f, pt.value);
    };
    auto n = hom(m.num, x);
    auto de = hom(m.den, x);
    if (F.is_zero(de)) {
        // n = de = 0 is impossible in lowest terms (finite x) and at infinity
        // one of the two attains the max degree
        if (F.is_zero(n)) fail(ErrorCode::Internal, "indeterminate evaluation of reduced map");
        return FFProj::infinity();
    }
    return FFProj::finite(F.mul(n, F.inv(de)));
}

int ffmap_local_degree(const ResidueField& F, const FFRatMap& m, const FFProj& x) {
    // move x to 0 and the image to 0, then count vanishing order of the numerator
    FFPoly num = m.num, den = m.den;
    if (x.inf) {
        // substitute 1/x: reverse coefficients at common degree
        int d = std::max(ffpoly_deg(F, num), ffpoly_deg(F, den));
        FFPoly rn(static_cast<size_t>(d + 1), F.zero()), rd(static_cast<size_t>(d + 1), F.zero());
        for (int i = 0; i <= ffpoly_deg(F, num); ++i) rn[static_cast<size_t>(d - i)] = num[static_cast<size_t>(i)];
        for (int i = 0; i <= ffpoly_deg(F, den); ++i) rd[static_cast<size_t>(d - i)] = den[static_cast<size_t>(i)];
        num = ffpoly_trim(F, rn);
        den = ffpoly_trim(F, rd);
    } else if (!F.is_zero(x.value)) {
        num = ffpoly_shift(F, num, x.value);
        den = ffpoly_shift(F, den, x.value);
    }
    // strip any common factor x^s introduced by the chart move
    size_t s = 0;
    while (s < num.size() && s < den.size() && F.is_zero(num[s]) && F.is_zero(den[s])) ++s;
    if (s > 0) {
        num.erase(num.begin(), num.begin() + static_cast<long>(s));
        den.erase(den.begin(), den.begin() + static_cast<long>(s));
    }
    auto n0 = num.empty() ? F.zero() : num[0];
    auto d0 = den.empty() ? F.zero() : den[0];
    if (F.is_zero(d0)) {
        // image is infinity: local degree = vanishing order of the denominator
        int ord = 0;
        for (const auto& c : den) {
            if (!F.is_zero(c)) break;
            ++ord;
        }
        return ord;
    }
    auto v0 = F.mul(n0, F.inv(d0));
    // numerator of m - v0 after the chart move
    FFPoly diff = ffpoly_sub(F, num, ffpoly_scale(F, den, v0));
    int ord = 0;
    for (const auto& c : diff) {
        if (!F.is_zero(c)) break;
        ++ord;
    }
    if (ord == 0 || static_cast<size_t>(ord) > diff.size())
        fail(ErrorCode::Internal, "local degree computation failed");
    return ord;
}

std::string ffmap_to_string(const ResidueField& F, const FFRatMap& m) {
    auto poly_str = [&](const FFPoly& f) {
        if (f.empty()) return std::string("0");
        std::ostringstream os;
        bool first = true;
        for (size_t i = 0; i < f.size(); ++i) {
            if (F.is_zero(f[i])) continue;
            if (!first) os << " + ";
            first = false;
            if (i == 0 || !(F.eq(f[i], F.one()))) os << F.to_string(f[i]);
            if (i == 0) continue;
            if (!F.eq(f[i], F.one())) os << "*";
            os << "z";
            if (i > 1) os << "^" << i;
        }
        if (first) return std::string("0");
        return os.str();
    };
    std::string n = poly_str(m.num);
    int dd = ffpoly_deg(F, m.den);
    if (dd == 0 && F.eq(m.den[0], F.one())) return n;
    return "(" + n + ")/(" + poly_str(m.den) + ")";
}

} // namespace berkdyn
