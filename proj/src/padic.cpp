#include "berkdyn/padic.hpp"

#include <sstream>

namespace berkdyn {

std::string rat_to_string(const Rat& x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

std::optional<Rat> rat_from_string(const std::string& s) {
    if (s.empty()) return std::nullopt;
    try {
        Rat r;
        if (r.set_str(s, 10) != 0) return std::nullopt;
        if (r.get_den() == 0) return std::nullopt;
        r.canonicalize();
        return r;
    } catch (...) {
        return std::nullopt;
    }
}

Int ApproxPadic::pow_prec(int n) const {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), prime_.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

void ApproxPadic::check_precision() const {
    if (!zero_ && prec_ < kDefaultPrecision / 2)
        fail(ErrorCode::PrecisionExhausted,
             "guaranteed precision " + std::to_string(prec_) + " digits");
}

ApproxPadic ApproxPadic::from_rational(const Rat& x, const Int& p, int precision) {
    if (x == 0) return zero(p, precision, precision);
    ValExp v = vp(x, p);
    long val = static_cast<long>(v.v.get_num().get_si());
    Rat unit_rat = x / pow_p(p, val);
    Int pN;
    mpz_pow_ui(pN.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(precision));
    Int num = unit_rat.get_num() % pN;
    if (num < 0) num += pN;
    Int den = unit_rat.get_den() % pN;
    Int u = (num * inv_mod(den, pN)) % pN;
    return ApproxPadic(p, val, u, precision, false);
}

ApproxPadic ApproxPadic::zero(const Int& p, long abs_prec, int precision) {
    return ApproxPadic(p, abs_prec, Int(0), precision, true);
}

long ApproxPadic::valuation() const {
    if (zero_) fail(ErrorCode::InvalidArgument, "valuation of approximate zero is only bounded below");
    return val_;
}

ValExp ApproxPadic::valuation_lower_bound() const { return ValExp::of(Rat(val_)); }

ApproxPadic ApproxPadic::negate() const {
    if (zero_) return *this;
    Int pN = pow_prec(prec_);
    Int u = (pN - unit_) % pN;
    return ApproxPadic(prime_, val_, u, prec_, false);
}

ApproxPadic ApproxPadic::operator+(const ApproxPadic& o) const {
    if (prime_ != o.prime_) fail(ErrorCode::InvalidArgument, "mixed primes");
    if (zero_ && o.zero_) return zero(prime_, std::min(val_, o.val_), std::min(prec_, o.prec_));
    if (zero_) {
        // known only modulo p^{val_}: other value survives if it sits below
        long abs = val_;
        if (o.val_ >= abs) return zero(prime_, abs, o.prec_);
        int keep = static_cast<int>(std::min<long>(o.prec_, abs - o.val_));
        ApproxPadic r(prime_, o.val_, o.unit_ % pow_prec(keep), keep, false);
        r.check_precision();
        return r;
    }
    if (o.zero_) return o + *this;

    long v = std::min(val_, o.val_);
    long abs_limit = std::min(val_ + prec_, o.val_ + o.prec_);
    long digits = abs_limit - v;
    if (digits <= 0) return zero(prime_, abs_limit, std::min(prec_, o.prec_));
    Int pD;
    mpz_pow_ui(pD.get_mpz_t(), prime_.get_mpz_t(), static_cast<unsigned long>(digits));
    Int a = unit_, b = o.unit_;
    for (long i = 0; i < val_ - v; ++i) a *= prime_;
    for (long i = 0; i < o.val_ - v; ++i) b *= prime_;
    Int s = (a + b) % pD;
    if (s == 0) return zero(prime_, abs_limit, std::min(prec_, o.prec_));
    Int stripped;
    long k = static_cast<long>(mpz_remove(stripped.get_mpz_t(), s.get_mpz_t(), prime_.get_mpz_t()));
    long new_prec = digits - k;
    Int pP;
    mpz_pow_ui(pP.get_mpz_t(), prime_.get_mpz_t(), static_cast<unsigned long>(new_prec));
    ApproxPadic r(prime_, v + k, stripped % pP, static_cast<int>(new_prec), false);
    r.check_precision();
    return r;
}

ApproxPadic ApproxPadic::operator-(const ApproxPadic& o) const { return *this + o.negate(); }

ApproxPadic ApproxPadic::operator*(const ApproxPadic& o) const {
    if (prime_ != o.prime_) fail(ErrorCode::InvalidArgument, "mixed primes");
    if (zero_ || o.zero_) {
        // vp(product) >= val_zero + vp_lower(other)
        long lb = (zero_ ? val_ : val_) + (o.zero_ ? o.val_ : o.val_);
        return zero(prime_, lb, std::min(prec_, o.prec_));
    }
    int prec = std::min(prec_, o.prec_);
    Int pP = pow_prec(prec);
    Int u = (unit_ * o.unit_) % pP;
    return ApproxPadic(prime_, val_ + o.val_, u, prec, false);
}

ApproxPadic ApproxPadic::operator/(const ApproxPadic& o) const {
    if (prime_ != o.prime_) fail(ErrorCode::InvalidArgument, "mixed primes");
    if (o.zero_) fail(ErrorCode::InvalidArgument, "division by approximate zero");
    if (zero_) return zero(prime_, val_ - o.val_, std::min(prec_, o.prec_));
    int prec = std::min(prec_, o.prec_);
    Int pP = pow_prec(prec);
    Int u = (unit_ * inv_mod(o.unit_ % pP, pP)) % pP;
    return ApproxPadic(prime_, val_ - o.val_, u, prec, false);
}

bool ApproxPadic::congruent(const ApproxPadic& o, long k) const {
    ApproxPadic d = *this - o;
    if (d.zero_) return d.val_ >= k;
    return d.val_ >= k;
}

ApproxPadic eval_poly_approx(const std::vector<Rat>& coeffs, const ApproxPadic& x) {
    ApproxPadic acc = ApproxPadic::zero(x.prime(), x.precision() + 64, x.precision());
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * x + ApproxPadic::from_rational(*it, x.prime(), x.precision());
    }
    return acc;
}

} // namespace berkdyn
