#include "berkdyn/ratmap.hpp"

#include <sstream>

namespace berkdyn {

ProjPoint ProjPoint::homogeneous(const Rat& a, const Rat& b) {
    if (b == 0) {
        if (a == 0) fail(ErrorCode::InvalidArgument, "[0 : 0] is not a projective point");
        return infinity();
    }
    return finite(a / b);
}

std::string ProjPoint::to_string() const {
    return infinite ? "inf" : rat_to_string(x);
}

Mobius::Mobius(Rat a, Rat b, Rat c, Rat d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (det() == 0) fail(ErrorCode::InvalidArgument, "singular Mobius matrix");
}

ProjPoint Mobius::apply(const ProjPoint& p) const {
    Rat X = p.infinite ? Rat(1) : p.x;
    Rat Y = p.infinite ? Rat(0) : Rat(1);
    return ProjPoint::homogeneous(a_ * X + b_ * Y, c_ * X + d_ * Y);
}

Mobius Mobius::compose(const Mobius& o) const {
    return Mobius(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_,
                  c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_);
}

Mobius Mobius::inverse() const { return Mobius(d_, -b_, -c_, a_); }

std::vector<Mobius::Step> Mobius::generator_steps() const {
    std::vector<Step> steps;
    if (c_ == 0) {
        steps.push_back({StepKind::Scale, a_ / d_});
        if (b_ != 0) steps.push_back({StepKind::Translate, b_ / d_});
        return steps;
    }
    // (az+b)/(cz+d) = a/c + (b - ad/c) / (cz + d)
    steps.push_back({StepKind::Scale, c_});
    if (d_ != 0) steps.push_back({StepKind::Translate, d_});
    steps.push_back({StepKind::Invert, Rat(0)});
    steps.push_back({StepKind::Scale, b_ - a_ * d_ / c_});
    if (a_ != 0) steps.push_back({StepKind::Translate, a_ / c_});
    return steps;
}

namespace {

// substitute the pair (A, B) for (z, 1) into f homogenized at degree d
Poly homogeneous_substitute(const Poly& f, int d, const Poly& A, const Poly& B) {
    Poly acc;
    std::vector<Poly> apow(static_cast<size_t>(d) + 1), bpow(static_cast<size_t>(d) + 1);
    apow[0] = Poly::constant(1);
    bpow[0] = Poly::constant(1);
    for (int i = 1; i <= d; ++i) {
        apow[static_cast<size_t>(i)] = apow[static_cast<size_t>(i - 1)] * A;
        bpow[static_cast<size_t>(i)] = bpow[static_cast<size_t>(i - 1)] * B;
    }
    for (int i = 0; i <= f.degree(); ++i) {
        Rat c = f.coeff(static_cast<size_t>(i));
        if (c == 0) continue;
        acc = acc + apow[static_cast<size_t>(i)] * bpow[static_cast<size_t>(d - i)] * c;
    }
    return acc;
}

} // namespace

RatMap::RatMap(Poly num, Poly den, Int prime) : num_(std::move(num)), den_(std::move(den)), p_(std::move(prime)) {
    if (den_.is_zero() && num_.is_zero())
        fail(ErrorCode::InvalidArgument, "0/0 is not a map");
    if (den_.is_zero()) fail(ErrorCode::InvalidArgument, "zero denominator");
    Poly g = gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = num_.divrem(g).first;
        den_ = den_.divrem(g).first;
    }
    deg_ = std::max(num_.degree(), den_.degree());
    if (deg_ < 0) fail(ErrorCode::InvalidArgument, "empty map");
    // scale so min vp over all coefficients is 0
    bool first = true;
    Rat minv;
    for (const auto& c : num_.coeffs()) {
        if (c == 0) continue;
        Rat v = vp(c, p_).v;
        if (first || v < minv) { minv = v; first = false; }
    }
    for (const auto& c : den_.coeffs()) {
        if (c == 0) continue;
        Rat v = vp(c, p_).v;
        if (first || v < minv) { minv = v; first = false; }
    }
    Rat scale = pow_p(p_, -static_cast<long>(minv.get_num().get_si()));
    num_ = num_ * scale;
    den_ = den_ * scale;
    // canonical scaling: the lowest nonzero denominator coefficient becomes a
    // pure power of p (render/parse round-trips are then exact)
    Rat c0;
    bool found = false;
    for (const auto& c : den_.coeffs()) {
        if (c != 0) { c0 = c; found = true; break; }
    }
    if (!found) {
        for (const auto& c : num_.coeffs())
            if (c != 0) { c0 = c; found = true; break; }
    }
    long v0 = static_cast<long>(vp(c0, p_).v.get_num().get_si());
    Rat unit = c0 / pow_p(p_, v0);
    num_ = num_ * (Rat(1) / unit);
    den_ = den_ * (Rat(1) / unit);
}

RatMap RatMap::from_mobius(const Mobius& m, const Int& p) {
    return RatMap(Poly({m.b(), m.a()}), Poly({m.d(), m.c()}), p);
}

ProjPoint RatMap::eval(const ProjPoint& x) const {
    if (!x.infinite) {
        Rat pn = num_.eval(x.x);
        Rat pd = den_.eval(x.x);
        return ProjPoint::homogeneous(pn, pd);
    }
    Rat a = (num_.degree() == deg_) ? num_.lead() : Rat(0);
    Rat b = (den_.degree() == deg_) ? den_.lead() : Rat(0);
    return ProjPoint::homogeneous(a, b);
}

RatMap RatMap::derivative() const {
    Poly w = num_.derivative() * den_ - num_ * den_.derivative();
    return RatMap(w, den_ * den_, p_);
}

Rat RatMap::derivative_at(const Rat& x) const {
    Rat q = den_.eval(x);
    if (q == 0) fail(ErrorCode::InvalidArgument, "derivative at a pole");
    Rat w = num_.derivative().eval(x) * q - num_.eval(x) * den_.derivative().eval(x);
    return w / (q * q);
}

RatMap RatMap::conjugate(const Mobius& m) const {
    // R ∘ M
    Poly A({m.b(), m.a()});
    Poly B({m.d(), m.c()});
    Poly rn = homogeneous_substitute(num_, deg_, A, B);
    Poly rd = homogeneous_substitute(den_, deg_, A, B);
    // M^{-1} ∘ (rn/rd)
    Mobius mi = m.inverse();
    Poly fn = rn * mi.a() + rd * mi.b();
    Poly fd = rn * mi.c() + rd * mi.d();
    RatMap out(fn, fd, p_);
    if (out.degree() != deg_) fail(ErrorCode::Internal, "conjugation changed the degree");
    return out;
}

RatMap RatMap::compose_with(const RatMap& s, long degree_cap) const {
    long prod = static_cast<long>(deg_) * s.deg_;
    if (prod > degree_cap)
        fail(ErrorCode::DegreeOverflow, "composition degree " + std::to_string(prod) +
                                            " exceeds cap " + std::to_string(degree_cap));
    Poly rn = homogeneous_substitute(num_, deg_, s.num_, s.den_);
    Poly rd = homogeneous_substitute(den_, deg_, s.num_, s.den_);
    return RatMap(rn, rd, p_);
}

RatMap RatMap::iterate(int n, long degree_cap) const {
    if (n < 1) fail(ErrorCode::InvalidArgument, "iterate count must be >= 1");
    RatMap acc = *this;
    for (int i = 1; i < n; ++i) acc = acc.compose_with(*this, degree_cap);
    return acc;
}

int local_degree(const RatMap& R, const ProjPoint& w) {
    RatMap S = R;
    ProjPoint w0 = w;
    if (w.infinite) {
        S = R.conjugate(Mobius::inversion());
        w0 = ProjPoint::finite(0);
    }
    Poly pn = S.num().shift(w0.x);
    Poly pd = S.den().shift(w0.x);
    if (pd.coeff(0) == 0) {
        // w is a pole: local degree is the vanishing order of the denominator
        return pd.order_at_zero();
    }
    Rat v = pn.coeff(0) / pd.coeff(0);
    Poly diff = pn - pd * v;
    if (diff.is_zero()) fail(ErrorCode::InvalidArgument, "local degree of a constant map");
    return diff.order_at_zero();
}

ValExp chordal_distance_exp(const ProjPoint& a, const ProjPoint& b, const Int& p) {
    Rat ax = a.infinite ? Rat(1) : a.x;
    Rat ay = a.infinite ? Rat(0) : Rat(1);
    Rat bx = b.infinite ? Rat(1) : b.x;
    Rat by = b.infinite ? Rat(0) : Rat(1);
    Rat cross = ax * by - bx * ay;
    if (cross == 0) return ValExp::infinity();
    ValExp num = vp(cross, p);
    ValExp da = min(vp(ax, p), vp(ay, p));
    ValExp db = min(vp(bx, p), vp(by, p));
    return ValExp::of(num.v - da.v - db.v);
}

FixedPointRecord::Class classify_multiplier(const PadicScalar& lambda) {
    const ValExp& v = lambda.valuation();
    if (v.inf || v.v > 0) return FixedPointRecord::Class::Attracting;
    if (v.v == 0) return FixedPointRecord::Class::Indifferent;
    return FixedPointRecord::Class::Repelling;
}

FixedPointRecord multiplier(const RatMap& R, const std::vector<ProjPoint>& cycle) {
    if (cycle.empty()) fail(ErrorCode::NotACycle, "empty cycle");
    size_t n = cycle.size();
    for (size_t i = 0; i < n; ++i) {
        if (!(R.eval(cycle[i]) == cycle[(i + 1) % n]))
            fail(ErrorCode::NotACycle, "R does not permute the listed points cyclically");
    }
    RatMap S = R;
    std::vector<Rat> pts;
    bool has_inf = false;
    for (const auto& c : cycle) has_inf |= c.infinite;
    if (has_inf) {
        // conjugate by w -> s + 1/w with s avoiding the cycle; the cycle then
        // avoids infinity (infinity itself maps to 0)
        Rat s(0);
        auto hits = [&](const Rat& cand) {
            for (const auto& c : cycle)
                if (!c.infinite && c.x == cand) return true;
            return false;
        };
        while (hits(s)) s += 1;
        Mobius m(s, 1, 1, 0);  // m(w) = (s w + 1) / w = s + 1/w
        S = R.conjugate(m);
        Mobius mi = m.inverse();
        for (const auto& c : cycle) {
            ProjPoint q = mi.apply(c);
            if (q.infinite) fail(ErrorCode::Internal, "chart change failed to clear infinity");
            pts.push_back(q.x);
        }
    } else {
        for (const auto& c : cycle) pts.push_back(c.x);
    }
    Rat lambda(1);
    for (const auto& x : pts) lambda *= S.derivative_at(x);
    FixedPointRecord rec{cycle.front(), static_cast<int>(n), PadicScalar(lambda, R.prime()),
                         FixedPointRecord::Class::Attracting, true, 0};
    rec.cls = classify_multiplier(rec.multiplier);
    return rec;
}

CriticalDivisor critical_divisor(const RatMap& R) {
    Poly w = R.num().derivative() * R.den() - R.num() * R.den().derivative();
    if (w.is_zero())
        fail(ErrorCode::InseparableWronskian, "Wronskian vanishes identically");
    CriticalDivisor out;
    out.finite = w;
    out.multiplicity_at_infinity = 2 * R.degree() - 2 - w.degree();
    if (out.multiplicity_at_infinity < 0)
        fail(ErrorCode::Internal, "critical multiplicity bookkeeping failed");
    return out;
}

Jet ratmap_jet(const RatMap& R, const Rat& a, const Rat& t, int K) {
    Poly pn = R.num().shift(a);
    Poly pd = R.den().shift(a);
    const Int& p = R.prime();
    Jet jn = jet_from_poly(pn, K, t, p);
    if (pd.degree() == 0) {
        Jet inv = jet_from_poly(Poly::constant(Rat(1) / pd.coeff(0)), K, t, p);
        return jet_mul(jn, inv);
    }
    // invert the denominator series; needs Q(a + x) zero-free on the closed disk
    Rat v0 = vp(pd.coeff(0), p).v;
    if (pd.coeff(0) == 0)
        fail(ErrorCode::InvalidArgument, "jet center is a pole");
    Rat mu;  // min over j >= 1 of vp(q_j) + j t - vp(q_0); must be > 0
    bool first = true;
    for (int j = 1; j <= pd.degree(); ++j) {
        Rat c = pd.coeff(static_cast<size_t>(j));
        if (c == 0) continue;
        Rat e = vp(c, p).v + Rat(j) * t - v0;
        if (first || e < mu) { mu = e; first = false; }
    }
    if (!first && mu <= 0)
        fail(ErrorCode::InvalidArgument, "denominator has a zero on the closed disk; jet undefined");
    std::vector<Rat> e(static_cast<size_t>(K), Rat(0));
    e[0] = Rat(1) / pd.coeff(0);
    for (int i = 1; i < K; ++i) {
        Rat s(0);
        for (int j = 1; j <= std::min(i, pd.degree()); ++j)
            s += pd.coeff(static_cast<size_t>(j)) * e[static_cast<size_t>(i - j)];
        e[static_cast<size_t>(i)] = -s * e[0];
    }
    Jet je;
    je.c = std::move(e);
    je.K = K;
    je.t = t;
    je.p = p;
    if (first) {
        je.tail = ValExp::infinity();
    } else {
        long m = pd.degree();
        long blocks = (K + m - 1) / m;  // ceil(K/m)
        je.tail = ValExp::of(-v0 + Rat(blocks) * mu);
    }
    return jet_mul(jn, je);
}

} // namespace berkdyn
