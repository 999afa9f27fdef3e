#include "berkdyn/action.hpp"

#include <algorithm>
#include <map>

namespace berkdyn {

namespace {

long rat_to_long(const Rat& r) {
    if (!is_integer(r)) fail(ErrorCode::NonIntegralExponent, "expected an integer, got " + rat_to_string(r));
    return static_cast<long>(r.get_num().get_si());
}

// (alpha R + beta)/(gamma R + delta): post-composition with a Mobius map.
RatMap postcompose_mobius(const Mobius& m, const RatMap& R) {
    Poly n = R.num() * m.a() + R.den() * m.b();
    Poly d = R.num() * m.c() + R.den() * m.d();
    return RatMap(n, d, R.prime());
}

// R(a + 1/x) as a rational map in x.
RatMap precompose_inverted_chart(const RatMap& R, const Rat& a) {
    RatMap mob(Poly({Rat(1), a}), Poly({Rat(0), Rat(1)}), R.prime());  // x -> a + 1/x
    return R.compose_with(mob);
}

long residue_of_unit(const Rat& u, const Int& p) {
    Int nm = u.get_num() % p;
    if (nm < 0) nm += p;
    Int dm = u.get_den() % p;
    Int r = (nm * inv_mod(dm, p)) % p;
    return r.get_si();
}

// inversion w -> 1/w acting on a type II point
BerkPoint invert_type2(const Rat& b, const Rat& u, const Int& p) {
    if (b == 0) return BerkPoint::type2(Rat(0), -u, p);
    ValExp vb = vp(b, p);
    if (vb.v >= u) return BerkPoint::type2(Rat(0), -u, p);
    return BerkPoint::type2(Rat(1) / b, u - Rat(2) * vb.v, p);
}

Rat gauss_diff_exp(const Poly& num_shift, const Poly& den_shift, const Rat& c, const Rat& t,
                   const Int& p) {
    Poly diff = num_shift - den_shift * c;
    if (diff.is_zero()) fail(ErrorCode::Internal, "map equals the constant being subtracted");
    return diff.gauss_norm(t, p) - den_shift.gauss_norm(t, p);
}

} // namespace

ZeroPoleCount count_zeros_poles(const RatMap& R, const Rat& a, const Rat& t) {
    NewtonPolygon zn(R.num().shift(a), R.prime());
    NewtonPolygon zd(R.den().shift(a), R.prime());
    return ZeroPoleCount{zn.count_ge(t), zd.count_ge(t)};
}

ZeroPoleCount count_zeros_poles_annulus(const RatMap& R, const Rat& a, const Rat& t_out,
                                        const Rat& t_in) {
    NewtonPolygon zn(R.num().shift(a), R.prime());
    NewtonPolygon zd(R.den().shift(a), R.prime());
    return ZeroPoleCount{zn.count_in_open_annulus(t_out, t_in), zd.count_in_open_annulus(t_out, t_in)};
}

BerkPoint seminorm_image(const RatMap& R, const BerkPoint& S) {
    if (!S.is_type2()) fail(ErrorCode::InvalidArgument, "tree action applies to type II points");
    const Int& p = R.prime();
    const Rat& a = S.center;
    const Rat& t = S.t;
    if (R.den().eval(a) == 0) {
        // center is a pole: push forward 1/R instead and invert the result
        RatMap T(R.den(), R.num(), p);
        BerkPoint img = seminorm_image(T, S);
        return invert_type2(img.center, img.t, p);
    }
    Poly pn = R.num().shift(a);
    Poly pd = R.den().shift(a);
    Rat b = pn.coeff(0) / pd.coeff(0);  // R(a)
    long pl = p.get_si();
    for (int iter = 0; iter < 100000; ++iter) {
        Rat e = gauss_diff_exp(pn, pd, b, t, p);
        // a rational center differs from any other rational by an integral
        // valuation, so a fractional exponent certifies b is inside the disk
        if (!is_integer(e)) return BerkPoint::type2(b, e, p);
        long el = rat_to_long(e);
        bool improved = false;
        for (long s = 1; s < pl; ++s) {
            Rat b2 = b + Rat(s) * pow_p(p, el);
            if (gauss_diff_exp(pn, pd, b2, t, p) > e) {
                b = b2;
                improved = true;
                break;
            }
        }
        if (!improved) return BerkPoint::type2(b, e, p);
    }
    fail(ErrorCode::Internal, "image center refinement did not terminate");
}

namespace {

struct ReductionResult {
    bool constant = false;
    long constant_value = 0;  // the nonzero residue constant, lifted to [1, p)
    FFRatMap map;
    int degree = 0;
};

// Reduce (num / p^gauss(num)) / (den / p^gauss(den)) modulo p and cancel the
// common factor. A unit-seminorm rational function reduces to a nonzero,
// non-infinite element of the residue function field, so the constant case
// is always a value in F_p^*.
ReductionResult reduce_unit_ratio(const ResidueField& F, const Poly& num, const Poly& den,
                                  const Int& p) {
    auto reduce_poly = [&](const Poly& f) {
        long g = rat_to_long(f.gauss_norm(Rat(0), p));
        Rat scale = pow_p(p, -g);
        FFPoly out;
        for (int i = 0; i <= f.degree(); ++i) {
            Rat c = f.coeff(static_cast<size_t>(i)) * scale;
            if (c == 0 || vp(c, p).v > 0) {
                out.push_back(F.zero());
            } else {
                out.push_back(F.from_int(residue_of_unit(c, p)));
            }
        }
        return ffpoly_trim(F, out);
    };
    FFRatMap m = ffmap_normalize(F, reduce_poly(num), reduce_poly(den));
    ReductionResult res;
    if (!ffmap_is_constant(F, m)) {
        res.map = m;
        res.degree = ffmap_deg(F, m);
        return res;
    }
    if (ffpoly_deg(F, m.den) != 0 || ffpoly_deg(F, m.num) != 0)
        fail(ErrorCode::Internal, "unit ratio reduced to zero or infinity");
    auto val = F.mul(m.num[0], F.inv(m.den[0]));
    if (F.is_zero(val)) fail(ErrorCode::Internal, "unit ratio reduced to zero");
    res.constant = true;
    res.constant_value = val[0];
    return res;
}

} // namespace

Pushforward pushforward_point(const RatMap& R, const BerkPoint& S) {
    if (!S.is_type2()) fail(ErrorCode::InvalidArgument, "tree action applies to type II points");
    if (!is_integer(S.t))
        fail(ErrorCode::NonIntegralExponent,
             "reduction charts need an integral exponent, got " + rat_to_string(S.t));
    const Int& p = R.prime();
    long t = rat_to_long(S.t);
    const Rat& a = S.center;

    // source chart z = a + p^t x
    Poly n1 = R.num().shift(a).scale_arg(pow_p(p, t));
    Poly d1 = R.den().shift(a).scale_arg(pow_p(p, t));
    bool inverted = false;
    if (d1.coeff(0) == 0) {
        std::swap(n1, d1);
        inverted = true;
    }
    auto field = std::make_shared<ResidueField>(p.get_si(), 1);
    Rat b = n1.coeff(0) / d1.coeff(0);
    for (int iter = 0; iter < 100000; ++iter) {
        Poly diff = n1 - d1 * b;
        if (diff.is_zero()) fail(ErrorCode::Internal, "constant map in pushforward");
        long u = rat_to_long(diff.gauss_norm(Rat(0), p) - d1.gauss_norm(Rat(0), p));
        ReductionResult red = reduce_unit_ratio(*field, diff, d1, p);
        if (red.constant) {
            b += Rat(red.constant_value) * pow_p(p, u);
            continue;
        }
        ReducedMap rm;
        rm.field = field;
        rm.map = red.map;
        rm.source_center = a;
        rm.source_exp = S.t;
        rm.target_inverted = inverted;
        if (!inverted) {
            BerkPoint image = BerkPoint::type2(b, Rat(u), p);
            rm.target_center = image.center;
            rm.target_exp = image.t;
            return Pushforward{image, red.degree, rm};
        }
        // computed data is for 1/R; transport image point and reduced map
        // through w -> 1/w
        BerkPoint img = invert_type2(b, Rat(u), p);
        ValExp vb = vp(b, p);
        FFRatMap composed;
        if (b == 0 || vb.v >= Rat(u)) {
            // image chart 1/w = p^{-u} (c + y)^{-1}-style: y' = 1/(c~ + y)
            Rat c = b * pow_p(p, -u);
            long cres = (c == 0 || vp(c, p).v > 0) ? 0 : residue_of_unit(c, p);
            FFPoly shifted = ffpoly_add(*field, red.map.num,
                                        ffpoly_scale(*field, red.map.den, field->from_int(cres)));
            composed = ffmap_normalize(*field, red.map.den, shifted);
        } else {
            // y' = -(unit residue of b)^{-2} y
            Rat bu = b * pow_p(p, -rat_to_long(vb.v));
            long ures = residue_of_unit(bu, p);
            auto sc = field->neg(field->inv(field->mul(field->from_int(ures), field->from_int(ures))));
            composed = ffmap_normalize(*field, ffpoly_scale(*field, red.map.num, sc), red.map.den);
        }
        rm.map = composed;
        rm.target_center = img.center;
        rm.target_exp = img.t;
        return Pushforward{img, red.degree, rm};
    }
    fail(ErrorCode::Internal, "pushforward center refinement did not terminate");
}

std::pair<Direction, int> pushforward_direction(const RatMap& R, const BerkPoint& S,
                                                const Direction& dir) {
    if (!(dir.base == S)) fail(ErrorCode::InvalidArgument, "direction is not based at the given point");
    Pushforward pf = pushforward_point(R, S);
    const ResidueField& F = *pf.reduced.field;
    FFProj xi = dir.residue.inf ? FFProj::infinity() : FFProj::finite(F.from_int(dir.residue.r));
    FFProj eta = ffmap_eval(F, pf.reduced.map, xi);
    int enddeg = ffmap_local_degree(F, pf.reduced.map, xi);
    Residue out = eta.inf ? Residue{true, 0} : Residue{false, eta.value[0]};
    return {Direction{pf.image, out}, enddeg};
}

namespace {

// number of solutions of R = c in the closed (or open) disk around a
int fiber_count_in_disk(const RatMap& R, const Rat& c, const Rat& a, const Rat& t, bool open) {
    Poly f = R.num().shift(a) - R.den().shift(a) * c;
    if (f.is_zero()) fail(ErrorCode::Internal, "constant fiber");
    NewtonPolygon np(f, R.prime());
    return open ? np.count_gt(t) : np.count_ge(t);
}

} // namespace

bool DiskImage::contains(const ProjPoint& w, const Int& p) const {
    if (kind == Kind::WholeSphere) return true;
    Rat u;
    if (!inverted) {
        if (w.infinite) return false;
        u = w.x;
    } else {
        if (w.infinite) {
            u = 0;
        } else if (w.x == pivot) {
            return false;  // u = infinity lies in no finite disk
        } else {
            u = Rat(1) / (w.x - pivot);
        }
    }
    ValExp v = vp(u - center, p);
    return open ? (v > ValExp::of(exponent)) : (v >= ValExp::of(exponent));
}

DiskImage disk_image(const RatMap& R, const BallSpec& ball) {
    const Int& p = R.prime();
    NewtonPolygon poles_np(R.den().shift(ball.center), p);
    int poles = ball.open ? poles_np.count_gt(ball.exponent) : poles_np.count_ge(ball.exponent);
    if (poles == 0) {
        BerkPoint img = seminorm_image(R, BerkPoint::type2(ball.center, ball.exponent, p));
        DiskImage out;
        out.kind = DiskImage::Kind::Ball;
        out.center = img.center;
        out.exponent = img.t;
        out.open = ball.open;
        out.inverted = false;
        out.weierstrass_degree =
            fiber_count_in_disk(R, img.center, ball.center, ball.exponent, ball.open);
        return out;
    }
    NewtonPolygon zeros_np(R.num().shift(ball.center), p);
    int zeros = ball.open ? zeros_np.count_gt(ball.exponent) : zeros_np.count_ge(ball.exponent);
    if (zeros == 0) {
        // no zeros: 1/R is pole-free on the ball; image is a ball in the 1/w chart
        RatMap T(R.den(), R.num(), p);
        DiskImage inner = disk_image(T, ball);
        inner.inverted = true;
        inner.pivot = 0;
        return inner;
    }
    // zeros and poles both inside: the image is the whole sphere unless a
    // single direction ball at the image point is omitted
    BerkPoint J = seminorm_image(R, BerkPoint::type2(ball.center, ball.exponent, p));
    if (!is_integer(J.t))
        fail(ErrorCode::UnsupportedRamification,
             "mixed zeros and poles with an irrational image boundary");
    long e0 = rat_to_long(J.t);
    long pl = p.get_si();
    for (long r = 0; r < pl; ++r) {
        Rat cdir = J.center + Rat(r) * pow_p(p, e0);
        bool omitted = true;
        for (long depth : {1L, 2L, 5L}) {
            if (fiber_count_in_disk(R, cdir + pow_p(p, e0 + depth), ball.center, ball.exponent,
                                    ball.open) > 0) {
                omitted = false;
                break;
            }
        }
        if (omitted && pl > 2 &&
            fiber_count_in_disk(R, cdir + Rat(2) * pow_p(p, e0 + 1), ball.center, ball.exponent,
                                ball.open) > 0)
            omitted = false;
        if (omitted) {
            DiskImage out;
            out.kind = DiskImage::Kind::Ball;
            out.inverted = true;
            out.pivot = cdir;
            // the image is the complement of {v(w - cdir) > e0}; in the chart
            // u = 1/(w - cdir) that is the closed disk {v(u) >= -e0}
            out.center = 0;
            out.exponent = Rat(-e0);
            out.open = ball.open;
            Rat generic = cdir + pow_p(p, e0);
            out.weierstrass_degree =
                fiber_count_in_disk(R, generic, ball.center, ball.exponent, ball.open);
            return out;
        }
    }
    DiskImage out;
    out.kind = DiskImage::Kind::WholeSphere;
    out.weierstrass_degree = R.degree();
    return out;
}

AnnulusImage annulus_image(const RatMap& R, const Annulus& C) {
    const Int& p = R.prime();
    if (C.inverted)
        fail(ErrorCode::InvalidArgument, "annulus must be given in the finite chart");
    Poly pn = R.num().shift(C.center);
    Poly pd = R.den().shift(C.center);
    NewtonPolygon npn(pn, p), npd(pd, p);
    int zc = npn.count_in_open_annulus(C.t_out, C.t_in);
    int pc = npd.count_in_open_annulus(C.t_out, C.t_in);
    if (zc != 0 || pc != 0)
        fail(ErrorCode::ZeroOrPoleInAnnulus,
             "annulus contains " + std::to_string(zc) + " zeros and " + std::to_string(pc) +
                 " poles");
    int kP = npn.count_ge(C.t_in);
    int kQ = npd.count_ge(C.t_in);
    int d = kP - kQ;
    Rat aP = vp(pn.coeff(static_cast<size_t>(kP)), p).v;
    Rat aQ = vp(pd.coeff(static_cast<size_t>(kQ)), p).v;
    AnnulusImage out;
    out.alpha = aP - aQ;
    out.d = d;
    if (d >= 1)
        out.image = make_annulus(Rat(0), out.alpha + Rat(d) * C.t_in, out.alpha + Rat(d) * C.t_out);
    return out;
}

ModulusGrowth modulus_growth(const RatMap& R, const Direction& end, const Annulus& C) {
    const Int& p = R.prime();
    const BerkPoint& S = end.base;
    if (!is_integer(S.t))
        fail(ErrorCode::NonIntegralExponent, "direction charts need integral exponents");
    auto [dir_img, end_degree] = pushforward_direction(R, S, end);

    long t = rat_to_long(S.t);
    RatMap G = R;
    Rat tau0;
    // normalize the source so the direction ball is {v(x) > tau0}
    if (!end.residue.inf) {
        Rat arho = S.center + Rat(end.residue.r) * pow_p(p, t);
        G = RatMap(R.num().shift(arho), R.den().shift(arho), p);
        tau0 = Rat(t);
    } else {
        G = precompose_inverted_chart(R, S.center);
        tau0 = Rat(-t);
    }
    // normalize the target so the image direction ball is {v(y) > tau0'}
    const BerkPoint& S2 = dir_img.base;
    long t2 = rat_to_long(S2.t);
    Rat tau0p;
    if (!dir_img.residue.inf) {
        Rat brho = S2.center + Rat(dir_img.residue.r) * pow_p(p, t2);
        G = postcompose_mobius(Mobius::translation(-brho), G);
        tau0p = Rat(t2);
    } else {
        G = postcompose_mobius(Mobius(0, 1, 1, -S2.center), G);  // w -> 1/(w - b)
        tau0p = Rat(-t2);
    }

    // bring C into the source chart coordinates
    Annulus Cx = C;
    if (!end.residue.inf) {
        if (Cx.inverted) fail(ErrorCode::InvalidArgument, "annulus chart mismatch");
        Rat arho = S.center + Rat(end.residue.r) * pow_p(p, t);
        Cx.center -= arho;
    } else {
        Cx = mobius_annulus_image(Mobius(0, 1, 1, -S.center), Cx, p);
    }
    if (Cx.center != 0) fail(ErrorCode::InvalidArgument, "annulus is not centered on the end");
    if (Cx.t_out != tau0)
        fail(ErrorCode::InvalidArgument, "annulus outer end does not match the direction");

    ModulusGrowth out;
    out.modulus_in = Cx.modulus();
    out.end_degree = end_degree;

    NewtonPolygon gn(G.num(), p), gd(G.den(), p);
    // collar: the largest zero/pole-free annulus (tau0, sigma) inside the ball
    Rat sigma;
    bool sigma_set = false;
    auto collar_update = [&](const Rat& v) {
        if (v > tau0 && (!sigma_set || v < sigma)) {
            sigma = v;
            sigma_set = true;
        }
    };
    for (const auto& v : gn.root_valuations()) collar_update(v);
    for (const auto& v : gd.root_valuations()) collar_update(v);
    out.collar_infinite = !sigma_set;
    if (sigma_set) out.collar_modulus = sigma - tau0;

    // a zero of G inside C makes the image swallow the whole direction ball
    if (gn.count_in_open_annulus(Cx.t_out, Cx.t_in) > 0) {
        out.engulfs = true;
        return out;
    }
    // the image level profile g(u) = gauss(num, u) - gauss(den, u) is
    // continuous and piecewise linear; C' reaches from tau0' to its maximum
    auto profile = [&](const Rat& u) -> Rat { return G.num().gauss_norm(u, p) - G.den().gauss_norm(u, p); };
    if (profile(Cx.t_out) != tau0p)
        fail(ErrorCode::Internal, "end image exponent mismatch in modulus growth");
    std::vector<Rat> breaks = {Cx.t_out, Cx.t_in};
    for (const auto& v : gd.root_valuations())
        if (v > Cx.t_out && v < Cx.t_in) breaks.push_back(v);
    Rat F = tau0p;
    for (const auto& u : breaks) F = std::max(F, profile(u));
    if (F <= tau0p) fail(ErrorCode::Internal, "image collapsed below the boundary exponent");
    out.image = make_annulus(Rat(0), F, tau0p);
    out.modulus_out = F - tau0p;
    return out;
}

namespace {

// Hensel lift of a simple residue root to `digits` p-adic digits. f must be
// p-integral with a unit derivative at the root.
Int hensel_lift(const Poly& f, const Int& p, long r0, int digits) {
    Poly fp = f.derivative();
    Int x(r0);
    int k = 1;
    auto eval_mod = [&](const Poly& g, const Int& x0, const Int& mod) {
        Int acc(0);
        for (int i = g.degree(); i >= 0; --i) {
            Rat c = g.coeff(static_cast<size_t>(i));
            Int ci = c.get_num() % mod;
            if (c.get_den() != 1) ci = (ci * inv_mod(c.get_den() % mod, mod)) % mod;
            acc = (acc * x0 + ci) % mod;
        }
        if (acc < 0) acc += mod;
        return acc;
    };
    while (k < digits) {
        int k2 = std::min(2 * k, digits);
        Int pk2;
        mpz_pow_ui(pk2.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(k2));
        Int fx = eval_mod(f, x, pk2);
        Int dfx = eval_mod(fp, x, pk2);
        if (dfx % p == 0) fail(ErrorCode::HenselObstruction, "derivative not a unit at the lift");
        x = (x - fx * inv_mod(dfx, pk2)) % pk2;
        if (x < 0) x += pk2;
        k = k2;
    }
    return x;
}

struct PreimageCollector {
    std::vector<PreimageDisk> disks;
    Int p;

    void add(const Rat& center, const Rat& exponent, int degree, bool exact, int digits,
             bool at_inf) {
        // dedupe by the canonical disk identity
        Rat canon = trunc_padic(center, ceil_long(exponent), p);
        for (const auto& d : disks) {
            if (d.at_infinity == at_inf && d.exponent == exponent &&
                trunc_padic(d.center, ceil_long(exponent), p) == canon)
                return;
        }
        disks.push_back(PreimageDisk{center, exponent, degree, exact, digits, at_inf});
    }
};

// minimal u (>= floor, or unbounded below when floor is nullopt) with
// profile(u) = gauss(num_c, u) - gauss(den_c, u) >= s; the profile is
// piecewise linear in u with breakpoints at the root valuations
std::optional<Rat> solve_component_exponent(const Poly& num_c, const Poly& den_c, const Rat& s,
                                            std::optional<Rat> floor_u, const Int& p) {
    NewtonPolygon nn(num_c, p), nd(den_c, p);
    std::vector<Rat> brk;
    for (const auto& v : nn.root_valuations()) brk.push_back(v);
    for (const auto& v : nd.root_valuations()) brk.push_back(v);
    Rat lo = floor_u ? *floor_u : Rat(-1024);
    brk.push_back(lo);
    Rat hi = lo;
    for (const auto& v : brk) hi = std::max(hi, v);
    hi += 1;
    brk.push_back(hi);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
    auto profile = [&](const Rat& u) -> Rat { return num_c.gauss_norm(u, p) - den_c.gauss_norm(u, p); };
    // scan segments [brk_i, brk_{i+1}] from the left; inside a segment the
    // profile is linear, beyond the last breakpoint the slope is constant
    for (size_t i = 0; i < brk.size(); ++i) {
        if (brk[i] < lo) continue;
        Rat u0 = brk[i];
        Rat f0 = profile(u0);
        if (f0 >= s) return u0;
        Rat u1 = (i + 1 < brk.size()) ? brk[i + 1] : u0 + 1;
        Rat f1 = profile(u1);
        if (i + 1 >= brk.size()) {
            // final ray: slope from the last segment
            Rat slope = f1 - f0;
            if (slope <= 0) return std::nullopt;
            Rat u = u0 + (s - f0) / slope;
            return u;
        }
        if (f1 >= s) {
            Rat slope = (f1 - f0) / (u1 - u0);
            if (slope <= 0) continue;  // cannot reach s inside this segment
            return u0 + (s - f0) / slope;
        }
    }
    return std::nullopt;
}

void preimage_search_chart(const RatMap& cur, const Rat& b, const Rat& s, int depth,
                           int max_refinements, const Rat& abs_offset, long abs_level,
                           bool at_inf, PreimageCollector& coll) {
    const Int& p = cur.prime();
    Poly fiber = cur.num() - cur.den() * b;
    if (fiber.is_zero()) fail(ErrorCode::InvalidArgument, "map is constant equal to the target");
    // normalize and reduce to find the residue classes of fiber roots
    Rat g = fiber.gauss_norm(Rat(0), p);
    Poly fnorm = fiber * pow_p(p, -rat_to_long(g));
    ResidueField F(p.get_si(), 1);
    FFPoly fred;
    for (int i = 0; i <= fnorm.degree(); ++i) {
        Rat c = fnorm.coeff(static_cast<size_t>(i));
        if (c == 0 || vp(c, p).v > 0)
            fred.push_back(F.zero());
        else
            fred.push_back(F.from_int(residue_of_unit(c, p)));
    }
    fred = ffpoly_trim(F, fred);
    if (fred.empty()) fail(ErrorCode::Internal, "normalized fiber reduced to zero");
    bool complete = true;
    auto exact_roots = fiber.rational_roots(&complete);

    for (const auto& [root, mult] : ff_roots(F, fred)) {
        Rat c = Rat(root[0]);
        // an exact rational root in this residue class is the best center
        bool exact_center = false;
        for (const auto& [er, em] : exact_roots) {
            ValExp v = vp(er - c, p);
            if (v.inf || v.v >= 1) {
                c = er;
                exact_center = true;
                break;
            }
        }
        auto attempt = [&](const Rat& center, int digits) -> bool {
            Poly num_c = fiber.shift(center);
            Poly den_c = cur.den().shift(center);
            std::optional<Rat> floor_u;
            if (depth > 0) floor_u = Rat(0);
            auto u = solve_component_exponent(num_c, den_c, s, floor_u, p);
            if (!u) return false;
            NewtonPolygon poles(den_c, p);
            if (poles.count_ge(*u) > 0) return false;
            NewtonPolygon roots(num_c, p);
            int k = roots.count_ge(*u);
            if (k < 1) return false;
            Rat abs_center = abs_offset + pow_p(p, abs_level) * center;
            Rat abs_exp = Rat(abs_level) + *u;
            coll.add(abs_center, abs_exp, k, digits == 0, digits, at_inf);
            return true;
        };
        if (exact_center || mult == 1) {
            if (exact_center) {
                if (!attempt(c, 0)) fail(ErrorCode::Internal, "no component found at a fiber root");
            } else {
                Int lifted = hensel_lift(fnorm, p, root[0], 64);
                if (!attempt(Rat(lifted), 64) && !attempt(c, 0))
                    fail(ErrorCode::Internal, "no component found at a fiber root");
            }
            continue;
        }
        // multiple residue root: try the coarse center first, then descend
        if (attempt(c, 0)) continue;
        if (depth >= max_refinements)
            fail(ErrorCode::UnsupportedRamification,
                 "fiber cluster not separated within the refinement cap");
        RatMap sub(cur.num().shift(c).scale_arg(pow_p(p, 1)),
                   cur.den().shift(c).scale_arg(pow_p(p, 1)), p);
        preimage_search_chart(sub, b, s, depth + 1, max_refinements,
                              abs_offset + pow_p(p, abs_level) * c, abs_level + 1, at_inf, coll);
    }
}

} // namespace

std::vector<PreimageDisk> preimage_disks(const RatMap& R, const Rat& b, const Rat& s,
                                         int max_refinements) {
    const Int& p = R.prime();
    PreimageCollector coll;
    coll.p = p;
    // finite chart
    preimage_search_chart(R, b, s, 0, max_refinements, Rat(0), 0, false, coll);
    // chart around infinity: T(y) = R(1/y); only the residue-0 cluster of y
    // is new, the others repeat finite residue classes
    RatMap T = R.compose_with(RatMap(Poly({Rat(1)}), Poly({Rat(0), Rat(1)}), p));
    Poly fiber_inf = T.num() - T.den() * b;
    // the 1/z chart contributes iff the normalized fiber vanishes at residue 0
    Rat g = fiber_inf.gauss_norm(Rat(0), p);
    Rat c0 = fiber_inf.coeff(0);
    bool zero_cluster = (c0 == 0) || (vp(c0, p).v > g);
    if (zero_cluster) {
        PreimageCollector icoll;
        icoll.p = p;
        preimage_search_chart(T, b, s, 0, max_refinements, Rat(0), 0, true, icoll);
        for (const auto& d : icoll.disks) {
            // keep only disks from the residue-0 cluster of the 1/z chart
            ValExp v = vp(d.center, p);
            if (d.center == 0 || v.v >= 1) coll.disks.push_back(d);
        }
    }
    int total = 0;
    for (const auto& d : coll.disks) total += d.degree;
    if (total != R.degree())
        fail(ErrorCode::UnsupportedRamification,
             "component degrees sum to " + std::to_string(total) + ", expected " +
                 std::to_string(R.degree()));
    return coll.disks;
}

} // namespace berkdyn
