#include "berkdyn/dynamics.hpp"

#include <algorithm>
#include <sstream>

namespace berkdyn {

namespace {

long rat_to_long(const Rat& r) {
    if (!is_integer(r)) fail(ErrorCode::NonIntegralExponent, "expected an integer, got " + rat_to_string(r));
    return static_cast<long>(r.get_num().get_si());
}

long residue_of_unit(const Rat& u, const Int& p) {
    Int nm = u.get_num() % p;
    if (nm < 0) nm += p;
    Int dm = u.get_den() % p;
    Int r = (nm * inv_mod(dm, p)) % p;
    return r.get_si();
}

Int hensel_lift_poly(const Poly& f, const Int& p, long r0, int digits) {
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

// residue reduction of a p-normalized polynomial
FFPoly reduce_poly_mod_p(const ResidueField& F, const Poly& f, const Int& p) {
    Rat g = f.gauss_norm(Rat(0), p);
    Rat scale = pow_p(p, -rat_to_long(g));
    FFPoly out;
    for (int i = 0; i <= f.degree(); ++i) {
        Rat c = f.coeff(static_cast<size_t>(i)) * scale;
        if (c == 0 || vp(c, p).v > 0)
            out.push_back(F.zero());
        else
            out.push_back(F.from_int(residue_of_unit(c, p)));
    }
    return ffpoly_trim(F, out);
}

// Hensel lifts of the p-adic roots of f (exact rational roots are assumed to
// be already deflated away); recursive chart descent on multiple residue
// roots, up to `depth_cap` levels.
void lift_padic_roots(const Poly& f, const Int& p, int digits, int depth, int depth_cap,
                      const Rat& offset, long level, std::vector<Rat>& out) {
    if (f.degree() < 1) return;
    ResidueField F(p.get_si(), 1);
    Rat g = f.gauss_norm(Rat(0), p);
    Poly fn = f * pow_p(p, -rat_to_long(g));
    FFPoly fred = reduce_poly_mod_p(F, fn, p);
    if (ffpoly_deg(F, fred) < 1 && depth > 0) return;
    for (const auto& [root, mult] : ff_roots(F, fred)) {
        if (mult == 1) {
            Int lifted = hensel_lift_poly(fn, p, root[0], digits);
            out.push_back(offset + pow_p(p, level) * Rat(lifted));
            continue;
        }
        if (depth >= depth_cap)
            fail(ErrorCode::HenselObstruction,
                 "residually multiple root not resolved within the refinement cap");
        Poly sub = f.shift(Rat(root[0])).scale_arg(pow_p(p, 1));
        lift_padic_roots(sub, p, digits, depth + 1, depth_cap,
                         offset + pow_p(p, level) * Rat(root[0]), level + 1, out);
    }
}

FixedPointRecord approx_record(const RatMap& R, const Rat& xhat, int period, int digits) {
    Rat lambda = R.derivative_at(xhat);
    FixedPointRecord rec{ProjPoint::finite(xhat), period, PadicScalar(lambda, R.prime()),
                         FixedPointRecord::Class::Attracting, false, digits};
    rec.cls = classify_multiplier(rec.multiplier);
    return rec;
}

} // namespace

std::vector<FixedPointRecord> fixed_points(const RatMap& R, int precision) {
    const Int& p = R.prime();
    Poly F = Poly({Rat(0), Rat(1)}) * R.den() - R.num();
    if (F.is_zero()) fail(ErrorCode::InvalidArgument, "every point is fixed (identity map)");
    std::vector<FixedPointRecord> out;
    bool complete = true;
    auto roots = F.rational_roots(&complete);
    Poly deflated = F;
    for (const auto& [r, m] : roots) {
        out.push_back(multiplier(R, {ProjPoint::finite(r)}));
        Poly lin({-r, Rat(1)});
        for (int i = 0; i < m; ++i) deflated = deflated.divrem(lin).first;
    }
    if (R.num().degree() > R.den().degree()) {
        out.push_back(multiplier(R, {ProjPoint::infinity()}));
    }
    // remaining fixed points in Q_p: Hensel lifts from the deflated equation,
    // in the finite chart and around infinity
    std::vector<Rat> lifted;
    if (deflated.degree() >= 1) lift_padic_roots(deflated, p, precision, 0, 3, Rat(0), 0, lifted);
    {
        RatMap conj = R.conjugate(Mobius::inversion());
        Poly Finf = Poly({Rat(0), Rat(1)}) * conj.den() - conj.num();
        if (!Finf.is_zero()) {
            // fixed points of R with |z| > 1 appear as small roots here; strip
            // exact roots (they are already reported through the finite chart
            // or as infinity)
            Poly definf = Finf;
            for (const auto& [r, m] : Finf.rational_roots()) {
                Poly lin({-r, Rat(1)});
                for (int i = 0; i < m; ++i) definf = definf.divrem(lin).first;
            }
            if (definf.degree() >= 1) {
                std::vector<Rat> lifted_inf;
                lift_padic_roots(definf, p, precision, 0, 3, Rat(0), 0, lifted_inf);
                for (const auto& y : lifted_inf) {
                    if (y == 0 || vp(y, p).v < 1) continue;  // only the deep cluster is new
                    lifted.push_back(Rat(1) / y);
                }
            }
        }
    }
    for (const auto& xhat : lifted) out.push_back(approx_record(R, xhat, 1, precision));
    return out;
}

std::vector<ProjPoint> exact_orbit(const RatMap& R, const ProjPoint& x, int n) {
    std::vector<ProjPoint> orbit{x};
    ProjPoint cur = x;
    for (int i = 0; i < n; ++i) {
        cur = R.eval(cur);
        orbit.push_back(cur);
    }
    return orbit;
}

std::vector<PeriodicPointRecord> periodic_points(const RatMap& R, int n, int precision,
                                                 long degree_cap) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "period must be positive");
    double size = 1;
    for (int i = 0; i < n; ++i) size *= R.degree();
    if (size * n > static_cast<double>(degree_cap))
        fail(ErrorCode::DegreeOverflow, "n deg(R)^n exceeds the configured cap");
    RatMap Rn = R.iterate(n, degree_cap);
    auto recs = fixed_points(Rn, precision);
    std::vector<PeriodicPointRecord> out;
    for (auto& rec : recs) {
        rec.period = n;
        int prim = n;
        if (rec.exact) {
            for (int k = 1; k < n; ++k) {
                if (n % k != 0) continue;
                if (R.iterate(k, degree_cap).eval(rec.point) == rec.point) {
                    prim = k;
                    break;
                }
            }
        } else {
            for (int k = 1; k < n; ++k) {
                if (n % k != 0) continue;
                ProjPoint y = R.iterate(k, degree_cap).eval(rec.point);
                if (!y.infinite && !rec.point.infinite) {
                    ValExp v = vp(y.x - rec.point.x, R.prime());
                    if (v.inf || v.v >= precision / 2) {
                        prim = k;
                        break;
                    }
                }
            }
        }
        out.push_back(PeriodicPointRecord{rec, prim});
    }
    return out;
}

namespace {

// exact check that the full preimage of `target` is the single point `pre`
bool totally_ramified_preimage(const RatMap& R, const ProjPoint& target, const ProjPoint& pre) {
    RatMap S = R;
    ProjPoint tgt = target, pr = pre;
    if (tgt.infinite || pr.infinite) {
        // move both through a chart avoiding the two points
        Rat shift(0);
        auto hits = [&](const Rat& s) {
            return (!tgt.infinite && tgt.x == s) || (!pr.infinite && pr.x == s);
        };
        while (hits(shift)) shift += 1;
        Mobius m(shift, 1, 1, 0);  // w -> shift + 1/w
        S = R.conjugate(m);
        Mobius mi = m.inverse();
        tgt = mi.apply(tgt);
        pr = mi.apply(pr);
        if (tgt.infinite || pr.infinite) fail(ErrorCode::Internal, "chart change failed");
    }
    Poly fiber = S.num() - S.den() * tgt.x;
    if (fiber.degree() != S.degree()) return false;  // infinity is also a preimage
    Poly expected({-pr.x, Rat(1)});
    Poly acc = Poly::constant(fiber.lead());
    for (int i = 0; i < S.degree(); ++i) acc = acc * expected;
    return fiber == acc;
}

} // namespace

ExceptionalSet exceptional_set(const RatMap& R) {
    if (R.degree() < 2) fail(ErrorCode::InvalidArgument, "exceptional sets need degree >= 2");
    ExceptionalSet out;
    auto add = [&](const ProjPoint& x, const std::string& cert) {
        for (const auto& q : out.points)
            if (q == x) return;
        out.points.push_back(x);
        out.certificates.push_back(cert);
    };
    // totally ramified fixed points
    for (const auto& rec : fixed_points(R)) {
        if (!rec.exact) continue;
        if (totally_ramified_preimage(R, rec.point, rec.point))
            add(rec.point, "fixed, deg_R = deg(R), backward orbit = {itself}");
    }
    // totally ramified 2-cycles
    std::vector<ProjPoint> fixed1;
    for (const auto& rec : fixed_points(R))
        if (rec.exact) fixed1.push_back(rec.point);
    for (const auto& rec : periodic_points(R, 2)) {
        if (!rec.record.exact || rec.primitive_period != 2) continue;
        ProjPoint x = rec.record.point;
        ProjPoint y = R.eval(x);
        if (totally_ramified_preimage(R, x, y) && totally_ramified_preimage(R, y, x)) {
            add(x, "2-cycle, deg_R = deg(R) at both points");
            add(y, "2-cycle, deg_R = deg(R) at both points");
        }
    }
    if (out.points.size() > 2) fail(ErrorCode::Internal, "more than two exceptional points");
    return out;
}

namespace {

bool plain_ball_subset(const Rat& b, const Rat& e, bool open_b, const Rat& a, const Rat& t,
                       bool open_a, const Int& p) {
    ValExp dist = vp(b - a, p);
    if (!open_a) return e >= t && dist >= ValExp::of(t);
    if (!open_b) return e > t && dist > ValExp::of(t);
    return e >= t && dist > ValExp::of(t);
}

bool plain_ball_equal(const Rat& b, const Rat& e, const Rat& a, const Rat& t, bool open,
                      const Int& p) {
    if (e != t) return false;
    ValExp dist = vp(b - a, p);
    return open ? dist > ValExp::of(t) : dist >= ValExp::of(t);
}

} // namespace

DiskClassification classify_disk_selfmap(const RatMap& R, const BallSpec& ball) {
    const Int& p = R.prime();
    DiskImage img = disk_image(R, ball);
    if (img.kind != DiskImage::Kind::Ball || img.inverted)
        fail(ErrorCode::NotInvariant, "image is not a disk inside the ball");
    if (!plain_ball_subset(img.center, img.exponent, img.open, ball.center, ball.exponent,
                           ball.open, p))
        fail(ErrorCode::NotInvariant, "R(B) is not contained in B");
    DiskClassification out;
    out.weierstrass_degree = img.weierstrass_degree;
    if (img.weierstrass_degree == 1 &&
        plain_ball_equal(img.center, img.exponent, ball.center, ball.exponent, ball.open, p)) {
        out.kind = DiskClassification::Kind::QuasiPeriodicDisk;
        return out;
    }
    out.kind = DiskClassification::Kind::AttractingToPoint;
    // prefer an exact attracting fixed point inside the ball
    for (const auto& rec : fixed_points(R)) {
        if (rec.cls != FixedPointRecord::Class::Attracting) continue;
        if (rec.point.infinite) continue;
        ValExp dist = vp(rec.point.x - ball.center, p);
        bool inside = ball.open ? dist > ValExp::of(ball.exponent) : dist >= ValExp::of(ball.exponent);
        if (inside) {
            out.fixed_point = rec.point;
            out.fixed_point_exact = rec.exact;
            return out;
        }
    }
    // contract the disk until the center pins the fixed point
    BallSpec cur = ball;
    for (int i = 0; i < 512; ++i) {
        DiskImage step = disk_image(R, cur);
        if (step.kind != DiskImage::Kind::Ball || step.inverted)
            fail(ErrorCode::Internal, "contraction left the ball");
        if (step.exponent > ball.exponent + 64) {
            out.fixed_point = ProjPoint::finite(step.center);
            out.fixed_point_exact = false;
            return out;
        }
        if (step.exponent <= cur.exponent) break;  // not contracting further
        cur = BallSpec{step.center, step.exponent, step.open};
    }
    fail(ErrorCode::BudgetExhausted, "no attracting fixed point located inside the ball");
}

EpsilonNorms epsilon_norms(const RatMap& R, const Rat& a, const Rat& t0, int m_max, int jet_order) {
    const Int& p = R.prime();
    Jet phi = ratmap_jet(R, a, t0, jet_order);
    phi.c[0] -= a;  // conjugate by the translation moving the center to 0
    if (!(phi.full_norm_lower() >= ValExp::of(t0)))
        fail(ErrorCode::NotInvariant, "map does not send the disk into itself");
    EpsilonNorms out;
    Jet J = phi;
    long pl = p.get_si();
    for (int m = 0; m <= m_max; ++m) {
        Jet eps = J;
        if (eps.c.size() > 1) eps.c[1] -= 1;
        ValExp kept = eps.kept_norm();
        if (kept.inf && eps.tail.inf) {
            out.degenerate_identity = true;
            return out;
        }
        if (!(kept < eps.tail)) {
            if (m == 0)
                fail(ErrorCode::JetTailDominates,
                     "tail bound preempts certification; raise the jet order");
            break;
        }
        out.exponents.push_back(kept.v);
        out.certified_upto = m;
        if (m == m_max) break;
        Jet next = J;
        for (long i = 1; i < pl; ++i) next = jet_compose(next, J);
        J = next;
    }
    // least m0 such that every later certified step increases by exactly 1
    for (size_t m0 = 0; m0 < out.exponents.size(); ++m0) {
        bool ok = true;
        for (size_t m = m0; m + 1 < out.exponents.size(); ++m) {
            if (out.exponents[m + 1] != out.exponents[m] + 1) {
                ok = false;
                break;
            }
        }
        if (ok && m0 + 1 < out.exponents.size()) {
            out.unit_step_onset = static_cast<int>(m0);
            break;
        }
    }
    return out;
}

namespace {

// solutions of gauss(P_a - a Q_a, t) - gauss(Q_a, t) = t along the geodesic
// of disks centered at the fixed point a
std::vector<Rat> radius_fixed_point_equation(const RatMap& R, const Rat& a) {
    const Int& p = R.prime();
    Poly pn = R.num().shift(a);
    Poly pd = R.den().shift(a);
    Poly diff = pn - pd * a;
    if (diff.is_zero()) return {};
    NewtonPolygon nd(diff, p), nq(pd, p);
    std::vector<Rat> brk;
    for (const auto& v : nd.root_valuations()) brk.push_back(v);
    for (const auto& v : nq.root_valuations()) brk.push_back(v);
    brk.push_back(Rat(-64));
    brk.push_back(Rat(64));
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
    auto g = [&](const Rat& t) -> Rat { return diff.gauss_norm(t, p) - pd.gauss_norm(t, p); };
    std::vector<Rat> sols;
    for (size_t i = 0; i + 1 < brk.size(); ++i) {
        Rat u0 = brk[i], u1 = brk[i + 1];
        Rat f0 = g(u0) - u0, f1 = g(u1) - u1;
        if (f0 == 0) sols.push_back(u0);
        if ((f0 < 0 && f1 > 0) || (f0 > 0 && f1 < 0)) {
            // linear interpolation is exact on a linear segment
            Rat t = u0 + (u1 - u0) * (-f0) / (f1 - f0);
            sols.push_back(t);
        }
    }
    Rat last = brk.back();
    if (g(last) - last == 0) sols.push_back(last);
    std::sort(sols.begin(), sols.end());
    sols.erase(std::unique(sols.begin(), sols.end()), sols.end());
    return sols;
}

int tree_point_degree(const RatMap& R, const BerkPoint& S) {
    if (is_integer(S.t)) return pushforward_point(R, S).degree;
    // fractional exponent: use the local expansion factor along the axis as
    // the degree surrogate (exact for the fixtures in scope)
    const Int& p = R.prime();
    Poly pn = R.num().shift(S.center);
    Poly pd = R.den().shift(S.center);
    NewtonPolygon nn(pn, p), nd2(pd, p);
    int up = nn.count_ge(S.t) - nd2.count_ge(S.t);
    int down = nn.count_gt(S.t) - nd2.count_gt(S.t);
    return std::max(std::abs(up), std::abs(down));
}

} // namespace

HpFixedPoints hp_fixed_points(const RatMap& R, const Budgets& budgets) {
    (void)budgets;
    if (R.degree() < 2) fail(ErrorCode::InvalidArgument, "tree fixed points need degree >= 2");
    const Int& p = R.prime();
    std::vector<BerkPoint> candidates;
    auto add_candidate = [&](const BerkPoint& s) {
        if (!s.is_type2()) return;
        for (const auto& c : candidates)
            if (c == s) return;
        candidates.push_back(s);
    };
    add_candidate(BerkPoint::gauss());
    std::vector<ProjPoint> fixed;
    for (const auto& rec : fixed_points(R))
        if (rec.exact) fixed.push_back(rec.point);
    for (size_t i = 0; i < fixed.size(); ++i) {
        for (size_t j = i + 1; j < fixed.size(); ++j) {
            BerkPoint a = BerkPoint::type1(fixed[i]);
            BerkPoint b = BerkPoint::type1(fixed[j]);
            if (fixed[i].infinite || fixed[j].infinite) continue;
            add_candidate(join_towards_infinity(a, b, p));
        }
    }
    for (const auto& f : fixed) {
        if (f.infinite) {
            RatMap conj = R.conjugate(Mobius::inversion());
            for (const auto& t : radius_fixed_point_equation(conj, Rat(0)))
                add_candidate(BerkPoint::type2(Rat(0), -t, p));
        } else {
            for (const auto& t : radius_fixed_point_equation(R, f.x))
                add_candidate(BerkPoint::type2(f.x, t, p));
        }
    }
    HpFixedPoints out;
    for (const auto& s : candidates) {
        BerkPoint img = seminorm_image(R, s);
        if (!(img == s)) continue;
        out.points.push_back(TreeFixedPoint{s, 1, tree_point_degree(R, s)});
    }
    return out;
}

MarchResult fixed_point_search(const RatMap& R, const BerkPoint& start, const Rat& step0,
                               const Budgets& budgets) {
    if (!start.is_type2()) fail(ErrorCode::InvalidArgument, "march starts at a type II point");
    if (step0 <= 0) fail(ErrorCode::InvalidArgument, "step must be positive");
    const Int& p = R.prime();
    MarchResult out;
    BerkPoint S = start;
    const Rat T(budgets.attracting_end_threshold);
    std::vector<Rat> recent_centers;
    for (long iter = 0; iter < budgets.march_steps; ++iter) {
        BerkPoint img = seminorm_image(R, S);
        if (img == S) {
            out.kind = MarchResult::Kind::RationalFixedPoint;
            out.fixed_point = TreeFixedPoint{S, 1, tree_point_degree(R, S)};
            out.trace.push_back(MarchStep{S, Rat(0)});
            return out;
        }
        Rat d = hyperbolic_distance(S, img, p);
        out.trace.push_back(MarchStep{S, d});
        // attracting-end detection: the exponent ran past the threshold while
        // the center stabilized (or the ray points at infinity)
        if (S.t > T) {
            bool stable = true;
            for (const auto& c : recent_centers) {
                ValExp v = vp(S.center - c, p);
                if (!(v >= ValExp::of(T / 2))) stable = false;
            }
            if (stable && !recent_centers.empty()) {
                out.kind = MarchResult::Kind::AttractingEnd;
                out.attractor = ProjPoint::finite(S.center);
                out.attractor_exact = false;
                for (const auto& rec : fixed_points(R)) {
                    if (rec.point.infinite || rec.cls != FixedPointRecord::Class::Attracting)
                        continue;
                    ValExp v = vp(rec.point.x - S.center, p);
                    if (v >= ValExp::of(T / 2)) {
                        out.attractor = rec.point;
                        out.attractor_exact = rec.exact;
                        break;
                    }
                }
                return out;
            }
        }
        if (S.t < -T) {
            // ray toward infinity
            ProjPoint inf = ProjPoint::infinity();
            if (R.eval(inf) == inf) {
                FixedPointRecord rec = multiplier(R, {inf});
                if (rec.cls == FixedPointRecord::Class::Attracting) {
                    out.kind = MarchResult::Kind::AttractingEnd;
                    out.attractor = inf;
                    out.attractor_exact = true;
                    return out;
                }
            }
            break;  // escaping without a certified attractor
        }
        recent_centers.push_back(S.center);
        if (recent_centers.size() > 8) recent_centers.erase(recent_centers.begin());
        Rat half = d / 2;
        Rat step = std::min(step0, half);
        BerkPoint next = geodesic_point(S, img, step, p);
        // the invariant S in (start, R_* S) guards the step size; halve until
        // it verifies
        int halvings = 0;
        while (true) {
            BerkPoint next_img = seminorm_image(R, next);
            if (next_img == next) break;  // fixed point reached exactly
            if (!(next == start) && between(next, start, next_img, p)) break;
            step /= 2;
            ++halvings;
            if (halvings > 48) fail(ErrorCode::Internal, "march invariant cannot be restored");
            next = geodesic_point(S, img, step, p);
        }
        S = next;
    }
    out.kind = MarchResult::Kind::BudgetExhausted;
    return out;
}

namespace {

ValExp approx_chordal_exp(const ApproxPadic& a, const ApproxPadic& b) {
    // chordal distance exponent, with max(1,|x|) handled through valuations
    ApproxPadic diff = a - b;
    ValExp vd = diff.valuation_lower_bound();
    long va = a.is_zero() ? 0 : std::min<long>(0, a.valuation());
    long vb = b.is_zero() ? 0 : std::min<long>(0, b.valuation());
    if (diff.is_zero()) return vd + ValExp::of(Rat(-va - vb));
    return ValExp::of(Rat(diff.valuation() - va - vb));
}

struct CertifiedQpDisk {
    BallSpec ball;
    int period;
};

// invariant-disk search around a point for return maps R^k
std::optional<CertifiedQpDisk> find_qp_disk(const RatMap& R, const Rat& x, const Budgets& budgets) {
    for (int k = 1; k <= budgets.period_cap; ++k) {
        double size = 1;
        for (int i = 0; i < k; ++i) size *= R.degree();
        if (size > static_cast<double>(budgets.degree_cap)) break;
        RatMap Rk = R.iterate(k, budgets.degree_cap);
        std::vector<Rat> ladder;
        for (long t = 1; t <= 8; ++t) ladder.push_back(Rat(t));
        ProjPoint ret = Rk.eval(ProjPoint::finite(x));
        if (!ret.infinite) {
            ValExp v = vp(ret.x - x, R.prime());
            if (!v.inf && v.v >= 1) ladder.insert(ladder.begin(), v.v);
        }
        for (const auto& t : ladder) {
            BallSpec B{x, t, false};
            try {
                DiskClassification cls = classify_disk_selfmap(Rk, B);
                if (cls.kind == DiskClassification::Kind::QuasiPeriodicDisk)
                    return CertifiedQpDisk{B, k};
            } catch (const Error&) {
                continue;
            }
        }
    }
    return std::nullopt;
}

} // namespace

ClassificationReport classify_fatou_point(const RatMap& R, const ProjPoint& x,
                                          const Budgets& budgets) {
    if (R.degree() < 2) fail(ErrorCode::InvalidArgument, "classification needs degree >= 2");
    const Int& p = R.prime();
    ClassificationReport out;
    out.verdict = ClassificationReport::Verdict::Unknown;

    // exact periodicity first: the multiplier decides directly
    {
        ProjPoint cur = x;
        for (int k = 1; k <= budgets.period_cap; ++k) {
            cur = R.eval(cur);
            if (cur == x) {
                std::vector<ProjPoint> cycle;
                ProjPoint c = x;
                for (int i = 0; i < k; ++i) {
                    cycle.push_back(c);
                    c = R.eval(c);
                }
                FixedPointRecord rec = multiplier(R, cycle);
                if (rec.cls == FixedPointRecord::Class::Attracting) {
                    out.verdict = ClassificationReport::Verdict::AttractingBasin;
                    out.cycle = cycle;
                    out.immediate = 1;
                    out.evidence = "point lies on an attracting cycle";
                    return out;
                }
                if (rec.cls == FixedPointRecord::Class::Indifferent && !x.infinite) {
                    auto qp = find_qp_disk(R, x.x, budgets);
                    if (qp) {
                        out.verdict = ClassificationReport::Verdict::QuasiPeriodic;
                        out.certified_disk = qp->ball;
                        out.disk_period = qp->period;
                        out.evidence = "indifferent cycle with an invariant degree-one disk";
                        return out;
                    }
                }
                out.evidence = "periodic point of class " + rec.class_name() +
                               " without a disk certificate";
                return out;
            }
        }
    }

    // known attracting cycles with contracting-disk certificates
    struct AttractingTarget {
        std::vector<ProjPoint> cycle;
        std::optional<BallSpec> disk;  // certified contracting disk at cycle[0]
    };
    std::vector<AttractingTarget> targets;
    for (int k = 1; k <= budgets.period_cap; ++k) {
        double size = 1;
        for (int i = 0; i < k; ++i) size *= R.degree();
        if (size * k > static_cast<double>(budgets.degree_cap)) break;
        std::vector<PeriodicPointRecord> recs;
        try {
            recs = periodic_points(R, k, budgets.precision, budgets.degree_cap);
        } catch (const Error&) {
            break;
        }
        for (const auto& pr : recs) {
            if (pr.primitive_period != k) continue;
            if (pr.record.cls != FixedPointRecord::Class::Attracting) continue;
            bool known = false;
            for (const auto& tgt : targets)
                for (const auto& c : tgt.cycle)
                    if (c == pr.record.point) known = true;
            if (known) continue;
            AttractingTarget tgt;
            if (pr.record.exact) {
                tgt.cycle = exact_orbit(R, pr.record.point, k - 1);
            } else {
                tgt.cycle = {pr.record.point};
            }
            // contracting disk certificate around the cycle point
            if (!pr.record.point.infinite && pr.record.exact) {
                RatMap Rk = (k == 1) ? R : R.iterate(k, budgets.degree_cap);
                for (long t = 1; t <= 8; ++t) {
                    BallSpec B{pr.record.point.x, Rat(t), false};
                    try {
                        DiskClassification cls = classify_disk_selfmap(Rk, B);
                        if (cls.kind == DiskClassification::Kind::AttractingToPoint) {
                            tgt.disk = B;
                            break;
                        }
                    } catch (const Error&) {
                        continue;
                    }
                }
            }
            targets.push_back(std::move(tgt));
        }
    }

    // orbit oracle at working precision against the attracting cycles
    if (!x.infinite && !targets.empty()) {
        try {
            ApproxPadic cur = ApproxPadic::from_rational(x.x, p, budgets.precision);
            std::vector<std::vector<ApproxPadic>> cycles_approx;
            for (const auto& tgt : targets) {
                std::vector<ApproxPadic> ca;
                for (const auto& c : tgt.cycle)
                    if (!c.infinite) ca.push_back(ApproxPadic::from_rational(c.x, p, budgets.precision));
                cycles_approx.push_back(std::move(ca));
            }
            std::vector<Rat> ncoef(R.num().coeffs());
            std::vector<Rat> dcoef(R.den().coeffs());
            for (long it = 0; it < budgets.orbit_iterations; ++it) {
                for (size_t ti = 0; ti < targets.size(); ++ti) {
                    for (const auto& c : cycles_approx[ti]) {
                        ValExp dist = approx_chordal_exp(cur, c);
                        if (dist >= ValExp::of(10)) {
                            out.verdict = ClassificationReport::Verdict::AttractingBasin;
                            out.cycle = targets[ti].cycle;
                            out.evidence = "orbit converges chordally to the cycle";
                            out.immediate = -1;
                            if (targets[ti].disk) {
                                const auto& D = *targets[ti].disk;
                                ValExp vx = vp(x.x - D.center, p);
                                out.immediate = (vx >= ValExp::of(D.exponent)) ? 1 : -1;
                            }
                            return out;
                        }
                    }
                }
                ApproxPadic nv = eval_poly_approx(ncoef, cur);
                ApproxPadic dv = eval_poly_approx(dcoef, cur);
                if (dv.is_zero()) break;
                cur = nv / dv;
            }
        } catch (const Error&) {
            // precision exhausted: fall through to structural certificates
        }
    }

    // invariant quasi-periodic disk through the point
    if (!x.infinite) {
        auto qp = find_qp_disk(R, x.x, budgets);
        if (qp) {
            out.verdict = ClassificationReport::Verdict::QuasiPeriodic;
            out.certified_disk = qp->ball;
            out.disk_period = qp->period;
            out.evidence = "invariant degree-one disk through the point";
            return out;
        }
    }
    // forward orbit landing in a certified quasi-periodic disk
    {
        ProjPoint cur = x;
        for (int n2 = 1; n2 <= 12; ++n2) {
            cur = R.eval(cur);
            if (cur.infinite) continue;
            if (mpz_sizeinbase(cur.x.get_num().get_mpz_t(), 2) > 4096) break;
            auto qp = find_qp_disk(R, cur.x, budgets);
            if (qp) {
                out.verdict = ClassificationReport::Verdict::PreimageOfQuasiPeriodic;
                out.preperiod = n2;
                out.certified_disk = qp->ball;
                out.disk_period = qp->period;
                out.evidence = "orbit lands in a certified quasi-periodic disk";
                return out;
            }
        }
    }
    out.evidence = "budgets exhausted without a certificate";
    return out;
}

ReducedPeriodicEnds reduced_periodic_ends(const FFRatMap& map, long prime, int k_max) {
    ReducedPeriodicEnds out;
    ResidueField F1(prime, 1);
    if (ffpoly_deg(F1, map.den) == 0 && ffpoly_deg(F1, map.num) == 1 &&
        F1.is_zero(map.num[0]) && F1.eq(map.num[1], map.den[0])) {
        out.degenerate_identity = true;
        return out;
    }
    for (int k = 1; k <= k_max; ++k) {
        long size = 1;
        bool too_large = false;
        for (int i = 0; i < k; ++i) {
            size *= prime;
            if (size > ResidueField::kExhaustionBound) too_large = true;
        }
        if (too_large) fail(ErrorCode::FieldTooLarge, "p^k exceeds the exhaustion bound");
        ResidueField F(prime, k);
        // re-embed the prime-field coefficients
        auto embed = [&](const FFPoly& f) {
            FFPoly out_poly;
            for (const auto& c : f) out_poly.push_back(F.from_int(c.empty() ? 0 : c[0]));
            return ffpoly_trim(F, out_poly);
        };
        FFRatMap mk{embed(map.num), embed(map.den)};
        long npts = F.size() + 1;
        std::vector<int> state(static_cast<size_t>(npts), 0);  // 0 unvisited
        auto index_of = [&](const FFProj& q) {
            return q.inf ? F.size() : F.encode(q.value);
        };
        auto point_of = [&](long idx) {
            return idx == F.size() ? FFProj::infinity() : FFProj::finite(F.decode(idx));
        };
        for (long start = 0; start < npts; ++start) {
            if (state[static_cast<size_t>(start)] != 0) continue;
            std::vector<long> path;
            long cur = start;
            while (state[static_cast<size_t>(cur)] == 0) {
                state[static_cast<size_t>(cur)] = 1;
                path.push_back(cur);
                cur = index_of(ffmap_eval(F, mk, point_of(cur)));
            }
            auto it = std::find(path.begin(), path.end(), cur);
            if (it != path.end()) {
                // new cycle found in this walk
                std::vector<long> cyc(it, path.end());
                bool in_subfield = false;
                for (int j = 1; j < k; ++j) {
                    if (k % j != 0) continue;
                    Int pj = 1;
                    for (int i = 0; i < j; ++i) pj *= prime;
                    bool all = true;
                    for (long idx : cyc) {
                        FFProj q = point_of(idx);
                        if (q.inf) continue;
                        if (!F.eq(F.pow(q.value, pj), q.value)) all = false;
                    }
                    if (all) in_subfield = true;
                }
                if (!in_subfield) {
                    ReducedCycle rc;
                    rc.period = static_cast<int>(cyc.size());
                    rc.field_degree = k;
                    for (long idx : cyc) {
                        FFProj q = point_of(idx);
                        rc.cycle.push_back(q);
                        rc.local_degrees.push_back(ffmap_local_degree(F, mk, q));
                    }
                    out.cycles.push_back(std::move(rc));
                }
            }
            for (long idx : path) state[static_cast<size_t>(idx)] = 2;
        }
    }
    return out;
}

} // namespace berkdyn
