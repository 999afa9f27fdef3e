#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "berkdyn/padic.hpp"

using namespace berkdyn;

TEST_CASE("valuation basics") {
    Int p(3);
    CHECK(vp(Rat(3), p) == ValExp::of(1));
    CHECK(vp(Rat(1, 9), p) == ValExp::of(-2));
    CHECK(vp(Rat(0), p).inf);
    CHECK(vp(Rat(7), p) == ValExp::of(0));
    CHECK(vp(Rat(18, 5), p) == ValExp::of(2));
}

TEST_CASE("valuation is multiplicative and ultrametric") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<long> num(-200, 200);
    std::uniform_int_distribution<long> den(1, 200);
    std::vector<Int> primes = {Int(2), Int(3), Int(5)};
    int eq_when_distinct = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const Int& p = primes[static_cast<size_t>(trial % 3)];
        Rat x(num(rng), den(rng));
        Rat y(num(rng), den(rng));
        x.canonicalize();
        y.canonicalize();
        ValExp vx = vp(x, p), vy = vp(y, p);
        // multiplicative
        CHECK(vp(x * y, p) == vx + vy);
        // ultrametric with equality when valuations differ
        ValExp vs = vp(x + y, p);
        CHECK(vs >= min(vx, vy));
        if (vx != vy) {
            CHECK(vs == min(vx, vy));
            ++eq_when_distinct;
        }
    }
    CHECK(eq_when_distinct > 1000);
}

TEST_CASE("padic truncation canonicalizes digits") {
    Int p(5);
    CHECK(trunc_padic(Rat(7), 1, p) == Rat(2));
    CHECK(trunc_padic(Rat(7), 2, p) == Rat(7));
    CHECK(trunc_padic(Rat(1, 2), 1, p) == Rat(3));  // 1/2 = 3 + 5·... in Z_5
    CHECK(trunc_padic(Rat(25), 1, p) == Rat(0));
    CHECK(trunc_padic(Rat(1, 5), 1, p) == Rat(1, 5));
    CHECK(vp(Rat(1, 2) - trunc_padic(Rat(1, 2), 4, p), p) >= ValExp::of(4));
}

TEST_CASE("scalar arithmetic keeps valuations consistent") {
    Int p(2);
    PadicScalar a(Rat(6), p);   // v = 1
    PadicScalar b(Rat(1, 4), p);  // v = -2
    CHECK((a * b).valuation() == ValExp::of(-1));
    CHECK((a + a).valuation() == ValExp::of(2));
    CHECK((a / b).valuation() == ValExp::of(3));
    CHECK(PadicScalar(Rat(0), p).valuation().inf);
}

TEST_CASE("approximate arithmetic agrees with exact modulo p^(N-20)") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> coin(0, 2);
    std::uniform_int_distribution<long> small(1, 40);
    std::uniform_int_distribution<long> valshift(-10, 10);
    Int p(3);
    const int N = 40;
    for (int trial = 0; trial < 200; ++trial) {
        Rat exact(small(rng), small(rng));
        exact.canonicalize();
        exact *= pow_p(p, valshift(rng));
        ApproxPadic approx = ApproxPadic::from_rational(exact, p, N);
        for (int step = 0; step < 20; ++step) {
            Rat operand(small(rng), small(rng));
            operand.canonicalize();
            ApproxPadic aop = ApproxPadic::from_rational(operand, p, N);
            long kind = coin(rng);
            try {
                if (kind == 0) {
                    exact = exact + operand;
                    approx = approx + aop;
                } else if (kind == 1) {
                    exact = exact * operand;
                    approx = approx * aop;
                } else {
                    exact = exact - operand;
                    approx = approx - aop;
                }
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::PrecisionExhausted);
                goto next_trial;
            }
        }
        {
            ApproxPadic target = ApproxPadic::from_rational(exact, p, N);
            CHECK(approx.congruent(target, N - 20));
        }
    next_trial:;
    }
}

TEST_CASE("cancellation reports lost digits and exhaustion") {
    Int p(5);
    ApproxPadic one = ApproxPadic::from_rational(Rat(1), p, 64);
    ApproxPadic close = ApproxPadic::from_rational(Rat(1) + pow_p(p, 10), p, 64);
    ApproxPadic diff = close - one;
    CHECK(diff.valuation() == 10);
    CHECK(diff.precision() == 54);
    ApproxPadic way_too_close = ApproxPadic::from_rational(Rat(1) + pow_p(p, 40), p, 64);
    CHECK_THROWS_AS((void)(way_too_close - one), Error);
}

TEST_CASE("polynomial evaluation over approximations") {
    Int p(3);
    std::vector<Rat> poly = {Rat(1), Rat(0), Rat(1)};  // 1 + z^2
    ApproxPadic x = ApproxPadic::from_rational(Rat(3), p, 64);
    ApproxPadic y = eval_poly_approx(poly, x);
    CHECK(y.congruent(ApproxPadic::from_rational(Rat(10), p, 64), 30));
}
