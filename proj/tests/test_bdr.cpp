#include "doctest.h"

#include "qpr/bdr.hpp"
#include "qpr/normal_forms.hpp"
#include "qpr/rng.hpp"
#include "support/oracles.hpp"

using namespace qpr;

namespace {

std::shared_ptr<const BdrContext> make_ctx(u64 p, int k, int N, int alpha, int s = 1) {
    PrecisionProfile prof;
    prof.p = p;
    prof.k = k;
    prof.N = N;
    prof.alpha = alpha;
    prof.s = s;
    prof.n_max = k;
    return BdrContext::make(prof);
}

} // namespace

TEST_CASE("xi^alpha vanishes exactly") {
    for (int alpha : {1, 2, 3}) {
        auto ctx = make_ctx(5, 2, 12, alpha);
        BdrElement xi = constant(ctx, BdrConstant::Xi);
        BdrElement acc = BdrElement::one(ctx);
        for (int i = 0; i < alpha; ++i) acc = acc * xi;
        CHECK(acc.is_zero());
        if (alpha > 1) CHECK(!pow(xi, static_cast<u64>(alpha - 1)).is_zero());
    }
}

TEST_CASE("q is a unit and inv(2) matches the modular inverse") {
    auto ctx = make_ctx(5, 2, 12, 3);
    BdrElement q = constant(ctx, BdrConstant::Q);
    CHECK(q.is_unit());
    CHECK(eq(q * q.inv(), BdrElement::one(ctx)));

    BdrElement two_inv = BdrElement::from_int(ctx, 2).inv();
    u64 pn = ctx->q.gr.zq.pN;
    u64 expect = static_cast<u64>(oracle::egcd_inverse(2, static_cast<i64>(pn)));
    CHECK(two_inv.raw().c[0] == expect);
}

TEST_CASE("theta maps the generators correctly") {
    auto ctx = make_ctx(5, 2, 12, 3);
    auto cyc = ctx->theta_ctx;
    // theta(q^(1/p^k)) = theta(1+z) = 1+y
    CycloElement img = theta(q_root(ctx, ctx->prof.k));
    CHECK(eq(img, CycloElement::one(cyc) + CycloElement::gen(cyc)));
    CHECK(theta(constant(ctx, BdrConstant::Xi)).is_zero());
    CHECK(theta(constant(ctx, BdrConstant::T)).is_zero());
    CHECK(theta(constant(ctx, BdrConstant::Mu)).is_zero());
}

TEST_CASE("theta is a ring homomorphism") {
    auto ctx = make_ctx(3, 2, 12, 3);
    Rng rng(101);
    for (int i = 0; i < 200; ++i) {
        BdrElement a = random_bdr(rng, ctx), b = random_bdr(rng, ctx);
        CHECK(eq(theta(a * b), theta(a) * theta(b)));
        CHECK(eq(theta(a + b), theta(a) + theta(b)));
    }
}

TEST_CASE("t series digits match the exact rational oracle") {
    // p=3, k=1, alpha=2, N=8: reduce 3*log(1+z) mod (xi^2, 3^8) by exact
    // rational long division and compare every digit
    auto ctx = make_ctx(3, 1, 8, 2);
    BdrElement t = constant(ctx, BdrConstant::T);
    oracle::QPoly expect = oracle::t_series_q(3, 1, 2, 200);
    CHECK(oracle::bdr_matches_qpoly(t, expect));

    auto ctx2 = make_ctx(3, 2, 8, 2);
    BdrElement t2 = constant(ctx2, BdrConstant::T);
    oracle::QPoly expect2 = oracle::t_series_q(3, 2, 2, 260);
    CHECK(oracle::bdr_matches_qpoly(t2, expect2));
}

TEST_CASE("t equals log(q)") {
    for (u64 p : {3ull, 5ull}) {
        auto ctx = make_ctx(p, 2, 12, 3);
        CHECK(eq(log_near_one(constant(ctx, BdrConstant::Q)), constant(ctx, BdrConstant::T)));
    }
}

TEST_CASE("roots of unity are primitive and satisfy the root identity") {
    for (u64 p : {3ull, 5ull}) {
        auto ctx = make_ctx(p, 2, 12, 3);
        for (int n = 1; n <= 2; ++n) {
            // q^(1/p^n) = zeta_n * exp(t/p^n) at the stated twelve digits
            BdrElement zn = zeta(ctx, n);
            BdrElement rhs = zn * exp_small(constant(ctx, BdrConstant::T).div_pow_p(n));
            CHECK(eq(q_root(ctx, n), rhs));
        }
        // order and primitivity through the tower: the canonical root lifts
        // carry real p-denominators, so the full p^2 power chain exhausts
        // twelve digits; one p-th power at a time stays certifiable
        auto wide = make_ctx(p, 2, 20, 3);
        CHECK(eq(pow(zeta(wide, 1), p), BdrElement::one(wide)));
        CHECK(eq(pow(zeta(wide, 2), p), zeta(wide, 1)));
        CHECK(!eq(zeta(wide, 1), BdrElement::one(wide)));
        CHECK(!eq(zeta(wide, 2), BdrElement::one(wide)));
        CHECK(!eq(zeta(wide, 2), zeta(wide, 1)));
    }
    // small enough denominators at p = 3 to check the composite power directly
    auto w3 = make_ctx(3, 2, 24, 3);
    CHECK(eq(pow(zeta(w3, 2), 9), BdrElement::one(w3)));
    CHECK(!eq(pow(zeta(w3, 2), 3), BdrElement::one(w3)));
}

TEST_CASE("exp and log basics") {
    auto ctx = make_ctx(5, 2, 12, 3);
    CHECK(eq(exp_small(BdrElement::zero(ctx)), BdrElement::one(ctx)));

    // log(exp(p^2 xi)) = p^2 xi, also against the composed rational series
    BdrElement x = BdrElement::from_int(ctx, 25) * constant(ctx, BdrConstant::Xi);
    BdrElement back = log_near_one(exp_small(x));
    CHECK(eq(back, x));

    auto ctx3 = make_ctx(3, 1, 8, 3);
    BdrElement x3 = BdrElement::from_int(ctx3, 9) * constant(ctx3, BdrConstant::Xi);
    CHECK(eq(log_near_one(exp_small(x3)), x3));
    {
        oracle::QPoly xi = oracle::cyclo_shifted_q(3, 1);
        oracle::QPoly mod = oracle::qpoly_pow(xi, 3);
        oracle::QPoly arg = oracle::qpoly_scale(oracle::BigRat(9), xi);
        oracle::QPoly composed =
            oracle::qpoly_log_one_plus(oracle::qpoly_add(oracle::qpoly_exp_nilpotent(arg, mod, 64),
                                                         {oracle::BigRat(-1)}),
                                       mod, 64);
        CHECK(oracle::bdr_matches_qpoly(log_near_one(exp_small(x3)), composed));
    }
}

TEST_CASE("exp and log are mutually inverse on the domain") {
    auto ctx = make_ctx(5, 2, 12, 3);
    Rng rng(55);
    for (int i = 0; i < 100; ++i) {
        BdrElement x = random_bdr_kernel(rng, ctx) +
                       BdrElement::from_int(ctx, 25) * random_bdr(rng, ctx);
        BdrElement u = exp_small(x);
        CHECK(eq(log_near_one(u), x));
        BdrElement v = BdrElement::one(ctx) + random_bdr_kernel(rng, ctx) +
                       BdrElement::from_int(ctx, 25) * random_bdr(rng, ctx);
        CHECK(eq(exp_small(log_near_one(v)), v));
    }
}

TEST_CASE("log and exp reject arguments off the domain") {
    auto ctx = make_ctx(5, 2, 12, 3);
    CHECK_THROWS_AS(exp_small(BdrElement::one(ctx)), DomainViolation);
    CHECK_THROWS_AS(log_near_one(BdrElement::from_int(ctx, 2)), DomainViolation);
}

TEST_CASE("kernel is principal at precision") {
    auto ctx = make_ctx(5, 2, 12, 3);
    Rng rng(77);
    for (int i = 0; i < 100; ++i) {
        BdrElement a = random_bdr_kernel(rng, ctx);
        BdrElement q = divide_by_xi(a);
        CHECK(q.ctx()->prof.alpha == 2);
        CHECK(eq(constant(ctx, BdrConstant::Xi) * lift_into(q, ctx), a));
    }
}

TEST_CASE("divide_by_xi rejects non-kernel elements") {
    auto ctx = make_ctx(5, 2, 12, 3);
    CHECK_THROWS_AS(divide_by_xi(BdrElement::one(ctx)), NotDivisible);
    // xi^2 / xi = xi in the alpha-1 model
    BdrElement xi = constant(ctx, BdrConstant::Xi);
    BdrElement q = divide_by_xi(xi * xi);
    CHECK(eq(q, constant(q.ctx(), BdrConstant::Xi)));
}

TEST_CASE("t factors through xi with an invertible cofactor") {
    for (u64 p : {3ull, 5ull}) {
        auto ctx = make_ctx(p, 2, 12, 3);
        BdrElement u = constant(ctx, BdrConstant::UnitTOverXi);
        CHECK(eq(u * u.inv(), BdrElement::one(ctx)));
        CHECK(eq(constant(ctx, BdrConstant::Xi) * u, constant(ctx, BdrConstant::T)));
        BdrElement t = constant(ctx, BdrConstant::T);
        BdrElement talpha = pow(t, static_cast<u64>(ctx->prof.alpha));
        CHECK(talpha.is_zero());
        CHECK(!pow(t, static_cast<u64>(ctx->prof.alpha - 1)).is_zero());
    }
}

TEST_CASE("t over xi digits match symbolic division") {
    auto ctx = make_ctx(3, 1, 8, 2);
    BdrElement u = constant(ctx, BdrConstant::UnitTOverXi);
    // oracle: t in the alpha+1 truncation divided by xi, exact rationals
    oracle::QPoly tq = oracle::t_series_q(3, 1, 3, 300);
    oracle::QPoly xi = oracle::cyclo_shifted_q(3, 1);
    // long division: tq = xi * quot + rem with rem = 0
    oracle::QPoly quot;
    {
        oracle::QPoly rem = tq;
        quot.assign(rem.size(), oracle::BigRat(0));
        while (static_cast<int>(rem.size()) >= static_cast<int>(xi.size())) {
            oracle::BigRat c = rem.back();
            size_t shift = rem.size() - xi.size();
            quot[shift] = c;
            for (size_t i = 0; i < xi.size(); ++i) rem[shift + i] -= c * xi[i];
            rem = oracle::qpoly_trim(rem);
            if (rem.empty()) break;
        }
        // the series was truncated, so the remainder is only p-adically small
        for (const auto& c : oracle::qpoly_trim(rem)) {
            using boost::multiprecision::numerator;
            using boost::multiprecision::denominator;
            oracle::BigInt num = numerator(c);
            int val = 0;
            while (num != 0 && num % 3 == 0) { num /= 3; ++val; }
            REQUIRE((c == 0 || val >= 10));
        }
        quot = oracle::qpoly_trim(quot);
    }
    // compare only the digits the truncated model keeps (degree < 2*phi)
    oracle::QPoly mod = oracle::qpoly_pow(xi, 2);
    CHECK(oracle::bdr_matches_qpoly(u, oracle::qpoly_mod(quot, mod), 6));
}

TEST_CASE("division by t") {
    auto ctx = make_ctx(5, 2, 12, 3);
    Rng rng(99);
    BdrElement t = constant(ctx, BdrConstant::T);
    for (int i = 0; i < 20; ++i) {
        BdrElement x = random_bdr(rng, ctx);
        BdrElement q = divide_by_t(t * x, 1);
        CHECK(q.ctx()->prof.alpha == 2);
        // q == x in the alpha-1 ring
        BdrElement x_low = divide_by_t(t * x, 1);
        CHECK(eq(q, x_low));
    }
    // t^2 / t = t at alpha = 3 -> lives in alpha = 2
    BdrElement q2 = divide_by_t(t * t, 1);
    CHECK(eq(q2, constant(q2.ctx(), BdrConstant::T)));
    // (t mu)/t = mu mod xi^2 at p=3, k=1, alpha=3
    auto ctx3 = make_ctx(3, 1, 12, 3);
    BdrElement tm = constant(ctx3, BdrConstant::T) * constant(ctx3, BdrConstant::Mu);
    BdrElement q3 = divide_by_t(tm, 1);
    CHECK(eq(q3, constant(q3.ctx(), BdrConstant::Mu)));
}

TEST_CASE("level raise is a tower map") {
    auto src = make_ctx(3, 1, 10, 2);
    auto dst = make_ctx(3, 2, 10, 2);
    // 0 -> 0
    CHECK(level_raise(BdrElement::zero(src), dst).is_zero());
    // q^(1/p^k) at level k maps to the p-th power of the next root
    BdrElement raised = level_raise(q_root(src, 1), dst);
    CHECK(eq(raised, q_root(dst, 1)));
    CHECK(eq(raised, pow(q_root(dst, 2), 3)));
    // ring homomorphism on samples
    Rng rng(7);
    for (int i = 0; i < 25; ++i) {
        BdrElement a = random_bdr(rng, src), b = random_bdr(rng, src);
        CHECK(eq(level_raise(a * b, dst), level_raise(a, dst) * level_raise(b, dst)));
        CHECK(eq(level_raise(a + b, dst), level_raise(a, dst) + level_raise(b, dst)));
    }
    // theta-compatibility of the xi image: evaluate Phi_{p^k} at the raised
    // generator inside the level-(k+1) coefficient ring
    BdrElement xi_raised = level_raise(constant(src, BdrConstant::Xi), dst);
    CycloElement lhs = theta(xi_raised);
    auto cyc = dst->theta_ctx;
    CycloElement x = CycloElement::one(cyc) + CycloElement::gen(cyc);
    CycloElement xp = x * x * x;  // (1+y)^p, p = 3
    CycloElement rhs = xp * xp + xp + CycloElement::one(cyc);  // Phi_3 at (1+y)^p
    CHECK(eq(lhs, rhs));
}

TEST_CASE("metamorphic digit agreement across N and N+4") {
    for (u64 p : {3ull, 5ull}) {
        auto lo = make_ctx(p, 2, 12, 3);
        auto hi = make_ctx(p, 2, 16, 3);
        CHECK(agree_at_overlap(constant(lo, BdrConstant::T), constant(hi, BdrConstant::T)));
        CHECK(agree_at_overlap(zeta(lo, 2), zeta(hi, 2)));
        CHECK(agree_at_overlap(constant(lo, BdrConstant::UnitTOverXi),
                               constant(hi, BdrConstant::UnitTOverXi)));
        // the same integral expression evaluated at both digit budgets
        auto build = [](const std::shared_ptr<const BdrContext>& c) {
            BdrElement z = BdrElement::gen(c);
            BdrElement x = pow(BdrElement::from_int(c, 3) + z, 4) +
                           BdrElement::from_int(c, static_cast<i64>(c->prof.p)) * z * z;
            return x * constant(c, BdrConstant::T) + exp_small(constant(c, BdrConstant::Xi) * x);
        };
        CHECK(agree_at_overlap(build(lo), build(hi)));
    }
}
