#include "doctest.h"

#include "qpr/rng.hpp"
#include "qpr/toric.hpp"

using namespace qpr;

namespace {

std::shared_ptr<const BdrContext> make_ctx(u64 p, int k, int N, int alpha) {
    PrecisionProfile prof;
    prof.p = p;
    prof.k = k;
    prof.N = N;
    prof.alpha = alpha;
    prof.s = 1;
    prof.n_max = k;
    return BdrContext::make(prof);
}

GammaVector gv(std::vector<i64> a) { return GammaVector(std::move(a)); }

} // namespace

TEST_CASE("laurent basics") {
    auto ctx = make_ctx(5, 2, 12, 3);
    const int d = 2;
    ToricElement t1 = ToricElement::variable(ctx, d, 1);
    ToricElement t1inv = ToricElement::variable(ctx, d, 1, -1);
    ToricElement one = ToricElement::constant(d, BdrElement::one(ctx));
    CHECK(eq(t1 * t1inv, one));

    ToricElement t2 = ToricElement::variable(ctx, d, 2);
    ToricElement lhs = (t1 + t2) * (t1 + t2);
    ToricElement two = ToricElement::constant(d, BdrElement::from_int(ctx, 2));
    ToricElement rhs = t1 * t1 + two * t1 * t2 + t2 * t2;
    CHECK(eq(lhs, rhs));

    // coefficient nilpotence kills monomials
    BdrElement xi = constant(ctx, BdrConstant::Xi);
    ToricElement dead = ToricElement::constant(d, pow(xi, 3)) * t1;
    CHECK(dead.is_zero());
}

TEST_CASE("galois action on roots of the variables") {
    auto ctx = make_ctx(5, 2, 12, 3);
    const int d = 2;
    // gamma_1 (T_1^(1/p)) = zeta(1) T_1^(1/p)
    ToricElement t1_root = ToricElement::monomial(d, 1, {1, 0}, BdrElement::one(ctx));
    ToricElement acted = galois_act(gv({1, 0}), t1_root);
    CHECK(eq(acted, zeta(ctx, 1) * t1_root));
    // gamma_2 fixes T_1
    ToricElement t1 = ToricElement::variable(ctx, d, 1);
    CHECK(eq(galois_act(gv({0, 1}), t1), t1));
    // p^n gamma_1 fixes every level-n element
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        ToricElement x = random_toric(rng, ctx, d, 1, 3);
        CHECK(eq(galois_act(gv({5, 0}), x), x));
    }
}

TEST_CASE("galois action is a group action by ring automorphisms") {
    auto ctx = make_ctx(3, 2, 12, 3);
    Rng rng(17);
    const int d = 2;
    for (int i = 0; i < 30; ++i) {
        ToricElement x = random_toric(rng, ctx, d, 2, 2);
        ToricElement y = random_toric(rng, ctx, d, 2, 2);
        GammaVector g1 = gv({rng.range(-2, 2), rng.range(-2, 2)});
        GammaVector g2 = gv({rng.range(-2, 2), rng.range(-2, 2)});
        CHECK(eq(galois_act(g1, x * y), galois_act(g1, x) * galois_act(g1, y)));
        CHECK(eq(galois_act(g1 + g2, x), galois_act(g1, galois_act(g2, x))));
    }
}

TEST_CASE("derivation acts by t times the exponent pairing") {
    auto ctx = make_ctx(5, 2, 12, 3);
    const int d = 2;
    BdrElement t = constant(ctx, BdrConstant::T);
    ToricElement t1 = ToricElement::variable(ctx, d, 1);
    CHECK(eq(partial_gamma(gv({1, 0}), t1), t * t1));
    // constants die
    ToricElement c = ToricElement::constant(d, BdrElement::from_int(ctx, 7));
    CHECK(partial_gamma(gv({1, 0}), c).is_zero());
    // exponent scaling with p inverted
    ToricElement t1_root = ToricElement::monomial(d, 1, {1, 0}, BdrElement::one(ctx));
    CHECK(eq(partial_gamma(gv({1, 0}), t1_root), (t.div_pow_p(1)) * t1_root));
}

TEST_CASE("derivation satisfies Leibniz") {
    auto ctx = make_ctx(3, 2, 12, 3);
    Rng rng(23);
    const int d = 2;
    for (int i = 0; i < 40; ++i) {
        ToricElement x = random_toric(rng, ctx, d, 1, 2);
        ToricElement y = random_toric(rng, ctx, d, 1, 2);
        GammaVector g = gv({rng.range(-2, 2), rng.range(-2, 2)});
        CHECK(eq(partial_gamma(g, x * y),
                 partial_gamma(g, x) * y + x * partial_gamma(g, y)));
    }
}

TEST_CASE("exp of the derivation") {
    auto ctx = make_ctx(5, 2, 12, 3);
    const int d = 2;
    ToricElement c = ToricElement::constant(d, BdrElement::from_int(ctx, 9));
    CHECK(eq(exp_derivation_act(gv({1, 1}), c), c));
    // exp(partial_1) T_1 = exp(t) T_1 = q T_1
    ToricElement t1 = ToricElement::variable(ctx, d, 1);
    ToricElement got = exp_derivation_act(gv({1, 0}), t1);
    CHECK(eq(got, constant(ctx, BdrConstant::Q) * t1));
    // independent route: finite series sum_j partial^j / j!
    ToricElement series = ToricElement::zero(ctx, d);
    ToricElement cur = t1;
    i64 fact = 1;
    for (int j = 0; j <= ctx->prof.alpha; ++j) {
        if (j > 0) {
            cur = partial_gamma(gv({1, 0}), cur);
            fact *= j;
        }
        series = series + cur.div_int(fact);
    }
    CHECK(eq(got, series));
}

TEST_CASE("the two actions commute and compose to the natural action") {
    auto ctx = make_ctx(3, 2, 12, 3);
    Rng rng(31);
    const int d = 2;
    // natural(gamma_1, T_1) = q T_1 (level zero: the galois factor is trivial)
    ToricElement t1 = ToricElement::variable(ctx, d, 1);
    CHECK(eq(natural_act(gv({1, 0}), t1), constant(ctx, BdrConstant::Q) * t1));
    // natural(gamma_1, T_1^(1/p^n)) = q_root(n) T_1^(1/p^n)
    for (int n = 1; n <= 2; ++n) {
        ToricElement root = ToricElement::monomial(d, n, {1, 0}, BdrElement::one(ctx));
        CHECK(eq(natural_act(gv({1, 0}), root), q_root(ctx, n) * root));
    }
    for (int i = 0; i < 100; ++i) {
        ToricElement x = random_toric(rng, ctx, d, 2, 2);
        GammaVector g = gv({rng.range(-2, 2), rng.range(-2, 2)});
        ToricElement a = galois_act(g, exp_derivation_act(g, x));
        ToricElement b = exp_derivation_act(g, galois_act(g, x));
        CHECK(eq(a, b));
        CHECK(eq(natural_act(g, x), a));
    }
}

TEST_CASE("analytic vectors: p^n gamma acts through the derivation alone") {
    auto ctx = make_ctx(5, 2, 12, 3);
    Rng rng(41);
    const int d = 2;
    for (int i = 0; i < 25; ++i) {
        int n = 1 + static_cast<int>(rng.below(2));
        ToricElement x = random_toric(rng, ctx, d, n, 2);
        i64 pn = 1;
        for (int j = 0; j < n; ++j) pn *= 5;
        GammaVector g = gv({pn * rng.range(-1, 1), pn * rng.range(-1, 1)});
        CHECK(eq(galois_act(g, x), x));
        CHECK(eq(natural_act(g, x), exp_derivation_act(g, x)));
    }
}

TEST_CASE("normalized trace projects onto the coarser level") {
    auto ctx = make_ctx(5, 2, 12, 3);
    const int d = 2;
    ToricElement t1 = ToricElement::variable(ctx, d, 1);
    CHECK(eq(normalized_trace(0, t1), t1));
    ToricElement mixed =
        ToricElement::constant(d, BdrElement::from_int(ctx, 3)) * t1 +
        ToricElement::monomial(d, 1, {1, 5}, BdrElement::one(ctx));
    ToricElement head = normalized_trace(0, mixed);
    CHECK(eq(head, ToricElement::constant(d, BdrElement::from_int(ctx, 3)) * t1));
    auto [h, tail] = trace_complement(0, mixed);
    CHECK(eq(h + tail, mixed));
    CHECK(normalized_trace(0, tail).is_zero());
}

TEST_CASE("trace properties on random elements") {
    auto ctx = make_ctx(3, 2, 12, 3);
    Rng rng(59);
    const int d = 2;
    for (int i = 0; i < 30; ++i) {
        int n = 1 + static_cast<int>(rng.below(2));
        int np = static_cast<int>(rng.below(static_cast<u64>(n + 1)));
        ToricElement x = random_toric(rng, ctx, d, n, 3);
        ToricElement once = normalized_trace(np, x);
        CHECK(eq(normalized_trace(np, once), once));  // idempotent
        // commutes with the galois action
        GammaVector g = gv({rng.range(-2, 2), rng.range(-2, 2)});
        CHECK(eq(normalized_trace(np, galois_act(g, x)), galois_act(g, normalized_trace(np, x))));
        // linear over coarser-level elements
        ToricElement a = random_toric(rng, ctx, d, np, 2);
        CHECK(eq(normalized_trace(np, a * x), a * once));
    }
}

TEST_CASE("averaging realizes the trace") {
    auto ctx = make_ctx(3, 2, 12, 3);
    Rng rng(61);
    const int d = 2;
    // kills fractional monomials outright
    ToricElement frac = ToricElement::monomial(d, 1, {1, 0}, BdrElement::one(ctx));
    CHECK(galois_average(1, frac).is_zero());
    // level-zero elements are fixed
    ToricElement t1 = ToricElement::variable(ctx, d, 1);
    CHECK(eq(galois_average(1, t1), t1));
    for (int i = 0; i < 100; ++i) {
        int n = 1 + static_cast<int>(rng.below(2));
        ToricElement x = random_toric(rng, ctx, d, n, 2);
        CHECK(eq(galois_average(n, x), normalized_trace(0, x)));
    }
    // idempotent as a projector on random inputs
    for (int i = 0; i < 50; ++i) {
        ToricElement x = random_toric(rng, ctx, d, 1, 2);
        ToricElement once = galois_average(1, x);
        CHECK(eq(galois_average(1, once), once));
    }
}

TEST_CASE("level cap is enforced") {
    auto ctx = make_ctx(3, 1, 12, 2);  // n_max = k = 1
    const int d = 1;
    ToricElement deep = ToricElement::monomial(d, 2, {1}, BdrElement::one(ctx));
    CHECK_THROWS_AS(galois_act(gv({1}), deep), LevelExceedsK);
}

TEST_CASE("the two actions coincide when the kernel is trivial") {
    // alpha = 1: t = 0, so exp of the derivation is the identity
    auto ctx = make_ctx(5, 2, 12, 1);
    Rng rng(71);
    const int d = 2;
    for (int i = 0; i < 25; ++i) {
        ToricElement x = random_toric(rng, ctx, d, 2, 3);
        GammaVector g = gv({rng.range(-2, 2), rng.range(-2, 2)});
        CHECK(eq(exp_derivation_act(g, x), x));
        CHECK(eq(natural_act(g, x), galois_act(g, x)));
    }
}
