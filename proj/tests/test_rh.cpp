#include "doctest.h"

#include "qpr/normal_forms.hpp"
#include "qpr/rng.hpp"

using namespace qpr;

namespace {

PrecisionProfile prof_small(u64 p = 5, int k = 1, int N = 12, int alpha = 3) {
    PrecisionProfile prof;
    prof.p = p;
    prof.k = k;
    prof.N = N;
    prof.alpha = alpha;
    prof.s = 1;
    prof.n_max = k;
    return prof;
}

GammaVector gv(std::vector<i64> a) { return GammaVector(std::move(a)); }

TConnection zero_connection(const std::shared_ptr<const BdrContext>& ctx, int d, int r) {
    TConnection n;
    n.d = d;
    n.r = r;
    for (int i = 0; i < d; ++i) n.mats.push_back(ToricMat(r, r, ToricElement::zero(ctx, d)));
    return n;
}

} // namespace

TEST_CASE("cocycle check basics") {
    auto ctx = BdrContext::make(prof_small());
    const int d = 2, r = 2;
    Cocycle idc{d, r, 0, TwistTag::ExpDerivation,
                {toric_identity(ctx, d, r), toric_identity(ctx, d, r)}};
    CHECK(cocycle_check(idc).ok);

    Cocycle one_gen{1, r, 0, TwistTag::ExpDerivation, {toric_identity(ctx, 1, r)}};
    CHECK(cocycle_check(one_gen).ok);  // vacuous

    // constant non-commuting residues fail with a nonzero residual
    ToricMat m1 = toric_identity(ctx, d, r);
    ToricMat m2 = toric_identity(ctx, d, r);
    m1.at(0, 1) = ToricElement::constant(d, BdrElement::one(ctx));
    m2.at(1, 0) = ToricElement::constant(d, BdrElement::one(ctx));
    Cocycle bad{d, r, 0, TwistTag::ExpDerivation, {m1, m2}};
    auto res = cocycle_check(bad);
    CHECK(!res.ok);
    CHECK(!mat_is_zero(res.residuals[0]));
}

TEST_CASE("cocycle evaluation") {
    Cocycle c = random_cocycle(91, 2, 2, 1, prof_small());
    REQUIRE(cocycle_check(c).ok);
    const auto& ctx = c.mats[0].at(0, 0).ctx();
    CHECK(mat_eq(cocycle_eval(c, gv({0, 0})), toric_identity(ctx, 2, 2)));
    CHECK(mat_eq(cocycle_eval(c, gv({5, 0})), c.mats[0]));
    CHECK(mat_eq(cocycle_eval(c, gv({0, 5})), c.mats[1]));
    // cocycle rule at 2 beta_1
    ToricMat twice = mat_mul(c.mats[0], act(c.twist, c.beta(1), c.mats[0]));
    CHECK(mat_eq(cocycle_eval(c, gv({10, 0})), twice));
    // outside the domain
    CHECK_THROWS_AS(cocycle_eval(c, gv({1, 0})), DomainViolation);
    // twisted inverse: eval at beta then its negative multiplies to I
    ToricMat pos = cocycle_eval(c, gv({5, 0}));
    ToricMat neg = cocycle_eval(c, gv({-5, 0}));
    CHECK(mat_eq(mat_mul(neg, act(c.twist, gv({-5, 0}), pos)), toric_identity(ctx, 2, 2)));
}

TEST_CASE("operator log is additive in the translate") {
    Cocycle c = random_cocycle(17, 1, 2, 1, prof_small());
    const auto& ctx = c.mats[0].at(0, 0).ctx();
    const int margin = ctx->prof.log_exp_margin;
    ToricMat l1 = operator_log(c.mats[0], c.twist, c.beta(1), margin);
    ToricMat phi2 = cocycle_eval(c, gv({10}));
    ToricMat l2 = operator_log(phi2, c.twist, c.beta(1).scaled(2), margin);
    CHECK(mat_eq(l2, mat_add(l1, l1)));
}

TEST_CASE("log of the identity cocycle vanishes and scalar logs match the series") {
    auto ctx = BdrContext::make(prof_small());
    const int d = 1;
    Cocycle idc{d, 1, 0, TwistTag::ExpDerivation, {toric_identity(ctx, d, 1)}};
    TConnection n = log_correspondence(idc);
    CHECK(mat_is_zero(n.mats[0]));

    // d=1, r=1, level 1: Phi = exp(p c0 t) constant; the matrix route must
    // agree with the scalar series route, and phi = c0 t
    BdrElement c0 = BdrElement::from_int(ctx, 3);
    BdrElement t = constant(ctx, BdrConstant::T);
    BdrElement val = exp_small(BdrElement::from_int(ctx, 5) * c0 * t);
    Cocycle sc{1, 1, 1, TwistTag::ExpDerivation, {ToricMat(1, 1, ToricElement::constant(1, val))}};
    TConnection out = log_correspondence(sc);
    BdrElement phi = out.mats[0].at(0, 0).constant_coeff();
    CHECK(eq(phi, c0 * t));
    CHECK(eq(phi, log_near_one(val).div_pow_p(1)));
}

TEST_CASE("exp of the zero connection is the identity cocycle") {
    auto ctx = BdrContext::make(prof_small());
    Cocycle c = exp_correspondence(zero_connection(ctx, 2, 2), 1);
    CHECK(mat_eq(c.mats[0], toric_identity(ctx, 2, 2)));
    CHECK(mat_eq(c.mats[1], toric_identity(ctx, 2, 2)));
}

TEST_CASE("exp of constant commuting matrices matches the scalar series blockwise") {
    auto ctx = BdrContext::make(prof_small());
    const int d = 2, r = 2;
    TConnection n = zero_connection(ctx, d, r);
    std::vector<i64> diag = {3, -2};
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < r; ++a)
            n.mats[static_cast<size_t>(i)].at(a, a) = ToricElement::constant(
                d, BdrElement::from_int(ctx, diag[static_cast<size_t>(a)] * (i + 1) * 25));
    REQUIRE(integrability_check(n).ok);
    Cocycle c = exp_correspondence(n, 0);
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < r; ++a) {
            BdrElement expect = exp_small(BdrElement::from_int(ctx, diag[static_cast<size_t>(a)] * (i + 1) * 25));
            CHECK(eq(c.mats[static_cast<size_t>(i)].at(a, a).constant_coeff(), expect));
        }
}

TEST_CASE("integrability check") {
    auto ctx = BdrContext::make(prof_small());
    const int d = 2, r = 2;
    TConnection n = zero_connection(ctx, d, r);
    n.mats[0].at(0, 0) = ToricElement::constant(d, BdrElement::from_int(ctx, 25));
    n.mats[1].at(1, 1) = ToricElement::constant(d, BdrElement::from_int(ctx, 50));
    CHECK(integrability_check(n).ok);

    TConnection bad = zero_connection(ctx, d, r);
    bad.mats[0].at(0, 1) = ToricElement::constant(d, BdrElement::one(ctx));
    bad.mats[1].at(1, 0) = ToricElement::constant(d, BdrElement::one(ctx));
    auto res = integrability_check(bad);
    CHECK(!res.ok);
    CHECK(!mat_is_zero(res.residuals[0]));
    CHECK_THROWS_AS(exp_correspondence(bad, 3), NotIntegrable);
}

TEST_CASE("roundtrip: log after exp recovers the connection") {
    for (u64 seed = 1; seed <= 12; ++seed) {
        PrecisionProfile prof = seed % 2 ? prof_small(5, 1, 12, 3) : prof_small(3, 2, 12, 2);
        auto ctx = BdrContext::make(prof);
        Rng rng(seed * 977);
        int d = 1 + static_cast<int>(rng.below(2));
        int r = 1 + static_cast<int>(rng.below(3));
        TConnection n = random_connection(rng, ctx, d, r);
        REQUIRE(integrability_check(n).ok);
        int level = std::max(static_cast<int>(rng.below(2)), min_exp_level(n));
        Cocycle c = exp_correspondence(n, level);
        CHECK(cocycle_check(c).ok);
        TConnection back = log_correspondence(c);
        for (int i = 0; i < d; ++i)
            CHECK(mat_eq(back.mats[static_cast<size_t>(i)], n.mats[static_cast<size_t>(i)]));
    }
}

TEST_CASE("roundtrip: exp after log recovers the cocycle") {
    for (u64 seed = 100; seed < 112; ++seed) {
        PrecisionProfile prof = seed % 2 ? prof_small(5, 1, 12, 3) : prof_small(3, 2, 12, 3);
        Rng sizes(seed);
        int d = 1 + static_cast<int>(sizes.below(2));
        int r = 1 + static_cast<int>(sizes.below(3));
        int level = static_cast<int>(sizes.below(2));
        Cocycle c = random_cocycle(seed, d, r, level, prof);
        REQUIRE(cocycle_check(c).ok);
        TConnection n = log_correspondence(c);
        CHECK(integrability_check(n).ok);
        Cocycle back = exp_correspondence(n, c.level);
        for (int i = 0; i < d; ++i)
            CHECK(mat_eq(back.mats[static_cast<size_t>(i)], c.mats[static_cast<size_t>(i)]));
    }
}

TEST_CASE("gauge transformations") {
    auto ctx = BdrContext::make(prof_small());
    Rng rng(41);
    const int d = 2, r = 2;
    TConnection n = random_connection(rng, ctx, d, r);
    // V = I and scalar constants leave the connection alone
    ToricMat vid = toric_identity(ctx, d, r);
    TConnection same = gauge_transform(n, vid);
    for (int i = 0; i < d; ++i) CHECK(mat_eq(same.mats[static_cast<size_t>(i)], n.mats[static_cast<size_t>(i)]));
    ToricMat vconst = vid;
    for (int a = 0; a < r; ++a)
        vconst.at(a, a) = ToricElement::constant(d, BdrElement::from_int(ctx, 7));
    TConnection same2 = gauge_transform(n, vconst);
    for (int i = 0; i < d; ++i) CHECK(mat_eq(same2.mats[static_cast<size_t>(i)], n.mats[static_cast<size_t>(i)]));
    // composition law
    ToricMat v1 = random_gauge(rng, ctx, d, r);
    ToricMat v2 = random_gauge(rng, ctx, d, r);
    TConnection lhs = gauge_transform(gauge_transform(n, v1), v2);
    TConnection rhs = gauge_transform(n, mat_mul(v1, v2));
    for (int i = 0; i < d; ++i) CHECK(mat_eq(lhs.mats[static_cast<size_t>(i)], rhs.mats[static_cast<size_t>(i)]));
    // gauging preserves integrability
    CHECK(integrability_check(rhs).ok);
}

TEST_CASE("log intertwines the two gauge actions") {
    for (u64 seed = 300; seed < 308; ++seed) {
        PrecisionProfile prof = seed % 2 ? prof_small(5, 1, 12, 3) : prof_small(3, 2, 12, 2);
        auto ctx = BdrContext::make(prof);
        Rng rng(seed);
        int d = 1 + static_cast<int>(rng.below(2));
        int r = 2 + static_cast<int>(rng.below(2));
        Cocycle c = random_cocycle(seed * 31, d, r, 1, prof);
        ToricMat v = random_gauge(rng, ctx, d, r);
        Cocycle gauged = cocycle_gauge(c, v);
        CHECK(cocycle_check(gauged).ok);
        TConnection a = log_correspondence(gauged);
        TConnection b = gauge_transform(log_correspondence(c), v);
        for (int i = 0; i < d; ++i)
            CHECK(mat_eq(a.mats[static_cast<size_t>(i)], b.mats[static_cast<size_t>(i)]));
    }
}

TEST_CASE("toric matrix inversion certifies by verification") {
    auto ctx = BdrContext::make(prof_small());
    Rng rng(71);
    const int d = 2, r = 3;
    for (int i = 0; i < 10; ++i) {
        ToricMat v = random_gauge(rng, ctx, d, r);
        ToricMat vin = toric_mat_inverse(v);
        CHECK(mat_eq(mat_mul(v, vin), toric_identity(ctx, d, r)));
        CHECK(mat_eq(mat_mul(vin, v), toric_identity(ctx, d, r)));
    }
    // a residually singular matrix is rejected
    ToricMat sing(2, 2, ToricElement::zero(ctx, d));
    sing.at(0, 0) = ToricElement::constant(d, BdrElement::from_int(ctx, 5));
    sing.at(1, 1) = ToricElement::constant(d, BdrElement::one(ctx));
    CHECK_THROWS_AS(toric_mat_inverse(sing), NonUnit);
}

TEST_CASE("min_exp_level reports the convergence threshold") {
    auto ctx = BdrContext::make(prof_small());
    const int d = 1, r = 1;
    TConnection n = zero_connection(ctx, d, r);
    n.mats[0].at(0, 0) = ToricElement::constant(d, BdrElement::from_int(ctx, 5));
    CHECK(min_exp_level(n) == 1);
    CHECK_THROWS_AS(exp_correspondence(n, 0), DomainViolation);
    Cocycle c = exp_correspondence(n, 1);
    CHECK(eq(c.mats[0].at(0, 0).constant_coeff(), exp_small(BdrElement::from_int(ctx, 25))));
}
