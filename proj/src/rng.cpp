#include "qpr/rng.hpp"

namespace qpr {

BdrElement random_bdr(Rng& rng, const std::shared_ptr<const BdrContext>& ctx) {
    Scaled v = scaled_zero(ctx->q);
    v.A = ctx->prof.N;
    for (auto& c : v.c) c = rng.below(ctx->q.gr.zq.pN);
    scaled_normalize(ctx->q, v);
    if (ctx->q.is_zero_raw(v.c)) return BdrElement::zero(ctx);
    v.A = ctx->prof.N;
    return BdrElement(ctx, v);
}

BdrElement random_bdr_unit(Rng& rng, const std::shared_ptr<const BdrContext>& ctx) {
    for (int tries = 0; tries < 64; ++tries) {
        BdrElement x = random_bdr(rng, ctx);
        if (x.is_unit()) return x;
    }
    return BdrElement::one(ctx);
}

BdrElement random_bdr_kernel(Rng& rng, const std::shared_ptr<const BdrContext>& ctx) {
    return constant(ctx, BdrConstant::Xi) * random_bdr(rng, ctx);
}

CycloElement random_cyclo(Rng& rng, const std::shared_ptr<const CycloContext>& ctx) {
    Scaled v = scaled_zero(ctx->q);
    v.A = ctx->desc.N;
    for (auto& c : v.c) c = rng.below(ctx->q.gr.zq.pN);
    scaled_normalize(ctx->q, v);
    if (ctx->q.is_zero_raw(v.c)) return CycloElement::zero(ctx);
    v.A = ctx->desc.N;
    return CycloElement(ctx, v);
}

CycloElement random_cyclo_unit(Rng& rng, const std::shared_ptr<const CycloContext>& ctx) {
    for (int tries = 0; tries < 64; ++tries) {
        CycloElement x = random_cyclo(rng, ctx);
        if (!x.is_zero() && ctx->q.is_unit_raw(x.raw().c)) return x;
    }
    return CycloElement::one(ctx);
}

ToricElement random_toric(Rng& rng, const std::shared_ptr<const BdrContext>& ctx, int d, int level,
                          int max_terms) {
    ToricElement acc = ToricElement::zero(ctx, d);
    int nterms = 1 + static_cast<int>(rng.below(static_cast<u64>(max_terms)));
    for (int i = 0; i < nterms; ++i) {
        std::vector<i64> key(static_cast<size_t>(d));
        for (auto& c : key) c = rng.range(-2, 2);
        acc = acc + ToricElement::monomial(d, level, key, random_bdr(rng, ctx));
    }
    return acc;
}

ToricMat random_gauge(Rng& rng, const std::shared_ptr<const BdrContext>& ctx, int d, int r) {
    const int margin = ctx->prof.log_exp_margin;
    BdrMat base = bdr_mat_identity(ctx, r);
    for (int i = 0; i < r; ++i)
        base.at(i, i) = BdrElement::from_int(
            ctx, 1 + static_cast<i64>(ctx->prof.p) * rng.range(0, static_cast<i64>(ctx->prof.p)));
    if (r > 1) {
        int a = static_cast<int>(rng.below(static_cast<u64>(r)));
        int b = static_cast<int>(rng.below(static_cast<u64>(r)));
        if (a != b) base.at(a, b) = BdrElement::from_int(ctx, rng.range(-2, 2));
    }
    ToricMat v = toric_embed(base, d);
    // one small monomial perturbation
    int i = static_cast<int>(rng.below(static_cast<u64>(r)));
    int j = static_cast<int>(rng.below(static_cast<u64>(r)));
    std::vector<i64> key(static_cast<size_t>(d), 0);
    key[rng.below(static_cast<u64>(d))] = rng.range(-1, 1);
    int level = static_cast<int>(rng.below(static_cast<u64>(ctx->prof.n_max + 1)));
    BdrElement coeff = rng.below(2) == 0
                           ? BdrElement::from_int(ctx, rng.range(1, 3)).div_pow_p(-margin)
                           : constant(ctx, BdrConstant::T) * BdrElement::from_int(ctx, rng.range(1, 3));
    ToricElement s = ToricElement::monomial(d, level, key, coeff);
    v.at(i, j) = v.at(i, j) + s;
    return v;
}

TConnection random_connection(Rng& rng, const std::shared_ptr<const BdrContext>& ctx, int d, int r) {
    const int margin = ctx->prof.log_exp_margin;
    TConnection n;
    n.d = d;
    n.r = r;
    BdrElement t_const = constant(ctx, BdrConstant::T);
    for (int i = 0; i < d; ++i) {
        BdrMat diag = bdr_mat_identity(ctx, r);
        for (int a = 0; a < r; ++a) {
            BdrElement c = BdrElement::from_int(ctx, rng.range(-3, 3)).div_pow_p(-margin);
            if (rng.below(2) == 0) c = c + t_const * BdrElement::from_int(ctx, rng.range(-2, 2));
            diag.at(a, a) = c;
        }
        n.mats.push_back(toric_embed(diag, d));
    }
    ToricMat v = random_gauge(rng, ctx, d, r);
    return gauge_transform(n, v);
}

Cocycle random_cocycle(u64 seed, int d, int r, int level, const PrecisionProfile& profile) {
    if (d > 3 || r > 4) throw DomainViolation("generator sized for d <= 3, r <= 4");
    Rng rng(seed);
    auto ctx = BdrContext::make(profile);
    TConnection n = random_connection(rng, ctx, d, r);
    int m = std::max(level, min_exp_level(n));
    return exp_correspondence(n, m);
}

} // namespace qpr
