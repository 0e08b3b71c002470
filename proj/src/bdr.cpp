#include "qpr/bdr.hpp"

#include <algorithm>

namespace qpr {

namespace {

int vp_of(u64 p, u64 j) {
    int v = 0;
    while (j % p == 0) {
        j /= p;
        ++v;
    }
    return v;
}

i64 vp_factorial(u64 p, u64 j) {
    // Legendre
    i64 v = 0;
    u64 q = p;
    while (q <= j) {
        v += static_cast<i64>(j / q);
        if (q > j / p) break;
        q *= p;
    }
    return v;
}

std::vector<GrElt> gr_poly_pow(const GrCtx& gr, std::vector<GrElt> base, u64 e) {
    auto poly_mul = [&](const std::vector<GrElt>& a, const std::vector<GrElt>& b) {
        std::vector<GrElt> r(a.size() + b.size() - 1, gr.zero());
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j)
                r[i + j] = gr.add(r[i + j], gr.mul(a[i], b[j]));
        return r;
    };
    std::vector<GrElt> acc = {gr.one()};
    while (e) {
        if (e & 1) acc = poly_mul(acc, base);
        base = poly_mul(base, base);
        e >>= 1;
    }
    return acc;
}

std::vector<GrElt> to_gr_list(const QuotCtx& q, const std::vector<u64>& c) {
    std::vector<GrElt> r(q.deg);
    for (int i = 0; i < q.deg; ++i) r[i] = q.coeff(c, i);
    return r;
}

std::vector<u64> from_gr_list(const QuotCtx& q, const std::vector<GrElt>& list) {
    std::vector<u64> r = q.zero();
    for (int i = 0; i < std::min<int>(q.deg, static_cast<int>(list.size())); ++i)
        q.set_coeff(r, i, list[i]);
    return r;
}

/// Suffix minimum of a tail bound, for stopping a series once every later
/// term provably sits above the digits still being claimed.
std::vector<i64> suffix_min(std::vector<i64> bounds) {
    for (size_t i = bounds.size() - 1; i-- > 0;)
        bounds[i] = std::min(bounds[i], bounds[i + 1]);
    return bounds;
}

i64 claim_of(const QuotCtx& q, const Scaled& acc, i64 cap) {
    return std::min(scaled_abs_prec(acc), cap);
}

/// t = p^k * sum_{j>=1} (-1)^(j+1) z^j / j, summed until the tail bound
/// v_p(p^k z^j / j mod xi^alpha) >= k + floor(j/phi) - alpha + 1 - v_p(j)
/// clears every digit still claimed by the accumulator.
Scaled t_series(const QuotCtx& q, u64 p, int k, int alpha, u64 phi) {
    const int N = q.gr.zq.N;
    const i64 target = static_cast<i64>(N) + k + 2;
    u64 jcap = phi * static_cast<u64>(target + alpha + 24) + 128;
    std::vector<i64> bound(jcap + 2, kExactPrec);
    for (u64 j = 1; j <= jcap; ++j)
        bound[j] = k + std::max<i64>(0, static_cast<i64>(j / phi) - (alpha - 1)) - vp_of(p, j);
    std::vector<i64> tail = suffix_min(std::move(bound));
    Scaled z = scaled_zero(q);
    z.A = N;
    z.c[static_cast<size_t>(q.gr.s)] = 1;
    Scaled acc = scaled_zero(q);
    Scaled zpow = scaled_one(q);
    i64 pk = 1;
    for (int i = 0; i < k; ++i) pk *= static_cast<i64>(p);
    for (u64 j = 1; j <= jcap; ++j) {
        if (tail[j] >= claim_of(q, acc, target)) break;
        zpow = scaled_mul(q, zpow, z);
        if (q.is_zero_raw(zpow.c)) break;  // exact-zero powers stay zero
        Scaled term = scaled_mul_int(q, scaled_div_int(q, zpow, static_cast<i64>(j)), pk);
        if (j % 2 == 0) term = scaled_neg(q, term);
        acc = scaled_add(q, acc, term);
    }
    return acc;
}

/// Valuation of the reduction modulo xi (the theta image), at the scale of x.
i64 theta_val(const QuotCtx& q, const std::vector<GrElt>& xi_poly, const Scaled& x) {
    std::vector<GrElt> quot, rem;
    gr_poly_divrem_monic(q.gr, to_gr_list(q, x.c), xi_poly, quot, rem);
    int v = q.gr.zq.N;
    for (const auto& g : rem) v = std::min(v, q.gr.content(g));
    if (v >= q.gr.zq.N) return kExactPrec;
    return v - x.e;
}

Scaled scaled_exp_small(const QuotCtx& q, const std::vector<GrElt>& xi_poly, int alpha,
                        int margin, const Scaled& x) {
    if (scaled_abs_prec(x) <= 0) throw PrecisionExhausted("exp argument has no digits left");
    if (theta_val(q, xi_poly, x) < std::min<i64>(margin, scaled_abs_prec(x)))
        throw DomainViolation("exp argument not small modulo the kernel");
    const u64 p = q.gr.zq.p;
    const i64 target = static_cast<i64>(q.gr.zq.N) + 2 * alpha + 8;
    u64 jcap = 8 * static_cast<u64>(target) + 64;
    std::vector<i64> bound(jcap + 2, kExactPrec);
    for (u64 j = 1; j <= jcap; ++j)
        bound[j] = (static_cast<i64>(j) >= alpha ? (static_cast<i64>(j) - alpha + 1) * margin : 0)
                   - vp_factorial(p, j);
    std::vector<i64> tail = suffix_min(std::move(bound));
    Scaled acc = scaled_one(q);
    Scaled term = scaled_one(q);
    for (u64 j = 1; j <= jcap; ++j) {
        if (tail[j] >= claim_of(q, acc, target)) break;
        term = scaled_div_int(q, scaled_mul(q, term, x), static_cast<i64>(j));
        if (q.is_zero_raw(term.c)) break;  // kernel powers vanish exactly
        acc = scaled_add(q, acc, term);
    }
    return acc;
}

Scaled scaled_log_near_one(const QuotCtx& q, const std::vector<GrElt>& xi_poly, int alpha,
                           int margin, const Scaled& u) {
    if (scaled_abs_prec(u) <= 0) throw PrecisionExhausted("log argument has no digits left");
    Scaled x = scaled_sub(q, u, scaled_one(q));
    if (theta_val(q, xi_poly, x) < std::min<i64>(margin, scaled_abs_prec(x)))
        throw DomainViolation("log argument not congruent to 1 modulo the kernel");
    const u64 p = q.gr.zq.p;
    const i64 target = static_cast<i64>(q.gr.zq.N) + 2 * alpha + 8;
    u64 jcap = 8 * static_cast<u64>(target) + 64;
    std::vector<i64> bound(jcap + 2, kExactPrec);
    for (u64 j = 1; j <= jcap; ++j)
        bound[j] = (static_cast<i64>(j) >= alpha ? (static_cast<i64>(j) - alpha + 1) * margin : 0)
                   - vp_of(p, j);
    std::vector<i64> tail = suffix_min(std::move(bound));
    Scaled acc = scaled_zero(q);
    Scaled xpow = scaled_one(q);
    for (u64 j = 1; j <= jcap; ++j) {
        if (tail[j] >= claim_of(q, acc, target)) break;
        xpow = scaled_mul(q, xpow, x);
        if (q.is_zero_raw(xpow.c)) break;
        Scaled term = scaled_div_int(q, xpow, static_cast<i64>(j));
        if (j % 2 == 0) term = scaled_neg(q, term);
        acc = scaled_add(q, acc, term);
    }
    return acc;
}

} // namespace

void PrecisionProfile::validate() const {
    coeff_descriptor().validate();
    if (alpha < 1) throw DomainViolation("alpha must be >= 1");
    if (n_max < 0 || n_max > k) throw DomainViolation("n_max must lie in [0, k]");
    if (log_exp_margin < 2) throw DomainViolation("log/exp margin must be >= 2");
}

std::shared_ptr<const BdrContext> BdrContext::make(const PrecisionProfile& p) {
    p.validate();
    auto ctx = std::make_shared<BdrContext>();
    ctx->prof = p;
    GrCtx gr(ZqCtx(p.p, p.N), p.s);
    u64 phi = 1;
    for (int i = 1; i < p.k; ++i) phi *= p.p;
    phi *= p.p - 1;
    ctx->phi = phi;
    ctx->xi_poly = cyclotomic_shifted(gr, p.p, p.k);
    ctx->q = QuotCtx(gr, gr_poly_pow(gr, ctx->xi_poly, static_cast<u64>(p.alpha)));
    ctx->theta_ctx = CycloContext::make(p.coeff_descriptor());
    if (p.alpha > 1) {
        PrecisionProfile low = p;
        low.alpha = p.alpha - 1;
        ctx->lower = make(low);
    }

    const QuotCtx& q = ctx->q;
    Scaled z = scaled_zero(q);
    z.A = p.N;
    z.c[static_cast<size_t>(q.gr.s)] = 1;
    Scaled onep_z = scaled_add(q, z, scaled_one(q));
    ctx->qroot.resize(static_cast<size_t>(p.k) + 1);
    for (int j = 0; j <= p.k; ++j) {
        u64 e = 1;
        for (int i = 0; i < p.k - j; ++i) e *= p.p;
        Scaled acc = scaled_one(q);
        Scaled b = onep_z;
        while (e) {
            if (e & 1) acc = scaled_mul(q, acc, b);
            b = scaled_mul(q, b, b);
            e >>= 1;
        }
        ctx->qroot[static_cast<size_t>(j)] = acc;
    }
    ctx->mu_elt = scaled_sub(q, ctx->qroot[0], scaled_one(q));
    ctx->xi_elt = Scaled{q.reduce(ctx->xi_poly), 0, p.N};
    scaled_normalize(q, ctx->xi_elt);
    ctx->t_elt = t_series(q, p.p, p.k, p.alpha, phi);

    {
        // t/xi computed one level up so the quotient carries all alpha digits
        QuotCtx qplus(gr, gr_poly_pow(gr, ctx->xi_poly, static_cast<u64>(p.alpha) + 1));
        Scaled tplus = t_series(qplus, p.p, p.k, p.alpha + 1, phi);
        std::vector<GrElt> quot, rem;
        gr_poly_divrem_monic(gr, to_gr_list(qplus, tplus.c), ctx->xi_poly, quot, rem);
        {
            Scaled remv{qplus.zero(), tplus.e, tplus.A};
            for (int i = 0; i < std::min<int>(qplus.deg, static_cast<int>(rem.size())); ++i)
                qplus.set_coeff(remv.c, i, rem[static_cast<size_t>(i)]);
            if (!scaled_is_zero(qplus, remv))
                throw Error("internal: t is not divisible by xi");
        }
        Scaled unit{from_gr_list(q, quot), tplus.e, std::min<i64>(tplus.A, p.N)};
        scaled_normalize(q, unit);
        if (!scaled_eq(q, scaled_mul(q, ctx->xi_elt, unit), ctx->t_elt))
            throw Error("internal: t does not factor through xi");
        ctx->unit_t_over_xi = unit;
    }

    ctx->zeta.resize(static_cast<size_t>(p.k) + 1);
    ctx->zeta[0] = scaled_one(q);
    for (int n = 1; n <= p.k; ++n) {
        Scaled arg = scaled_neg(q, scaled_div_pow_p(q, ctx->t_elt, n));
        Scaled en = scaled_exp_small(q, ctx->xi_poly, p.alpha, p.log_exp_margin, arg);
        ctx->zeta[static_cast<size_t>(n)] = scaled_mul(q, ctx->qroot[static_cast<size_t>(n)], en);
    }
    return ctx;
}

BdrElement BdrElement::from_int(const std::shared_ptr<const BdrContext>& ctx, i64 n) {
    return BdrElement(ctx, scaled_from_int(ctx->q, n));
}

BdrElement BdrElement::zero(const std::shared_ptr<const BdrContext>& ctx) {
    return BdrElement(ctx, scaled_zero(ctx->q));
}

BdrElement BdrElement::one(const std::shared_ptr<const BdrContext>& ctx) {
    return BdrElement(ctx, scaled_one(ctx->q));
}

BdrElement BdrElement::gen(const std::shared_ptr<const BdrContext>& ctx) {
    Scaled v = scaled_zero(ctx->q);
    v.A = ctx->prof.N;
    v.c[static_cast<size_t>(ctx->q.gr.s)] = 1;
    return BdrElement(ctx, v);
}

void check_same_ctx(const BdrElement& a, const BdrElement& b) {
    if (!(a.ctx()->prof == b.ctx()->prof)) throw DomainViolation("mixed precision profiles");
}

BdrElement operator+(const BdrElement& a, const BdrElement& b) {
    check_same_ctx(a, b);
    return BdrElement(a.ctx(), scaled_add(a.ctx()->q, a.raw(), b.raw()));
}

BdrElement operator-(const BdrElement& a, const BdrElement& b) {
    check_same_ctx(a, b);
    return BdrElement(a.ctx(), scaled_sub(a.ctx()->q, a.raw(), b.raw()));
}

BdrElement operator*(const BdrElement& a, const BdrElement& b) {
    check_same_ctx(a, b);
    return BdrElement(a.ctx(), scaled_mul(a.ctx()->q, a.raw(), b.raw()));
}

BdrElement operator-(const BdrElement& a) {
    return BdrElement(a.ctx(), scaled_neg(a.ctx()->q, a.raw()));
}

bool BdrElement::is_unit() const { return !is_zero() && ctx_->q.is_unit_raw(v_.c); }

BdrElement BdrElement::inv() const {
    const QuotCtx& q = ctx_->q;
    if (q.is_unit_raw(v_.c)) return BdrElement(ctx_, scaled_inv(q, v_));
    if (is_zero()) throw NonUnit("inverse of zero");
    if (scaled_abs_prec(v_) <= 0) throw PrecisionExhausted("inverse needs positive precision");
    // theta image invertible in the residue model: lift its inverse and refine
    // across the nilpotent kernel by Newton steps
    CycloElement th_inv = theta(*this).inv();
    Scaled x{q.zero(), th_inv.raw().e, th_inv.raw().A};
    std::copy(th_inv.raw().c.begin(), th_inv.raw().c.end(), x.c.begin());
    scaled_normalize(q, x);
    Scaled two = scaled_from_int(q, 2);
    BdrElement one = BdrElement::one(ctx_);
    for (int it = 0; it < 24; ++it) {
        BdrElement cand(ctx_, x);
        if (eq(*this * cand, one)) return cand;
        x = scaled_mul(q, x, scaled_sub(q, two, scaled_mul(q, v_, x)));
    }
    throw NonUnit("inverse iteration did not converge");
}

BdrElement BdrElement::div_int(i64 n) const {
    return BdrElement(ctx_, scaled_div_int(ctx_->q, v_, n));
}

BdrElement BdrElement::div_pow_p(i64 j) const {
    return BdrElement(ctx_, scaled_div_pow_p(ctx_->q, v_, j));
}

bool eq(const BdrElement& a, const BdrElement& b) {
    check_same_ctx(a, b);
    return scaled_eq(a.ctx()->q, a.raw(), b.raw());
}

i64 content_valuation(const BdrElement& a) { return scaled_val(a.ctx()->q, a.raw()); }

BdrElement pow(const BdrElement& a, u64 e) {
    BdrElement acc = BdrElement::one(a.ctx());
    BdrElement b = a;
    while (e) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

CycloElement theta(const BdrElement& a) {
    const auto& ctx = a.ctx();
    std::vector<GrElt> quot, rem;
    gr_poly_divrem_monic(ctx->q.gr, to_gr_list(ctx->q, a.raw().c), ctx->xi_poly, quot, rem);
    Scaled r{from_gr_list(ctx->theta_ctx->q, rem), a.raw().e, a.raw().A};
    scaled_normalize(ctx->theta_ctx->q, r);
    return CycloElement(ctx->theta_ctx, r);
}

BdrElement constant(const std::shared_ptr<const BdrContext>& ctx, BdrConstant which) {
    switch (which) {
        case BdrConstant::Q: return BdrElement(ctx, ctx->qroot[0]);
        case BdrConstant::Mu: return BdrElement(ctx, ctx->mu_elt);
        case BdrConstant::Xi: return BdrElement(ctx, ctx->xi_elt);
        case BdrConstant::T: return BdrElement(ctx, ctx->t_elt);
        case BdrConstant::UnitTOverXi: return BdrElement(ctx, ctx->unit_t_over_xi);
    }
    throw DomainViolation("unknown constant");
}

BdrElement q_root(const std::shared_ptr<const BdrContext>& ctx, int j) {
    if (j < 0 || j > ctx->prof.k) throw DomainViolation("q_root level out of range");
    return BdrElement(ctx, ctx->qroot[static_cast<size_t>(j)]);
}

BdrElement zeta(const std::shared_ptr<const BdrContext>& ctx, int n) {
    if (n < 0 || n > ctx->prof.k) throw DomainViolation("zeta level out of range");
    return BdrElement(ctx, ctx->zeta[static_cast<size_t>(n)]);
}

BdrElement exp_small(const BdrElement& x) {
    const auto& c = x.ctx();
    return BdrElement(c, scaled_exp_small(c->q, c->xi_poly, c->prof.alpha,
                                          c->prof.log_exp_margin, x.raw()));
}

BdrElement log_near_one(const BdrElement& u) {
    const auto& c = u.ctx();
    return BdrElement(c, scaled_log_near_one(c->q, c->xi_poly, c->prof.alpha,
                                             c->prof.log_exp_margin, u.raw()));
}

BdrElement divide_by_xi(const BdrElement& a) {
    const auto& ctx = a.ctx();
    if (ctx->prof.alpha < 2) throw DomainViolation("divide_by_xi needs alpha >= 2");
    if (a.eff_prec() <= 0) throw PrecisionExhausted("divide_by_xi below zero precision");
    if (!theta(a).is_zero()) throw NotDivisible("theta image does not vanish");
    std::vector<GrElt> quot, rem;
    gr_poly_divrem_monic(ctx->q.gr, to_gr_list(ctx->q, a.raw().c), ctx->xi_poly, quot, rem);
    Scaled remaining{from_gr_list(ctx->q, rem), a.raw().e, a.raw().A};
    if (!scaled_is_zero(ctx->q, remaining))
        throw NotDivisible("nonzero remainder beyond precision");
    Scaled r{from_gr_list(ctx->lower->q, quot), a.raw().e, a.raw().A};
    scaled_normalize(ctx->lower->q, r);
    return BdrElement(ctx->lower, r);
}

BdrElement divide_by_t(const BdrElement& a, int j) {
    if (j < 0) throw DomainViolation("negative power of t");
    BdrElement b = a;
    for (int i = 0; i < j; ++i) {
        b = divide_by_xi(b);
        b = b * constant(b.ctx(), BdrConstant::UnitTOverXi).inv();
    }
    return b;
}

BdrElement level_raise(const BdrElement& a, const std::shared_ptr<const BdrContext>& target) {
    const auto& src = a.ctx()->prof;
    const auto& dst = target->prof;
    if (dst.p != src.p || dst.N != src.N || dst.alpha != src.alpha || dst.s != src.s ||
        dst.k != src.k + 1)
        throw DomainViolation("level_raise target must raise k by one");
    const QuotCtx& q = target->q;
    Scaled zp = scaled_zero(q);
    zp.A = dst.N;
    zp.c[static_cast<size_t>(q.gr.s)] = 1;
    Scaled w = scaled_sub(q, [&] {
        Scaled acc = scaled_one(q);
        Scaled b = scaled_add(q, zp, scaled_one(q));
        u64 e = src.p;
        while (e) {
            if (e & 1) acc = scaled_mul(q, acc, b);
            b = scaled_mul(q, b, b);
            e >>= 1;
        }
        return acc;
    }(), scaled_one(q));
    // Horner over the source coefficients
    Scaled acc = scaled_zero(q);
    const QuotCtx& qs = a.ctx()->q;
    for (int i = qs.deg - 1; i >= 0; --i) {
        acc = scaled_mul(q, acc, w);
        acc = scaled_add(q, acc, scaled_from_gr(q, qs.coeff(a.raw().c, i)));
    }
    acc.e += a.raw().e;
    acc.A = std::min(acc.A, a.raw().A);
    scaled_normalize(q, acc);
    return BdrElement(target, acc);
}

bool agree_at_overlap(const BdrElement& a, const BdrElement& b) {
    i64 m = std::min(a.eff_prec(), b.eff_prec());
    return scaled_agree_mod(a.ctx()->q, a.raw(), b.ctx()->q, b.raw(), m);
}

} // namespace qpr
