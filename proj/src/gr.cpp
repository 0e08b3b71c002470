#include "qpr/gr.hpp"

namespace qpr {

GrCtx::GrCtx(const ZqCtx& zq_, int s_) : zq(zq_), s(s_) {
    if (s < 1) throw DomainViolation("extension degree must be >= 1");
    std::vector<u64> gp = find_irreducible_mod_p(zq.p, s);
    g.assign(gp.begin(), gp.end());  // lift coefficients 0..p-1 into Zq
    fq = FqCtx(zq.p, s, gp);
}

bool GrCtx::is_zero(const GrElt& a) const {
    for (u64 c : a)
        if (c != 0) return false;
    return true;
}

GrElt GrCtx::add(const GrElt& a, const GrElt& b) const {
    GrElt r(s);
    for (int i = 0; i < s; ++i) r[i] = zq.add(a[i], b[i]);
    return r;
}

GrElt GrCtx::sub(const GrElt& a, const GrElt& b) const {
    GrElt r(s);
    for (int i = 0; i < s; ++i) r[i] = zq.sub(a[i], b[i]);
    return r;
}

GrElt GrCtx::neg(const GrElt& a) const {
    GrElt r(s);
    for (int i = 0; i < s; ++i) r[i] = zq.neg(a[i]);
    return r;
}

GrElt GrCtx::mul(const GrElt& a, const GrElt& b) const {
    if (s == 1) return {zq.mul(a[0], b[0])};
    std::vector<u64> prod(2 * s - 1, 0);
    for (int i = 0; i < s; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < s; ++j) prod[i + j] = zq.add(prod[i + j], zq.mul(a[i], b[j]));
    }
    for (int d = 2 * s - 2; d >= s; --d) {
        u64 c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        for (int j = 0; j < s; ++j)
            prod[d - s + j] = zq.sub(prod[d - s + j], zq.mul(g[j], c));
    }
    prod.resize(s);
    return prod;
}

GrElt GrCtx::scale(u64 c, const GrElt& a) const {
    GrElt r(s);
    for (int i = 0; i < s; ++i) r[i] = zq.mul(c, a[i]);
    return r;
}

int GrCtx::content(const GrElt& a) const {
    int v = zq.N;
    for (u64 c : a) {
        int w = zq.val(c);
        if (w < v) v = w;
    }
    return v;
}

GrElt GrCtx::div_pow_p(const GrElt& a, int j) const {
    GrElt r(s);
    for (int i = 0; i < s; ++i) r[i] = zq.div_pow_p(a[i], j);
    return r;
}

FqElt GrCtx::to_residue(const GrElt& a) const {
    FqElt r(s);
    for (int i = 0; i < s; ++i) r[i] = a[i] % zq.p;
    return r;
}

GrElt GrCtx::lift_residue(const FqElt& a) const {
    GrElt r(s);
    for (int i = 0; i < s; ++i) r[i] = a[i] % zq.pN;
    return r;
}

GrElt GrCtx::inv(const GrElt& a) const {
    FqElt res = to_residue(a);
    if (fq.is_zero(res)) throw NonUnit("not a unit in the coefficient extension");
    GrElt x = lift_residue(fq.inv(res));
    GrElt two = from_u64(2);
    for (int bits = 1; bits < zq.N; bits *= 2)
        x = mul(x, sub(two, mul(a, x)));
    return x;
}

} // namespace qpr
