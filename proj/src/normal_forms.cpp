#include "qpr/normal_forms.hpp"

#include <algorithm>
#include <functional>

#include "qpr/linear_solve.hpp"

namespace qpr {

namespace {

int vp_int(u64 p, i64 m) {
    if (m < 0) m = -m;
    if (m == 0) throw DomainViolation("vp of zero");
    int v = 0;
    while (m % static_cast<i64>(p) == 0) {
        m /= static_cast<i64>(p);
        ++v;
    }
    return v;
}

const std::shared_ptr<const BdrContext>& ctx_of(const BdrMat& m) { return m.at(0, 0).ctx(); }

BdrMat mat_pow(const BdrMat& m, u64 e) {
    BdrMat acc = bdr_mat_identity(ctx_of(m), m.rows());
    BdrMat b = m;
    while (e) {
        if (e & 1) acc = mat_mul(acc, b);
        b = mat_mul(b, b);
        e >>= 1;
    }
    return acc;
}

// ---- dense polynomials over R -------------------------------------------

BdrPoly poly_trim(BdrPoly f) {
    while (f.size() > 1 && f.back().is_zero()) f.pop_back();
    return f;
}

BdrPoly poly_mul(const BdrPoly& a, const BdrPoly& b) {
    const auto& ctx = a[0].ctx();
    BdrPoly r(a.size() + b.size() - 1, BdrElement::zero(ctx));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    return r;
}

/// Remainder modulo a monic polynomial.
BdrPoly poly_mod_monic(BdrPoly a, const BdrPoly& m) {
    int dm = static_cast<int>(m.size()) - 1;
    for (int d = static_cast<int>(a.size()) - 1; d >= dm; --d) {
        BdrElement c = a[static_cast<size_t>(d)];
        if (c.is_zero()) continue;
        for (int j = 0; j < dm; ++j)
            a[static_cast<size_t>(d - dm + j)] = a[static_cast<size_t>(d - dm + j)] - c * m[static_cast<size_t>(j)];
        a[static_cast<size_t>(d)] = BdrElement::zero(c.ctx());
    }
    a.resize(static_cast<size_t>(dm), BdrElement::zero(m[0].ctx()));
    return a;
}

bool poly_eq(const BdrPoly& a, const BdrPoly& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!eq(a[i], b[i])) return false;
    return true;
}

BdrPoly lift_fq_poly(const std::shared_ptr<const BdrContext>& ctx, const FqPoly& f) {
    BdrPoly r;
    r.reserve(f.size());
    for (const auto& c : f)
        r.push_back(BdrElement(ctx, scaled_from_gr(ctx->q, ctx->q.gr.lift_residue(c))));
    if (r.empty()) r.push_back(BdrElement::zero(ctx));
    return r;
}

// ---- residual data -------------------------------------------------------

std::vector<std::pair<FqElt, int>> residual_eigenvalues(const BdrMat& m, bool* split_ok) {
    FqPoly rem;
    auto roots = fq_poly_roots(ctx_of(m)->q.gr.fq, residual_poly(char_poly(m)), rem);
    if (split_ok) *split_ok = fq_poly_deg(rem) <= 0;
    return roots;
}

} // namespace

BdrPoly char_poly(const BdrMat& m) {
    if (m.rows() != m.cols()) throw DomainViolation("characteristic polynomial of a nonsquare matrix");
    const auto& ctx = ctx_of(m);
    const int n = m.rows();
    // polynomial entries T*delta - m, determinant by first-column expansion
    using PMat = std::vector<std::vector<BdrPoly>>;
    PMat a(static_cast<size_t>(n), std::vector<BdrPoly>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            BdrPoly e = {-m.at(i, j)};
            if (i == j) e.push_back(BdrElement::one(ctx));
            a[static_cast<size_t>(i)][static_cast<size_t>(j)] = e;
        }
    std::function<BdrPoly(const PMat&)> det = [&](const PMat& mm) -> BdrPoly {
        size_t k = mm.size();
        if (k == 1) return mm[0][0];
        BdrPoly acc = {BdrElement::zero(ctx)};
        for (size_t i = 0; i < k; ++i) {
            PMat minor(k - 1, std::vector<BdrPoly>(k - 1));
            size_t ri = 0;
            for (size_t r = 0; r < k; ++r) {
                if (r == i) continue;
                for (size_t c = 1; c < k; ++c) minor[ri][c - 1] = mm[r][c];
                ++ri;
            }
            BdrPoly term = poly_mul(mm[i][0], det(minor));
            if (i % 2 == 1)
                for (auto& x : term) x = -x;
            if (acc.size() < term.size()) acc.resize(term.size(), BdrElement::zero(ctx));
            for (size_t s = 0; s < term.size(); ++s) acc[s] = acc[s] + term[s];
        }
        return acc;
    };
    return det(a);
}

BdrMat eval_poly(const BdrPoly& f, const BdrMat& m) {
    const auto& ctx = ctx_of(m);
    BdrMat acc(m.rows(), m.rows(), BdrElement::zero(ctx));
    for (size_t i = f.size(); i-- > 0;) {
        acc = mat_mul(acc, m);
        for (int dpos = 0; dpos < m.rows(); ++dpos)
            acc.at(dpos, dpos) = acc.at(dpos, dpos) + f[i];
    }
    return acc;
}

FqElt residual_scalar(const BdrElement& a) {
    CycloElement th = theta(a);
    const auto& q = th.ctx()->q;
    if (th.raw().e > 0) {
        // value with denominators cannot reduce; only its p-part matters here
        if (scaled_val(q, th.raw()) < 0) throw DomainViolation("residual of a non-integral value");
    }
    Scaled v = th.raw();
    // bring to scale 0
    i64 shift = -v.e;
    GrElt c0 = q.coeff(v.c, 0);
    if (shift > 0) {
        u64 f = q.gr.zq.pow_p(static_cast<int>(std::min<i64>(shift, q.gr.zq.N)));
        c0 = q.gr.scale(f, c0);
    } else if (shift < 0) {
        c0 = q.gr.div_pow_p(c0, static_cast<int>(-shift));
    }
    return q.gr.to_residue(c0);
}

FqPoly residual_poly(const BdrPoly& f) {
    const auto& F = f[0].ctx()->q.gr.fq;
    FqPoly r(f.size(), F.zero());
    for (size_t i = 0; i < f.size(); ++i) r[i] = residual_scalar(f[i]);
    return fq_poly_trim(F, r);
}

FqMat residual_matrix(const BdrMat& m) {
    FqMat r;
    r.n = m.rows();
    r.a.resize(static_cast<size_t>(r.n) * r.n);
    for (int i = 0; i < r.n; ++i)
        for (int j = 0; j < r.n; ++j) r.at(i, j) = residual_scalar(m.at(i, j));
    return r;
}

std::shared_ptr<const BdrContext> bottom_context(const std::shared_ptr<const BdrContext>& ctx) {
    auto c = ctx;
    while (c->lower) c = c->lower;
    return c;
}

BdrElement to_alpha1(const BdrElement& a) {
    // theta lands in the coefficient ring, which has the same raw layout as
    // the alpha = 1 sibling
    CycloElement th = theta(a);
    return BdrElement(bottom_context(a.ctx()), th.raw());
}

BdrElement lift_into(const BdrElement& a, const std::shared_ptr<const BdrContext>& target) {
    const auto& sp = a.ctx()->prof;
    const auto& tp = target->prof;
    if (sp.p != tp.p || sp.N != tp.N || sp.k != tp.k || sp.s != tp.s || tp.alpha < sp.alpha)
        throw DomainViolation("incompatible lift target");
    Scaled v{target->q.zero(), a.raw().e, a.raw().A};
    std::copy(a.raw().c.begin(), a.raw().c.end(), v.c.begin());
    scaled_normalize(target->q, v);
    return BdrElement(target, v);
}

BdrMat mat_to_alpha1(const BdrMat& m) {
    BdrMat r(m.rows(), m.cols(), BdrElement::zero(bottom_context(ctx_of(m))));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = to_alpha1(m.at(i, j));
    return r;
}

BdrMat mat_lift_into(const BdrMat& m, const std::shared_ptr<const BdrContext>& target) {
    BdrMat r(m.rows(), m.cols(), BdrElement::zero(target));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = lift_into(m.at(i, j), target);
    return r;
}

std::vector<int> CanonicalForm::type() const {
    std::vector<int> t;
    for (const auto& [sz, b] : blocks) t.push_back(sz);
    return t;
}

BdrMat CanonicalForm::assembled() const {
    const auto& ctx = blocks[0].second.at(0, 0).ctx();
    int n = 0;
    for (const auto& [sz, b] : blocks) n += sz;
    BdrMat r(n, n, BdrElement::zero(ctx));
    int off = 0;
    for (const auto& [sz, b] : blocks) {
        for (int i = 0; i < sz; ++i)
            for (int j = 0; j < sz; ++j) r.at(off + i, off + j) = b.at(i, j);
        off += sz;
    }
    return r;
}

CanonicalForm hensel_split(const BdrMat& psi) {
    const auto& ctx = ctx_of(psi);
    const int n = psi.rows();
    bool split_ok = false;
    auto roots = residual_eigenvalues(psi, &split_ok);
    if (!split_ok)
        throw ResidueFieldTooSmall("residual characteristic polynomial has an irreducible factor; "
                                   "raise the extension degree s");
    if (roots.size() == 1) {
        CanonicalForm cf;
        cf.conjugator = bdr_mat_identity(ctx, n);
        cf.blocks.emplace_back(n, psi);
        return cf;
    }

    // gap certification and precision margin for the lifting budget
    const i64 half = ctx->prof.N / 2;
    for (size_t u = 0; u < roots.size(); ++u)
        for (size_t v = u + 1; v < roots.size(); ++v) {
            BdrElement du = BdrElement(ctx, scaled_from_gr(ctx->q, ctx->q.gr.lift_residue(roots[u].first)));
            BdrElement dv = BdrElement(ctx, scaled_from_gr(ctx->q, ctx->q.gr.lift_residue(roots[v].first)));
            if (content_valuation(theta(du - dv)) >= half)
                throw AmbiguousAtPrecision("residual eigenvalue gap below the valuation margin");
        }
    for (const auto& e : psi.data())
        if (!e.is_zero() && e.eff_prec() <= half)
            throw AmbiguousAtPrecision("input precision too low to certify the splitting");

    // residual idempotents via the coprime Bezout cocktail, then sequential
    // quadratic lifting so orthogonality is exact
    const FqCtx& F = ctx->q.gr.fq;
    BdrPoly P = poly_trim(char_poly(psi));
    FqPoly Pbar = residual_poly(P);
    std::vector<BdrPoly> idem;
    for (size_t u = 0; u < roots.size(); ++u) {
        FqPoly pu = {F.one()};
        FqPoly rest = {F.one()};
        for (size_t v = 0; v < roots.size(); ++v) {
            FqPoly lin = {F.neg(roots[v].first), F.one()};
            for (int m = 0; m < roots[v].second; ++m) {
                if (v == u)
                    pu = fq_poly_mul(F, pu, lin);
                else
                    rest = fq_poly_mul(F, rest, lin);
            }
        }
        FqPoly bu, bv;
        fq_poly_bezout_coprime(F, rest, pu, bu, bv);
        FqPoly ebar = fq_poly_mul(F, bu, rest);  // = 1 mod pu, = 0 mod rest
        {
            FqPoly q, r;
            fq_poly_divrem(F, ebar, Pbar, q, r);
            ebar = r;
        }
        idem.push_back(lift_fq_poly(ctx, ebar));
    }

    const int cap = 8 + [&] {
        int c = 1;
        long m = static_cast<long>(ctx->q.deg) * ctx->prof.N;
        while ((1L << c) < m) ++c;
        return c;
    }();
    BdrPoly complement = {BdrElement::one(ctx)};  // 1 - sum of lifted idempotents so far
    std::vector<BdrPoly> lifted;
    for (size_t u = 0; u + 1 < idem.size(); ++u) {
        BdrPoly e = poly_mod_monic(poly_mul(complement, idem[u]), P);
        bool ok = false;
        for (int it = 0; it < cap; ++it) {
            BdrPoly e2 = poly_mod_monic(poly_mul(e, e), P);
            if (poly_eq(e2, e)) { ok = true; break; }
            // e <- 3 e^2 - 2 e^3
            BdrPoly e3 = poly_mod_monic(poly_mul(e2, e), P);
            BdrPoly next(e.size(), BdrElement::zero(ctx));
            for (size_t i = 0; i < e.size(); ++i)
                next[i] = e2[i] * BdrElement::from_int(ctx, 3) - e3[i] * BdrElement::from_int(ctx, 2);
            e = std::move(next);
        }
        if (!ok) throw AmbiguousAtPrecision("idempotent lifting did not stabilize");
        lifted.push_back(e);
        for (size_t i = 0; i < complement.size(); ++i)
            complement[i] = complement[i] - (i < e.size() ? e[i] : BdrElement::zero(ctx));
    }
    lifted.push_back(complement);

    // projectors and a basis adapted to their images
    std::vector<BdrMat> proj;
    for (const auto& e : lifted) proj.push_back(eval_poly(e, psi));
    BdrMat v(n, n, BdrElement::zero(ctx));
    int placed = 0;
    for (size_t u = 0; u < proj.size(); ++u) {
        FqMat pr = residual_matrix(proj[u]);
        // greedy residually independent columns
        std::vector<std::vector<FqElt>> echelon;
        int taken = 0;
        for (int col = 0; col < n && taken < roots[u].second; ++col) {
            std::vector<FqElt> w(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = pr.at(i, col);
            for (const auto& row : echelon) {
                int lead = -1;
                for (int i = 0; i < n; ++i)
                    if (!F.is_zero(row[static_cast<size_t>(i)])) { lead = i; break; }
                if (lead >= 0 && !F.is_zero(w[static_cast<size_t>(lead)])) {
                    FqElt c = F.mul(w[static_cast<size_t>(lead)], F.inv(row[static_cast<size_t>(lead)]));
                    for (int i = 0; i < n; ++i)
                        w[static_cast<size_t>(i)] = F.sub(w[static_cast<size_t>(i)], F.mul(c, row[static_cast<size_t>(i)]));
                }
            }
            bool nonzero = false;
            for (int i = 0; i < n; ++i)
                if (!F.is_zero(w[static_cast<size_t>(i)])) { nonzero = true; break; }
            if (!nonzero) continue;
            echelon.push_back(w);
            for (int i = 0; i < n; ++i) v.at(i, placed) = proj[u].at(i, col);
            ++placed;
            ++taken;
        }
        if (taken != roots[u].second)
            throw AmbiguousAtPrecision("projector rank below the residual multiplicity");
    }

    BdrMat vin = bdr_mat_inverse(v);
    BdrMat conj = mat_mul(mat_mul(vin, psi), v);
    int off = 0;
    CanonicalForm cf;
    cf.conjugator = v;
    for (size_t u = 0; u < roots.size(); ++u) {
        int sz = roots[u].second;
        BdrMat b(sz, sz, BdrElement::zero(ctx));
        for (int i = 0; i < sz; ++i)
            for (int j = 0; j < sz; ++j) b.at(i, j) = conj.at(off + i, off + j);
        cf.blocks.emplace_back(sz, std::move(b));
        off += sz;
    }
    // invariant splitting: everything off the diagonal blocks must vanish
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bool same_block = false;
            int o = 0;
            for (const auto& [sz, b] : cf.blocks) {
                if (i >= o && i < o + sz && j >= o && j < o + sz) same_block = true;
                o += sz;
            }
            if (!same_block && !conj.at(i, j).is_zero())
                throw AmbiguousAtPrecision("projector splitting left off-diagonal residue");
        }
    return cf;
}

namespace {

// residual Sylvester solve over the coefficient ring: Phi_bar_i Z - Z Phi_bar_j = RHS
Mat<CycloElement> residual_sylvester_solve(const Mat<CycloElement>& pi, const Mat<CycloElement>& pj,
                                           const Mat<CycloElement>& rhs, i64 margin) {
    const int ri = pi.rows(), rj = pj.rows();
    const auto& ctx = pi.at(0, 0).ctx();
    const int nunk = ri * rj;
    std::vector<std::vector<CycloElement>> a(static_cast<size_t>(nunk),
                                             std::vector<CycloElement>(static_cast<size_t>(nunk),
                                                                       CycloElement::zero(ctx)));
    std::vector<CycloElement> b(static_cast<size_t>(nunk), CycloElement::zero(ctx));
    auto idx = [rj](int r, int c) { return r * rj + c; };
    for (int rr = 0; rr < ri; ++rr)
        for (int cc = 0; cc < rj; ++cc) {
            int row = idx(rr, cc);
            b[static_cast<size_t>(row)] = rhs.at(rr, cc);
            for (int k = 0; k < ri; ++k)
                a[static_cast<size_t>(row)][static_cast<size_t>(idx(k, cc))] =
                    a[static_cast<size_t>(row)][static_cast<size_t>(idx(k, cc))] + pi.at(rr, k);
            for (int k = 0; k < rj; ++k)
                a[static_cast<size_t>(row)][static_cast<size_t>(idx(rr, k))] =
                    a[static_cast<size_t>(row)][static_cast<size_t>(idx(rr, k))] - pj.at(k, cc);
        }
    std::vector<CycloElement> sol = linear_solve(a, b, margin);
    Mat<CycloElement> z(ri, rj, CycloElement::zero(ctx));
    for (int rr = 0; rr < ri; ++rr)
        for (int cc = 0; cc < rj; ++cc) z.at(rr, cc) = sol[static_cast<size_t>(idx(rr, cc))];
    return z;
}

Mat<CycloElement> mat_theta(const BdrMat& m) {
    Mat<CycloElement> r(m.rows(), m.cols(), CycloElement::zero(ctx_of(m)->theta_ctx));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = theta(m.at(i, j));
    return r;
}

BdrMat lift_cyclo_mat(const std::shared_ptr<const BdrContext>& ctx, const Mat<CycloElement>& m) {
    BdrMat r(m.rows(), m.cols(), BdrElement::zero(ctx));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const Scaled& s = m.at(i, j).raw();
            Scaled v{ctx->q.zero(), s.e, s.A};
            std::copy(s.c.begin(), s.c.end(), v.c.begin());
            scaled_normalize(ctx->q, v);
            r.at(i, j) = BdrElement(ctx, v);
        }
    return r;
}

/// t-digit of a matrix whose entries lie in (t^l), as a coefficient-ring matrix.
Mat<CycloElement> theta_digit(const BdrMat& m, int l) {
    Mat<CycloElement> r(m.rows(), m.cols(), CycloElement::zero(ctx_of(m)->theta_ctx));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            BdrElement e = m.at(i, j);
            if (e.is_zero()) continue;
            r.at(i, j) = theta(divide_by_t(e, l));
        }
    return r;
}

} // namespace

BdrMat twisted_sylvester(const BdrMat& phi_i, const BdrMat& phi_j, const GammaVector& beta,
                         const BdrMat& x) {
    (void)beta;  // the translate acts trivially on point matrices
    const auto& ctx = ctx_of(phi_i);
    const FqCtx& F = ctx->q.gr.fq;
    FqPoly gcd = fq_poly_gcd(F, residual_poly(char_poly(phi_i)), residual_poly(char_poly(phi_j)));
    if (fq_poly_deg(gcd) != 0)
        throw SpectraNotDisjoint("residual spectra of the two sides intersect");
    Mat<CycloElement> pi = mat_theta(phi_i), pj = mat_theta(phi_j);
    BdrMat y(x.rows(), x.cols(), BdrElement::zero(ctx));
    BdrElement t_const = constant(ctx, BdrConstant::T);
    for (int l = 0; l < ctx->prof.alpha; ++l) {
        BdrMat resid = mat_sub(x, mat_sub(mat_mul(phi_i, y), mat_mul(y, phi_j)));
        if (mat_is_zero(resid)) return y;
        Mat<CycloElement> digit = theta_digit(resid, l);
        Mat<CycloElement> z = residual_sylvester_solve(pi, pj, digit, 1);
        BdrMat zl = lift_cyclo_mat(ctx, z);
        BdrElement tl = BdrElement::one(ctx);
        for (int i = 0; i < l; ++i) tl = tl * t_const;
        y = mat_add(y, mat_scale(tl, zl));
    }
    BdrMat resid = mat_sub(x, mat_sub(mat_mul(phi_i, y), mat_mul(y, phi_j)));
    if (!mat_is_zero(resid)) throw SingularAtPrecision("staircase left a nonzero residual");
    return y;
}

std::pair<BdrMat, std::vector<BdrMat>> block_diagonalize(const BdrMat& h,
                                                         const std::vector<int>& sizes,
                                                         const GammaVector& beta) {
    (void)beta;
    const auto& ctx = ctx_of(h);
    const int n = h.rows();
    {
        int total = 0;
        for (int s : sizes) total += s;
        if (total != n) throw DomainViolation("block sizes do not tile the matrix");
    }
    std::vector<int> off(sizes.size(), 0);
    for (size_t u = 1; u < sizes.size(); ++u) off[u] = off[u - 1] + sizes[u - 1];
    auto block_of = [&](const BdrMat& m, size_t u, size_t v) {
        BdrMat b(sizes[u], sizes[v], BdrElement::zero(ctx));
        for (int i = 0; i < sizes[u]; ++i)
            for (int j = 0; j < sizes[v]; ++j) b.at(i, j) = m.at(off[u] + i, off[v] + j);
        return b;
    };

    // preconditions: off-diagonal blocks in (t), diagonal blocks residually disjoint
    for (size_t u = 0; u < sizes.size(); ++u)
        for (size_t v = 0; v < sizes.size(); ++v) {
            if (u == v) continue;
            BdrMat b = block_of(h, u, v);
            for (const auto& e : b.data())
                if (!e.is_zero() && !theta(e).is_zero())
                    throw DomainViolation("off-diagonal block not divisible by t");
        }
    const FqCtx& F = ctx->q.gr.fq;
    for (size_t u = 0; u < sizes.size(); ++u)
        for (size_t v = u + 1; v < sizes.size(); ++v) {
            FqPoly g = fq_poly_gcd(F, residual_poly(char_poly(block_of(h, u, u))),
                                   residual_poly(char_poly(block_of(h, v, v))));
            if (fq_poly_deg(g) != 0)
                throw SpectraNotDisjoint("diagonal blocks share residual spectrum");
        }

    std::vector<Mat<CycloElement>> diag_res;
    for (size_t u = 0; u < sizes.size(); ++u) diag_res.push_back(mat_theta(block_of(h, u, u)));

    BdrMat cur = h;
    BdrMat vtot = bdr_mat_identity(ctx, n);
    BdrElement t_const = constant(ctx, BdrConstant::T);
    for (int l = 1; l < ctx->prof.alpha; ++l) {
        BdrMat w(n, n, BdrElement::zero(ctx));
        bool any = false;
        for (size_t u = 0; u < sizes.size(); ++u)
            for (size_t v = 0; v < sizes.size(); ++v) {
                if (u == v) continue;
                BdrMat b = block_of(cur, u, v);
                if (mat_is_zero(b)) continue;
                any = true;
                Mat<CycloElement> digit = theta_digit(b, l);
                Mat<CycloElement> z = residual_sylvester_solve(diag_res[u], diag_res[v],
                                                               [&] {
                                                                   Mat<CycloElement> neg = digit;
                                                                   for (auto& e : neg.data()) e = -e;
                                                                   return neg;
                                                               }(),
                                                               1);
                BdrMat zl = lift_cyclo_mat(ctx, z);
                for (int i = 0; i < sizes[u]; ++i)
                    for (int j = 0; j < sizes[v]; ++j) w.at(off[u] + i, off[v] + j) = zl.at(i, j);
            }
        if (!any) break;
        BdrElement tl = BdrElement::one(ctx);
        for (int i = 0; i < l; ++i) tl = tl * t_const;
        BdrMat corr = mat_add(bdr_mat_identity(ctx, n), mat_scale(tl, w));
        cur = mat_mul(mat_mul(bdr_mat_inverse(corr), cur), corr);
        vtot = mat_mul(vtot, corr);
    }

    std::vector<BdrMat> blocks;
    for (size_t u = 0; u < sizes.size(); ++u) {
        for (size_t v = 0; v < sizes.size(); ++v)
            if (u != v && !mat_is_zero(block_of(cur, u, v)))
                throw SingularAtPrecision("off-diagonal residue survived the staircase");
        blocks.push_back(block_of(cur, u, u));
    }
    // M with I + tM = accumulated conjugator
    BdrMat diffm = mat_sub(vtot, bdr_mat_identity(ctx, n));
    BdrMat m(n, n, BdrElement::zero(ctx));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            BdrElement e = diffm.at(i, j);
            if (e.is_zero()) continue;
            m.at(i, j) = lift_into(divide_by_t(e, 1), ctx);
        }
    return {m, blocks};
}

SimultaneousCanonicalForm simultaneous_canonical_form(const std::vector<BdrMat>& psis,
                                                      int m_level) {
    (void)m_level;
    if (psis.empty()) throw DomainViolation("empty family");
    const auto& ctx = ctx_of(psis[0]);
    const int n = psis[0].rows();
    for (size_t i = 0; i < psis.size(); ++i)
        for (size_t j = i + 1; j < psis.size(); ++j)
            if (!mat_eq(mat_mul(psis[i], psis[j]), mat_mul(psis[j], psis[i])))
                throw NotCommuting("family fails twisted commutation");

    // find a generator with a split residual spectrum
    int pick = -1;
    for (size_t i = 0; i < psis.size(); ++i) {
        bool split_ok = false;
        auto roots = residual_eigenvalues(psis[i], &split_ok);
        if (!split_ok)
            throw ResidueFieldTooSmall("residual characteristic polynomial has an irreducible factor");
        if (roots.size() >= 2) { pick = static_cast<int>(i); break; }
    }
    if (pick < 0) {
        SimultaneousCanonicalForm out;
        out.conjugator = bdr_mat_identity(ctx, n);
        out.type = {n};
        for (const auto& m : psis) out.blocks.push_back({m});
        return out;
    }

    CanonicalForm cf = hensel_split(psis[static_cast<size_t>(pick)]);
    BdrMat vin = bdr_mat_inverse(cf.conjugator);
    std::vector<int> sizes = cf.type();
    std::vector<int> off(sizes.size(), 0);
    for (size_t u = 1; u < sizes.size(); ++u) off[u] = off[u - 1] + sizes[u - 1];

    std::vector<std::vector<BdrMat>> sub(sizes.size());  // [block][matrix]
    for (const auto& m : psis) {
        BdrMat c = mat_mul(mat_mul(vin, m), cf.conjugator);
        for (size_t u = 0; u < sizes.size(); ++u)
            for (size_t v = 0; v < sizes.size(); ++v) {
                if (u == v) continue;
                for (int i = 0; i < sizes[u]; ++i)
                    for (int j = 0; j < sizes[v]; ++j)
                        if (!c.at(off[u] + i, off[v] + j).is_zero())
                            throw NotCommuting("family does not respect the common splitting");
            }
        for (size_t u = 0; u < sizes.size(); ++u) {
            BdrMat b(sizes[u], sizes[u], BdrElement::zero(ctx));
            for (int i = 0; i < sizes[u]; ++i)
                for (int j = 0; j < sizes[u]; ++j) b.at(i, j) = c.at(off[u] + i, off[u] + j);
            sub[u].push_back(std::move(b));
        }
    }

    SimultaneousCanonicalForm out;
    out.blocks.assign(psis.size(), {});
    std::vector<BdrMat> v_blocks;
    for (size_t u = 0; u < sizes.size(); ++u) {
        SimultaneousCanonicalForm inner = simultaneous_canonical_form(sub[u], m_level);
        v_blocks.push_back(inner.conjugator);
        for (int tpart : inner.type) out.type.push_back(tpart);
        for (size_t mi = 0; mi < psis.size(); ++mi)
            for (const auto& b : inner.blocks[mi]) out.blocks[mi].push_back(b);
    }
    BdrMat vdiag(n, n, BdrElement::zero(ctx));
    for (size_t u = 0; u < sizes.size(); ++u)
        for (int i = 0; i < sizes[u]; ++i)
            for (int j = 0; j < sizes[u]; ++j)
                vdiag.at(off[u] + i, off[u] + j) = v_blocks[u].at(i, j);
    out.conjugator = mat_mul(cf.conjugator, vdiag);
    return out;
}

BdrMat binomial_root_series(const BdrMat& u, const BdrMat& x, i64 M) {
    if (M == 0) throw DomainViolation("zeroth root");
    const auto& ctx = ctx_of(u);
    const int n = u.rows();
    if (!mat_is_zero(mat_pow(u, static_cast<u64>(n))))
        throw DomainViolation("U is not exactly nilpotent");
    const int vpm = vp_int(ctx->prof.p, M);
    const bool u_zero = mat_is_zero(u);
    const i64 c_min = u_zero ? (vpm + 1) : static_cast<i64>(n) * (vpm + 1);
    for (const auto& e : x.data())
        if (!e.is_zero() && content_valuation(e) < std::min<i64>(c_min, e.eff_prec()))
            throw DomainViolation("X too large p-adically for the binomial series");

    BdrMat s = mat_add(u, x);
    BdrMat acc = bdr_mat_identity(ctx, n);
    BdrMat term = bdr_mat_identity(ctx, n);  // binom(1/M, i) * S^i
    const int cap = n * (ctx->prof.N + 2 * ctx->prof.alpha + 8) + n + 4;
    int zero_streak = 0;
    for (int i = 1; i <= cap && zero_streak <= n; ++i) {
        // binom(1/M, i) = binom(1/M, i-1) * (1 - (i-1)M) / (i M)
        i64 num = 1 - static_cast<i64>(i - 1) * M;
        i64 den = static_cast<i64>(i) * M;
        term = mat_mul(term, s);
        for (auto& e : term.data()) e = (e * BdrElement::from_int(ctx, num)).div_int(den);
        if (mat_is_zero(term)) {
            if (i >= n) ++zero_streak;
            continue;
        }
        zero_streak = 0;
        // entries below the running precision cannot change the sum
        for (int a = 0; a < n; ++a)
            for (int bcol = 0; bcol < n; ++bcol) {
                const BdrElement& te = term.at(a, bcol);
                if (!te.is_zero() && content_valuation(te) < acc.at(a, bcol).eff_prec())
                    acc.at(a, bcol) = acc.at(a, bcol) + te;
            }
    }
    if (zero_streak <= n) throw PrecisionExhausted("binomial series did not terminate");
    BdrMat check = mat_pow(acc, static_cast<u64>(M));
    BdrMat target = mat_add(mat_add(bdr_mat_identity(ctx, n), u), x);
    if (!mat_eq(check, target))
        throw PrecisionExhausted("binomial root verification failed at precision");
    return acc;
}

BdrMat sum_conjugation_solve(const BdrMat& b, i64 M, const BdrMat& x) {
    if (M < 1) throw DomainViolation("M must be positive");
    const auto& ctx = ctx_of(b);
    {
        bool split_ok = false;
        auto roots = residual_eigenvalues(b, &split_ok);
        if (!split_ok || roots.size() != 1)
            throw DomainViolation("B must be simple (single residual eigenvalue)");
    }
    const int n = b.rows();
    std::vector<BdrMat> pows;
    pows.push_back(bdr_mat_identity(ctx, n));
    for (i64 i = 1; i < M; ++i) pows.push_back(mat_mul(pows.back(), b));
    std::vector<Mat<CycloElement>> pows_res;
    for (const auto& pw : pows) pows_res.push_back(mat_theta(pw));
    auto apply = [&](const BdrMat& y) {
        BdrMat acc(n, n, BdrElement::zero(ctx));
        for (i64 i = 1; i <= M; ++i)
            acc = mat_add(acc, mat_mul(mat_mul(pows[static_cast<size_t>(i - 1)], y),
                                       pows[static_cast<size_t>(M - i)]));
        return acc;
    };
    const auto& cyc = ctx->theta_ctx;
    const i64 margin = std::max<i64>(2, ctx->prof.N / 2);
    BdrElement t_const = constant(ctx, BdrConstant::T);
    BdrMat y(n, n, BdrElement::zero(ctx));
    for (int l = 0; l < ctx->prof.alpha; ++l) {
        BdrMat resid = mat_sub(x, apply(y));
        if (mat_is_zero(resid)) return y;
        Mat<CycloElement> digit = theta_digit(resid, l);
        // flatten sum_i Bbar^(i-1) Z Bbar^(M-i)
        const int nunk = n * n;
        std::vector<std::vector<CycloElement>> a(static_cast<size_t>(nunk),
                                                 std::vector<CycloElement>(static_cast<size_t>(nunk),
                                                                           CycloElement::zero(cyc)));
        std::vector<CycloElement> rhs(static_cast<size_t>(nunk), CycloElement::zero(cyc));
        auto idx = [n](int r, int c) { return r * n + c; };
        for (int rr = 0; rr < n; ++rr)
            for (int cc = 0; cc < n; ++cc) {
                rhs[static_cast<size_t>(idx(rr, cc))] = digit.at(rr, cc);
                for (i64 i = 1; i <= M; ++i) {
                    const auto& le = pows_res[static_cast<size_t>(i - 1)];
                    const auto& ri = pows_res[static_cast<size_t>(M - i)];
                    for (int rz = 0; rz < n; ++rz)
                        for (int cz = 0; cz < n; ++cz) {
                            CycloElement coeff = le.at(rr, rz) * ri.at(cz, cc);
                            auto& slot = a[static_cast<size_t>(idx(rr, cc))][static_cast<size_t>(idx(rz, cz))];
                            slot = slot + coeff;
                        }
                }
            }
        std::vector<CycloElement> sol = linear_solve(a, rhs, margin);
        Mat<CycloElement> z(n, n, CycloElement::zero(cyc));
        for (int rr = 0; rr < n; ++rr)
            for (int cc = 0; cc < n; ++cc) z.at(rr, cc) = sol[static_cast<size_t>(idx(rr, cc))];
        BdrMat zl = lift_cyclo_mat(ctx, z);
        BdrElement tl = BdrElement::one(ctx);
        for (int i = 0; i < l; ++i) tl = tl * t_const;
        y = mat_add(y, mat_scale(tl, zl));
    }
    BdrMat resid = mat_sub(x, apply(y));
    if (!mat_is_zero(resid)) throw SingularAtPrecision("staircase left a nonzero residual");
    return y;
}

BdrMat twisted_mth_root(const BdrMat& phi, const GammaVector& beta, i64 M, const BdrMat& seed) {
    (void)beta;
    if (M < 1) throw DomainViolation("M must be positive");
    const auto& ctx = ctx_of(phi);
    if (!mat_eq(mat_to_alpha1(mat_pow(seed, static_cast<u64>(M))), mat_to_alpha1(phi)))
        throw DomainViolation("seed is not an M-th root of Phi modulo t");
    BdrMat cur = seed;
    BdrElement t_const = constant(ctx, BdrConstant::T);
    for (int l = 1; l < ctx->prof.alpha; ++l) {
        BdrMat resid = mat_sub(phi, mat_pow(cur, static_cast<u64>(M)));
        if (mat_is_zero(resid)) break;
        BdrMat digit(phi.rows(), phi.cols(), BdrElement::zero(ctx));
        for (int i = 0; i < phi.rows(); ++i)
            for (int j = 0; j < phi.cols(); ++j) {
                BdrElement e = resid.at(i, j);
                if (e.is_zero()) continue;
                digit.at(i, j) = lift_into(divide_by_t(e, l), ctx);
            }
        BdrMat yl = sum_conjugation_solve(cur, M, digit);
        BdrElement tl = BdrElement::one(ctx);
        for (int i = 0; i < l; ++i) tl = tl * t_const;
        cur = mat_add(cur, mat_scale(tl, yl));
    }
    if (!mat_eq(mat_pow(cur, static_cast<u64>(M)), phi))
        throw SingularAtPrecision("twisted root verification failed at precision");
    return cur;
}

BdrMat mth_root_seed(const BdrMat& phi, i64 M) {
    if (M < 1) throw DomainViolation("M must be positive");
    const auto& ctx = ctx_of(phi);
    const FqCtx& F = ctx->q.gr.fq;
    bool split_ok = false;
    auto roots = residual_eigenvalues(phi, &split_ok);
    if (!split_ok) throw ResidueFieldTooSmall("residual characteristic polynomial does not split");
    if (roots.size() != 1) throw DomainViolation("seed construction needs a simple matrix");
    FqElt lambda = roots[0].first;
    FqElt root;
    bool found = false;
    for (const FqElt& cand : F.all_elements())
        if (F.eq(F.pow(cand, static_cast<u64>(M)), lambda)) {
            root = cand;
            found = true;
            break;
        }
    if (!found) throw ResidueRootMissing("no residual M-th root of the eigenvalue");

    auto bot = bottom_context(ctx);
    BdrMat pbar = mat_to_alpha1(phi);
    const int n = phi.rows();
    BdrElement x0 = BdrElement(bot, scaled_from_gr(bot->q, bot->q.gr.lift_residue(root)));
    BdrElement x0_inv_M = pow(x0.inv(), static_cast<u64>(M));
    BdrMat a = mat_scale(x0_inv_M, pbar);

    FqMat nilres = residual_matrix(a);
    for (int i = 0; i < n; ++i) nilres.at(i, i) = F.sub(nilres.at(i, i), F.one());
    BdrMat w(n, n, BdrElement::zero(bot));
    if (fq_mat_is_zero(F, nilres)) {
        BdrMat xs = a;
        for (int i = 0; i < n; ++i) xs.at(i, i) = xs.at(i, i) - BdrElement::one(bot);
        w = binomial_root_series(BdrMat(n, n, BdrElement::zero(bot)), xs, M);
    } else {
        FqMat vres = fq_nilpotent_triangularize(F, nilres);
        BdrMat v(n, n, BdrElement::zero(bot));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                v.at(i, j) = BdrElement(bot, scaled_from_gr(bot->q, bot->q.gr.lift_residue(vres.at(i, j))));
        BdrMat vin = bdr_mat_inverse(v);
        BdrMat c = mat_mul(mat_mul(vin, a), v);
        BdrMat uu(n, n, BdrElement::zero(bot));
        BdrMat xs(n, n, BdrElement::zero(bot));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                BdrElement e = c.at(i, j);
                if (i == j) e = e - BdrElement::one(bot);
                if (j > i)
                    uu.at(i, j) = e;
                else
                    xs.at(i, j) = e;
            }
        BdrMat root_m = binomial_root_series(uu, xs, M);
        w = mat_mul(mat_mul(v, root_m), vin);
    }
    BdrMat seed = mat_scale(x0, w);
    return mat_lift_into(seed, ctx);
}

Cocycle extend_cocycle(const Cocycle& psi, i64 M) {
    if (M < 1) throw DomainViolation("M must be positive");
    if (psi.twist != TwistTag::ExpDerivation)
        throw DomainViolation("extension expects the derivation twist");
    for (const auto& m : psi.mats)
        if (!toric_mat_is_constant(m)) throw DomainViolation("extension expects point matrices");
    if (!cocycle_check(psi).ok) throw NotACocycle("input fails the cocycle relations");

    std::vector<BdrMat> mats;
    for (const auto& m : psi.mats) mats.push_back(toric_constant_part(m));
    const auto& ctx = ctx_of(mats[0]);
    const int vpm = vp_int(ctx->prof.p, M);
    if (psi.level < vpm) throw DomainViolation("cocycle level too small for this M");

    SimultaneousCanonicalForm scf = simultaneous_canonical_form(mats, psi.level);
    BdrMat vin = bdr_mat_inverse(scf.conjugator);

    Cocycle out;
    out.d = psi.d;
    out.r = psi.r;
    out.level = psi.level - vpm;
    out.twist = TwistTag::ExpDerivation;
    for (int i = 0; i < psi.d; ++i) {
        const auto& blocks = scf.blocks[static_cast<size_t>(i)];
        std::vector<BdrMat> root_blocks;
        for (size_t u = 0; u < blocks.size(); ++u) {
            GammaVector beta = psi.beta(i + 1);
            BdrMat seed = mth_root_seed(blocks[u], M);
            root_blocks.push_back(twisted_mth_root(blocks[u], beta, M, seed));
        }
        // assemble, conjugate back
        BdrMat root(psi.r, psi.r, BdrElement::zero(ctx));
        int offv = 0;
        for (const auto& b : root_blocks) {
            for (int a = 0; a < b.rows(); ++a)
                for (int c = 0; c < b.cols(); ++c) root.at(offv + a, offv + c) = b.at(a, c);
            offv += b.rows();
        }
        BdrMat full = mat_mul(mat_mul(scf.conjugator, root), vin);
        if (!mat_eq(mat_pow(full, static_cast<u64>(M)), mats[static_cast<size_t>(i)]))
            throw ExtensionCommutationFailure("restriction to the sublattice is not exact");
        out.mats.push_back(toric_embed(full, psi.d));
    }
    if (!cocycle_check(out).ok)
        throw ExtensionCommutationFailure("extended generators fail the cocycle relations");
    return out;
}

} // namespace qpr
