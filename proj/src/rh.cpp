#include "qpr/rh.hpp"

#include <algorithm>

namespace qpr {

namespace {

GammaVector gamma_unit(int d, int i) {
    std::vector<i64> a(static_cast<size_t>(d), 0);
    a[static_cast<size_t>(i - 1)] = 1;
    return GammaVector(std::move(a));
}

i64 pow_i64(i64 b, int e) {
    i64 r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

/// min over terms of the theta-image valuation of the coefficients.
i64 toric_theta_val(const ToricElement& x) {
    i64 m = kExactPrec;
    for (const auto& [key, coeff] : x.terms()) {
        CycloElement th = theta(coeff);
        m = std::min(m, th.is_zero() ? kExactPrec : content_valuation(th));
    }
    return m;
}

const std::shared_ptr<const BdrContext>& mat_ctx(const ToricMat& m) {
    return m.at(0, 0).ctx();
}

i64 toric_min_val(const std::vector<ToricElement>& v) {
    i64 m = kExactPrec;
    for (const auto& x : v)
        for (const auto& [key, coeff] : x.terms()) m = std::min(m, content_valuation(coeff));
    return m;
}

i64 toric_claim(const std::vector<ToricElement>& v) {
    i64 m = kExactPrec;
    for (const auto& x : v) m = std::min(m, x.min_eff_prec());
    return m;
}

bool toric_all_raw_zero(const std::vector<ToricElement>& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

} // namespace

std::string twist_name(TwistTag t) {
    switch (t) {
        case TwistTag::Galois: return "galois";
        case TwistTag::ExpDerivation: return "exp_derivation";
        case TwistTag::Natural: return "natural";
    }
    return "?";
}

TwistTag twist_from_name(const std::string& name) {
    if (name == "galois") return TwistTag::Galois;
    if (name == "exp_derivation") return TwistTag::ExpDerivation;
    if (name == "natural") return TwistTag::Natural;
    throw SerializationError("unknown twist tag: " + name);
}

ToricElement act(TwistTag twist, const GammaVector& g, const ToricElement& x) {
    switch (twist) {
        case TwistTag::Galois: return galois_act(g, x);
        case TwistTag::ExpDerivation: return exp_derivation_act(g, x);
        case TwistTag::Natural: return natural_act(g, x);
    }
    throw DomainViolation("unknown twist");
}

ToricMat act(TwistTag twist, const GammaVector& g, const ToricMat& m) {
    ToricMat r = m;
    for (auto& x : r.data()) x = act(twist, g, x);
    return r;
}

ToricMat toric_identity(const std::shared_ptr<const BdrContext>& ctx, int d, int r) {
    ToricMat m(r, r, ToricElement::zero(ctx, d));
    for (int i = 0; i < r; ++i)
        m.at(i, i) = ToricElement::constant(d, BdrElement::one(ctx));
    return m;
}

ToricMat toric_embed(const BdrMat& m, int d) {
    ToricMat r(m.rows(), m.cols(), ToricElement::zero(m.at(0, 0).ctx(), d));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = ToricElement::constant(d, m.at(i, j));
    return r;
}

bool toric_mat_is_constant(const ToricMat& m) {
    for (const auto& x : m.data())
        if (!x.is_constant()) return false;
    return true;
}

BdrMat toric_constant_part(const ToricMat& m) {
    BdrMat r(m.rows(), m.cols(), BdrElement::zero(mat_ctx(m)));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = m.at(i, j).constant_coeff();
    return r;
}

BdrMat bdr_mat_identity(const std::shared_ptr<const BdrContext>& ctx, int r) {
    BdrMat m(r, r, BdrElement::zero(ctx));
    for (int i = 0; i < r; ++i) m.at(i, i) = BdrElement::one(ctx);
    return m;
}

BdrMat bdr_mat_inverse(const BdrMat& m) {
    if (m.rows() != m.cols()) throw DomainViolation("inverse of a nonsquare matrix");
    int n = m.rows();
    BdrMat a = m;
    BdrMat inv = bdr_mat_identity(m.at(0, 0).ctx(), n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int row = col; row < n; ++row)
            if (a.at(row, col).is_unit()) { piv = row; break; }
        if (piv < 0) throw NonUnit("matrix not invertible over the local base ring");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        BdrElement d = a.at(col, col).inv();
        for (int j = 0; j < n; ++j) {
            a.at(col, j) = d * a.at(col, j);
            inv.at(col, j) = d * inv.at(col, j);
        }
        for (int row = 0; row < n; ++row) {
            if (row == col || a.at(row, col).is_zero()) continue;
            BdrElement f = a.at(row, col);
            for (int j = 0; j < n; ++j) {
                a.at(row, j) = a.at(row, j) - f * a.at(col, j);
                inv.at(row, j) = inv.at(row, j) - f * inv.at(col, j);
            }
        }
    }
    return inv;
}

ToricMat toric_mat_inverse(const ToricMat& m) {
    if (m.rows() != m.cols()) throw DomainViolation("inverse of a nonsquare matrix");
    const auto& ctx = mat_ctx(m);
    int d = m.at(0, 0).d();
    ToricMat x = toric_embed(bdr_mat_inverse(toric_constant_part(m)), d);
    ToricMat one = toric_identity(ctx, d, m.rows());
    ToricMat two = mat_add(one, one);
    for (int it = 0; it < 24; ++it) {
        ToricMat prod = mat_mul(m, x);
        if (mat_eq(prod, one)) return x;
        x = mat_mul(x, mat_sub(two, prod));
    }
    throw NonUnit("matrix inverse iteration did not converge");
}

GammaVector Cocycle::beta(int i) const {
    return gamma_unit(d, i).scaled(pow_i64(static_cast<i64>(mats[0].at(0, 0).ctx()->prof.p), level));
}

CocycleCheckResult cocycle_check(const Cocycle& c) {
    CocycleCheckResult res;
    for (int i = 1; i <= c.d; ++i)
        for (int j = i + 1; j <= c.d; ++j) {
            const ToricMat& pi = c.mats[static_cast<size_t>(i - 1)];
            const ToricMat& pj = c.mats[static_cast<size_t>(j - 1)];
            ToricMat lhs = mat_mul(pi, act(c.twist, c.beta(i), pj));
            ToricMat rhs = mat_mul(pj, act(c.twist, c.beta(j), pi));
            ToricMat diff = mat_sub(lhs, rhs);
            if (!mat_is_zero(diff)) res.ok = false;
            res.residuals.push_back(std::move(diff));
        }
    return res;
}

ToricMat cocycle_eval(const Cocycle& c, const GammaVector& g) {
    if (g.d() != c.d) throw DomainViolation("gamma dimension mismatch");
    const auto& ctx = mat_ctx(c.mats[0]);
    i64 step = pow_i64(static_cast<i64>(ctx->prof.p), c.level);
    for (i64 coord : g.a)
        if (coord % step != 0) throw DomainViolation("gamma not in the cocycle domain");
    ToricMat result = toric_identity(ctx, c.d, c.r);
    GammaVector offset = gamma_unit(c.d, 1).scaled(0);
    for (int i = 1; i <= c.d; ++i) {
        i64 steps = g.a[static_cast<size_t>(i - 1)] / step;
        GammaVector beta_i = c.beta(i);
        if (steps >= 0) {
            for (i64 s = 0; s < steps; ++s) {
                result = mat_mul(result, act(c.twist, offset, c.mats[static_cast<size_t>(i - 1)]));
                offset = offset + beta_i;
            }
        } else {
            ToricMat inv_tw = act(c.twist, -beta_i, toric_mat_inverse(c.mats[static_cast<size_t>(i - 1)]));
            for (i64 s = 0; s < -steps; ++s) {
                offset = offset + (-beta_i);
                result = mat_mul(result, act(c.twist, offset, inv_tw));
            }
        }
    }
    return result;
}

ToricMat operator_log(const ToricMat& phi, TwistTag twist, const GammaVector& beta, int margin) {
    const auto& ctx = mat_ctx(phi);
    const int r = phi.rows();
    const int d = phi.at(0, 0).d();
    ToricMat one = toric_identity(ctx, d, r);
    ToricMat diff = mat_sub(phi, one);
    for (const auto& x : diff.data())
        if (!x.is_zero() && toric_theta_val(x) < std::min<i64>(margin, x.min_eff_prec()))
            throw DomainViolation("cocycle entries not near the identity");
    const int cap = 4 * (ctx->prof.N + 2 * ctx->prof.alpha) + 64;
    ToricMat out(r, r, ToricElement::zero(ctx, d));
    for (int j = 0; j < r; ++j) {
        std::vector<ToricElement> v(static_cast<size_t>(r), ToricElement::zero(ctx, d));
        v[static_cast<size_t>(j)] = ToricElement::constant(d, BdrElement::one(ctx));
        std::vector<ToricElement> col(static_cast<size_t>(r), ToricElement::zero(ctx, d));
        bool done = false;
        for (int n = 1; n <= cap; ++n) {
            // v <- Phi * act(v) - v
            std::vector<ToricElement> next;
            next.reserve(v.size());
            for (int i = 0; i < r; ++i) {
                ToricElement s = ToricElement::zero(ctx, d);
                for (int k = 0; k < r; ++k) s = s + phi.at(i, k) * act(twist, beta, v[static_cast<size_t>(k)]);
                next.push_back(s - v[static_cast<size_t>(i)]);
            }
            v = std::move(next);
            if (toric_all_raw_zero(v) || toric_min_val(v) >= toric_claim(col) + 4) {
                done = true;
                break;
            }
            for (int i = 0; i < r; ++i) {
                ToricElement term = v[static_cast<size_t>(i)];
                std::map<std::vector<i64>, BdrElement> scaled_terms;
                for (const auto& [key, coeff] : term.terms())
                    scaled_terms.emplace(key, (n % 2 == 0 ? -coeff : coeff).div_int(n));
                ToricElement t(ctx, d, term.level(), std::move(scaled_terms));
                col[static_cast<size_t>(i)] = col[static_cast<size_t>(i)] + t;
            }
        }
        if (!done) throw PrecisionExhausted("operator log did not terminate");
        for (int i = 0; i < r; ++i) out.at(i, j) = col[static_cast<size_t>(i)];
    }
    return out;
}

IntegrabilityResult integrability_check(const TConnection& n) {
    IntegrabilityResult res;
    for (int i = 1; i <= n.d; ++i)
        for (int j = i + 1; j <= n.d; ++j) {
            const ToricMat& pi = n.mats[static_cast<size_t>(i - 1)];
            const ToricMat& pj = n.mats[static_cast<size_t>(j - 1)];
            ToricMat dj(pj.rows(), pj.cols(), ToricElement::zero(mat_ctx(pj), n.d));
            ToricMat di = dj;
            for (int a = 0; a < pj.rows(); ++a)
                for (int b = 0; b < pj.cols(); ++b) {
                    dj.at(a, b) = partial_gamma(gamma_unit(n.d, i), pj.at(a, b));
                    di.at(a, b) = partial_gamma(gamma_unit(n.d, j), pi.at(a, b));
                }
            ToricMat comm = mat_sub(mat_mul(pi, pj), mat_mul(pj, pi));
            ToricMat diff = mat_add(mat_sub(dj, di), comm);
            if (!mat_is_zero(diff)) res.ok = false;
            res.residuals.push_back(std::move(diff));
        }
    return res;
}

TConnection log_correspondence(const Cocycle& c) {
    const auto& ctx = mat_ctx(c.mats[0]);
    const int margin = ctx->prof.log_exp_margin;
    TConnection out;
    out.d = c.d;
    out.r = c.r;
    for (int i = 1; i <= c.d; ++i) {
        ToricMat li = operator_log(c.mats[static_cast<size_t>(i - 1)], c.twist, c.beta(i), margin);
        for (auto& x : li.data()) {
            std::map<std::vector<i64>, BdrElement> t;
            for (const auto& [key, coeff] : x.terms()) t.emplace(key, coeff.div_pow_p(c.level));
            x = ToricElement(ctx, c.d, x.level(), std::move(t));
        }
        out.mats.push_back(std::move(li));
    }
    if (!integrability_check(out).ok)
        throw NotACocycle("logarithm is not integrable beyond precision");
    return out;
}

int min_exp_level(const TConnection& n) {
    i64 worst = 0;
    for (const auto& m : n.mats)
        for (const auto& x : m.data()) {
            if (x.is_zero()) continue;
            const auto& ctx = x.ctx();
            i64 need = ctx->prof.log_exp_margin - toric_theta_val(x);
            worst = std::max(worst, need);
        }
    return static_cast<int>(std::max<i64>(worst, 0));
}

Cocycle exp_correspondence(const TConnection& n, int level) {
    if (n.mats.empty()) throw DomainViolation("empty connection");
    const auto& ctx = mat_ctx(n.mats[0]);
    const int margin = ctx->prof.log_exp_margin;
    if (level < 0) throw DomainViolation("negative level");
    for (const auto& m : n.mats)
        for (const auto& x : m.data())
            if (!x.is_zero() && toric_theta_val(x) + level < std::min<i64>(margin, x.min_eff_prec()))
                throw DomainViolation("connection too large for this level; raise the level");
    if (!integrability_check(n).ok) throw NotIntegrable("connection fails integrability");

    const int r = n.r, d = n.d;
    i64 pl = pow_i64(static_cast<i64>(ctx->prof.p), level);
    const int cap = 4 * (ctx->prof.N + 2 * ctx->prof.alpha) + 64;
    Cocycle out;
    out.d = d;
    out.r = r;
    out.level = level;
    out.twist = TwistTag::ExpDerivation;
    BdrElement plc = BdrElement::from_int(ctx, pl);
    for (int i = 1; i <= d; ++i) {
        GammaVector beta = gamma_unit(d, i).scaled(pl);
        const ToricMat& phi = n.mats[static_cast<size_t>(i - 1)];
        ToricMat mat(r, r, ToricElement::zero(ctx, d));
        for (int j = 0; j < r; ++j) {
            std::vector<ToricElement> u(static_cast<size_t>(r), ToricElement::zero(ctx, d));
            u[static_cast<size_t>(j)] = ToricElement::constant(d, BdrElement::one(ctx));
            std::vector<ToricElement> col = u;
            bool done = false;
            for (int step = 1; step <= cap; ++step) {
                std::vector<ToricElement> next(static_cast<size_t>(r), ToricElement::zero(ctx, d));
                for (int a = 0; a < r; ++a) {
                    ToricElement s = partial_gamma(beta, u[static_cast<size_t>(a)]);
                    for (int k = 0; k < r; ++k)
                        s = s + plc * (phi.at(a, k) * u[static_cast<size_t>(k)]);
                    next[static_cast<size_t>(a)] = s.div_int(step);
                }
                u = std::move(next);
                if (toric_all_raw_zero(u) || toric_min_val(u) >= toric_claim(col) + 4) {
                    done = true;
                    break;
                }
                for (int jj = 0; jj < r; ++jj)
                    col[static_cast<size_t>(jj)] = col[static_cast<size_t>(jj)] + u[static_cast<size_t>(jj)];
            }
            if (!done) throw PrecisionExhausted("operator exponential did not terminate");
            for (int jj = 0; jj < r; ++jj) mat.at(jj, j) = col[static_cast<size_t>(jj)];
        }
        out.mats.push_back(std::move(mat));
    }
    if (d > 1 && !cocycle_check(out).ok)
        throw NotIntegrable("exponential fails the cocycle relations beyond precision");
    return out;
}

TConnection gauge_transform(const TConnection& n, const ToricMat& v) {
    ToricMat vinv = toric_mat_inverse(v);
    TConnection out;
    out.d = n.d;
    out.r = n.r;
    for (int i = 1; i <= n.d; ++i) {
        const ToricMat& phi = n.mats[static_cast<size_t>(i - 1)];
        ToricMat dv(v.rows(), v.cols(), ToricElement::zero(mat_ctx(v), n.d));
        for (int a = 0; a < v.rows(); ++a)
            for (int b = 0; b < v.cols(); ++b)
                dv.at(a, b) = partial_gamma(gamma_unit(n.d, i), v.at(a, b));
        out.mats.push_back(mat_add(mat_mul(mat_mul(vinv, phi), v), mat_mul(vinv, dv)));
    }
    return out;
}

Cocycle cocycle_gauge(const Cocycle& c, const ToricMat& v) {
    ToricMat vinv = toric_mat_inverse(v);
    Cocycle out = c;
    for (int i = 1; i <= c.d; ++i) {
        const ToricMat& phi = c.mats[static_cast<size_t>(i - 1)];
        out.mats[static_cast<size_t>(i - 1)] =
            mat_mul(mat_mul(vinv, phi), act(c.twist, c.beta(i), v));
    }
    return out;
}

} // namespace qpr
