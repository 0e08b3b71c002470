#include "qpr/toric.hpp"

#include <algorithm>

namespace qpr {

GammaVector GammaVector::scaled(i64 m) const {
    GammaVector r = *this;
    for (auto& c : r.a) c *= m;
    return r;
}

GammaVector GammaVector::operator+(const GammaVector& o) const {
    if (a.size() != o.a.size()) throw DomainViolation("gamma dimension mismatch");
    GammaVector r = *this;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
    return r;
}

GammaVector GammaVector::operator-() const { return scaled(-1); }

bool GammaVector::is_zero() const {
    for (i64 c : a)
        if (c != 0) return false;
    return true;
}

ToricElement::ToricElement(std::shared_ptr<const BdrContext> ctx, int d, int level,
                           std::map<std::vector<i64>, BdrElement> terms)
    : ctx_(std::move(ctx)), d_(d), level_(level), terms_(std::move(terms)) {
    if (d_ < 1) throw DomainViolation("toric dimension must be >= 1");
    if (level_ < 0) throw DomainViolation("negative toric level");
    canonicalize();
}

void ToricElement::canonicalize() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (static_cast<int>(it->first.size()) != d_)
            throw DomainViolation("exponent dimension mismatch");
        if (it->second.is_zero())
            it = terms_.erase(it);
        else
            ++it;
    }
    // drop to the smallest level representing every exponent
    const i64 p = static_cast<i64>(ctx_ ? ctx_->prof.p : 0);
    while (level_ > 0 && !terms_.empty()) {
        bool divisible = true;
        for (const auto& [key, coeff] : terms_) {
            for (i64 c : key)
                if (c % p != 0) {
                    divisible = false;
                    break;
                }
            if (!divisible) break;
        }
        if (!divisible) break;
        std::map<std::vector<i64>, BdrElement> next;
        for (auto& [key, coeff] : terms_) {
            std::vector<i64> nk = key;
            for (i64& c : nk) c /= p;
            next.emplace(std::move(nk), coeff);
        }
        terms_ = std::move(next);
        --level_;
    }
    if (terms_.empty()) level_ = 0;
}

ToricElement ToricElement::zero(const std::shared_ptr<const BdrContext>& ctx, int d) {
    return ToricElement(ctx, d, 0, {});
}

ToricElement ToricElement::constant(int d, const BdrElement& coeff) {
    std::map<std::vector<i64>, BdrElement> t;
    t.emplace(std::vector<i64>(static_cast<size_t>(d), 0), coeff);
    return ToricElement(coeff.ctx(), d, 0, std::move(t));
}

ToricElement ToricElement::monomial(int d, int level, const std::vector<i64>& numerators,
                                    const BdrElement& coeff) {
    std::map<std::vector<i64>, BdrElement> t;
    t.emplace(numerators, coeff);
    return ToricElement(coeff.ctx(), d, level, std::move(t));
}

ToricElement ToricElement::variable(const std::shared_ptr<const BdrContext>& ctx, int d, int i,
                                    i64 power) {
    if (i < 1 || i > d) throw DomainViolation("variable index out of range");
    std::vector<i64> key(static_cast<size_t>(d), 0);
    key[static_cast<size_t>(i - 1)] = power;
    return monomial(d, 0, key, BdrElement::one(ctx));
}

bool ToricElement::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() != 1) return false;
    for (i64 c : terms_.begin()->first)
        if (c != 0) return false;
    return true;
}

BdrElement ToricElement::constant_coeff() const {
    auto it = terms_.find(std::vector<i64>(static_cast<size_t>(d_), 0));
    if (it == terms_.end()) return BdrElement::zero(ctx_);
    return it->second;
}

i64 ToricElement::min_eff_prec() const {
    i64 m = kExactPrec;
    for (const auto& [key, coeff] : terms_) m = std::min(m, coeff.eff_prec());
    return m;
}

ToricElement ToricElement::with_level(int level) const {
    if (level < level_) throw DomainViolation("cannot lower toric level by rescaling");
    if (level == level_) return *this;
    i64 f = 1;
    for (int i = level_; i < level; ++i) f *= static_cast<i64>(ctx_->prof.p);
    std::map<std::vector<i64>, BdrElement> t;
    for (const auto& [key, coeff] : terms_) {
        std::vector<i64> nk = key;
        for (i64& c : nk) c *= f;
        t.emplace(std::move(nk), coeff);
    }
    ToricElement r;
    r.ctx_ = ctx_;
    r.d_ = d_;
    r.level_ = level;
    r.terms_ = std::move(t);
    return r;  // already canonical apart from the forced level
}

ToricElement ToricElement::div_int(i64 n) const {
    std::map<std::vector<i64>, BdrElement> t;
    for (const auto& [key, coeff] : terms_) t.emplace(key, coeff.div_int(n));
    return ToricElement(ctx_, d_, level_, std::move(t));
}

ToricElement ToricElement::div_pow_p(i64 j) const {
    std::map<std::vector<i64>, BdrElement> t;
    for (const auto& [key, coeff] : terms_) t.emplace(key, coeff.div_pow_p(j));
    return ToricElement(ctx_, d_, level_, std::move(t));
}

namespace {

void check_compatible(const ToricElement& a, const ToricElement& b) {
    if (a.d() != b.d()) throw DomainViolation("toric dimension mismatch");
    if (!a.is_zero() && !b.is_zero() && !(a.ctx()->prof == b.ctx()->prof))
        throw DomainViolation("mixed precision profiles");
}

} // namespace

ToricElement operator+(const ToricElement& a, const ToricElement& b) {
    check_compatible(a, b);
    int lv = std::max(a.level(), b.level());
    ToricElement ar = a.with_level(lv), br = b.with_level(lv);
    std::map<std::vector<i64>, BdrElement> t = ar.terms();
    for (const auto& [key, coeff] : br.terms()) {
        auto it = t.find(key);
        if (it == t.end())
            t.emplace(key, coeff);
        else
            it->second = it->second + coeff;
    }
    return ToricElement(a.is_zero() ? b.ctx() : a.ctx(), a.d(), lv, std::move(t));
}

ToricElement operator-(const ToricElement& a) {
    std::map<std::vector<i64>, BdrElement> t;
    for (const auto& [key, coeff] : a.terms()) t.emplace(key, -coeff);
    return ToricElement(a.ctx(), a.d(), a.level(), std::move(t));
}

ToricElement operator-(const ToricElement& a, const ToricElement& b) { return a + (-b); }

ToricElement operator*(const ToricElement& a, const ToricElement& b) {
    check_compatible(a, b);
    int lv = std::max(a.level(), b.level());
    ToricElement ar = a.with_level(lv), br = b.with_level(lv);
    std::map<std::vector<i64>, BdrElement> t;
    for (const auto& [ka, ca] : ar.terms())
        for (const auto& [kb, cb] : br.terms()) {
            std::vector<i64> k(ka.size());
            for (size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
            BdrElement prod = ca * cb;
            auto it = t.find(k);
            if (it == t.end())
                t.emplace(std::move(k), prod);
            else
                it->second = it->second + prod;
        }
    return ToricElement(a.is_zero() ? b.ctx() : a.ctx(), a.d(), lv, std::move(t));
}

ToricElement operator*(const BdrElement& c, const ToricElement& a) {
    std::map<std::vector<i64>, BdrElement> t;
    for (const auto& [key, coeff] : a.terms()) t.emplace(key, c * coeff);
    return ToricElement(a.ctx() ? a.ctx() : c.ctx(), a.d(), a.level(), std::move(t));
}

bool eq(const ToricElement& a, const ToricElement& b) {
    ToricElement d = a - b;
    for (const auto& [key, coeff] : d.terms())
        if (!coeff.is_zero()) return false;
    return true;
}

namespace {

/// zeta(n)^w evaluated as q_root(n)^w * exp(-w t / p^n): the root part is an
/// exact integral power, the exp part a single kernel series, so the factors
/// stay multiplicative in w at precision (no reliance on the torsion order).
BdrElement galois_scalar(const std::shared_ptr<const BdrContext>& ctx, int n, i64 w) {
    if (w == 0 || n == 0) return BdrElement::one(ctx);
    BdrElement root = q_root(ctx, n);
    if (w < 0) root = root.inv();
    u64 e = static_cast<u64>(w < 0 ? -w : w);
    BdrElement root_pow = pow(root, e);
    BdrElement arg = -(constant(ctx, BdrConstant::T) * BdrElement::from_int(ctx, w)).div_pow_p(n);
    return root_pow * exp_small(arg);
}

} // namespace

ToricElement galois_act(const GammaVector& g, const ToricElement& x) {
    if (g.d() != x.d()) throw DomainViolation("gamma dimension mismatch");
    if (x.is_zero()) return x;
    if (x.level() > x.ctx()->prof.n_max)
        throw LevelExceedsK("toric level exceeds the available root level");
    const int n = x.level();
    std::map<std::vector<i64>, BdrElement> t;
    for (const auto& [key, coeff] : x.terms()) {
        i64 w = 0;
        for (size_t i = 0; i < key.size(); ++i) w += g.a[i] * key[i];
        t.emplace(key, galois_scalar(x.ctx(), n, w) * coeff);
    }
    return ToricElement(x.ctx(), x.d(), n, std::move(t));
}

ToricElement partial_gamma(const GammaVector& g, const ToricElement& x) {
    if (g.d() != x.d()) throw DomainViolation("gamma dimension mismatch");
    if (x.is_zero()) return x;
    const int n = x.level();
    BdrElement t_const = constant(x.ctx(), BdrConstant::T);
    std::map<std::vector<i64>, BdrElement> t;
    for (const auto& [key, coeff] : x.terms()) {
        i64 w = 0;
        for (size_t i = 0; i < key.size(); ++i) w += g.a[i] * key[i];
        if (w == 0) continue;
        BdrElement c = ((t_const * coeff) * BdrElement::from_int(x.ctx(), w)).div_pow_p(n);
        t.emplace(key, c);
    }
    return ToricElement(x.ctx(), x.d(), n, std::move(t));
}

ToricElement exp_derivation_act(const GammaVector& g, const ToricElement& x) {
    if (g.d() != x.d()) throw DomainViolation("gamma dimension mismatch");
    if (x.is_zero()) return x;
    const int n = x.level();
    BdrElement t_const = constant(x.ctx(), BdrConstant::T);
    std::map<std::vector<i64>, BdrElement> t;
    for (const auto& [key, coeff] : x.terms()) {
        i64 w = 0;
        for (size_t i = 0; i < key.size(); ++i) w += g.a[i] * key[i];
        if (w == 0) {
            t.emplace(key, coeff);
            continue;
        }
        BdrElement arg = (t_const * BdrElement::from_int(x.ctx(), w)).div_pow_p(n);
        t.emplace(key, exp_small(arg) * coeff);
    }
    return ToricElement(x.ctx(), x.d(), n, std::move(t));
}

ToricElement natural_act(const GammaVector& g, const ToricElement& x) {
    return galois_act(g, exp_derivation_act(g, x));
}

ToricElement normalized_trace(int n_prime, const ToricElement& x) {
    if (n_prime < 0) throw DomainViolation("negative trace level");
    if (x.is_zero() || x.level() <= n_prime) return x;
    i64 f = 1;
    for (int i = n_prime; i < x.level(); ++i) f *= static_cast<i64>(x.ctx()->prof.p);
    std::map<std::vector<i64>, BdrElement> t;
    for (const auto& [key, coeff] : x.terms()) {
        bool keep = true;
        for (i64 c : key)
            if (c % f != 0) {
                keep = false;
                break;
            }
        if (keep) t.emplace(key, coeff);
    }
    return ToricElement(x.ctx(), x.d(), x.level(), std::move(t));
}

std::pair<ToricElement, ToricElement> trace_complement(int n_prime, const ToricElement& x) {
    ToricElement head = normalized_trace(n_prime, x);
    return {head, x - head};
}

ToricElement galois_average(int n, const ToricElement& x) {
    if (x.is_zero()) return x;
    if (n < x.level()) throw DomainViolation("averaging level below the element level");
    if (n > x.ctx()->prof.n_max) throw LevelExceedsK("averaging level exceeds the root level");
    const int d = x.d();
    i64 pn = 1;
    for (int i = 0; i < n; ++i) pn *= static_cast<i64>(x.ctx()->prof.p);
    ToricElement acc = ToricElement::zero(x.ctx(), d);
    std::vector<i64> g(static_cast<size_t>(d), 0);
    ToricElement xl = x.with_level(n);
    while (true) {
        acc = acc + galois_act(GammaVector(g), xl);
        int i = 0;
        while (i < d) {
            if (++g[static_cast<size_t>(i)] < pn) break;
            g[static_cast<size_t>(i)] = 0;
            ++i;
        }
        if (i == d) break;
    }
    std::map<std::vector<i64>, BdrElement> t;
    for (const auto& [key, coeff] : acc.terms())
        t.emplace(key, coeff.div_pow_p(static_cast<i64>(n) * d));
    return ToricElement(x.ctx(), d, acc.level(), std::move(t));
}

} // namespace qpr
