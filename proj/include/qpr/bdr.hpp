#pragma once

#include <memory>
#include <vector>

#include "qpr/coeffs.hpp"

namespace qpr {

/// Working precision of the q-expansion model: prime p, cyclotomic level k,
/// p-adic digits N, nilpotency order alpha of the kernel generator, unramified
/// degree s, and the largest toric root level n_max <= k.
struct PrecisionProfile {
    u64 p = 5;
    int k = 2;
    int N = 12;
    int alpha = 3;
    int s = 1;
    int n_max = 2;
    /// Convergence margin for log/exp domains; at least 2.
    int log_exp_margin = 2;

    void validate() const;
    CoeffRingDescriptor coeff_descriptor() const { return CoeffRingDescriptor{p, N, k, s}; }
    bool operator==(const PrecisionProfile&) const = default;
};

class BdrElement;

struct BdrContext {
    PrecisionProfile prof;
    QuotCtx q;                    // GR[z] / (xi^alpha)
    u64 phi = 0;
    std::vector<GrElt> xi_poly;   // xi = Phi_{p^k}(1+z), monic of degree phi
    std::shared_ptr<const CycloContext> theta_ctx;
    std::shared_ptr<const BdrContext> lower;  // same profile with alpha-1, or null

    // cached ring constants
    std::vector<Scaled> qroot;    // qroot[j] = (1+z)^(p^(k-j)), j = 0..k
    std::vector<Scaled> zeta;     // zeta[n], n = 1..k (index 0 unused)
    Scaled t_elt;
    Scaled xi_elt;
    Scaled mu_elt;
    Scaled unit_t_over_xi;

    static std::shared_ptr<const BdrContext> make(const PrecisionProfile& p);
};

/// Element of the level-k model of the truncated de Rham ring: a p-scaled
/// polynomial in z = q^(1/p^k) - 1 reduced mod xi^alpha, digits mod p^N.
class BdrElement {
public:
    BdrElement() = default;
    BdrElement(std::shared_ptr<const BdrContext> ctx, Scaled v)
        : ctx_(std::move(ctx)), v_(std::move(v)) {}

    static BdrElement from_int(const std::shared_ptr<const BdrContext>& ctx, i64 n);
    static BdrElement zero(const std::shared_ptr<const BdrContext>& ctx);
    static BdrElement one(const std::shared_ptr<const BdrContext>& ctx);
    static BdrElement gen(const std::shared_ptr<const BdrContext>& ctx);  // z

    const std::shared_ptr<const BdrContext>& ctx() const { return ctx_; }
    const Scaled& raw() const { return v_; }
    i64 scale_exp() const { return v_.e; }
    i64 eff_prec() const { return scaled_abs_prec(v_); }

    bool is_zero() const { return scaled_is_zero(ctx_->q, v_); }
    bool is_unit() const;
    BdrElement inv() const;  // NonUnit unless theta image is a unit
    BdrElement div_int(i64 n) const;
    BdrElement div_pow_p(i64 j) const;

    friend BdrElement operator+(const BdrElement& a, const BdrElement& b);
    friend BdrElement operator-(const BdrElement& a, const BdrElement& b);
    friend BdrElement operator*(const BdrElement& a, const BdrElement& b);
    friend BdrElement operator-(const BdrElement& a);

private:
    std::shared_ptr<const BdrContext> ctx_;
    Scaled v_;
};

bool eq(const BdrElement& a, const BdrElement& b);
i64 content_valuation(const BdrElement& a);
void check_same_ctx(const BdrElement& a, const BdrElement& b);
BdrElement pow(const BdrElement& a, u64 e);

/// Reduction modulo xi; a ring homomorphism onto the coefficient ring.
CycloElement theta(const BdrElement& a);

enum class BdrConstant { Q, Mu, Xi, T, UnitTOverXi };
BdrElement constant(const std::shared_ptr<const BdrContext>& ctx, BdrConstant which);
BdrElement q_root(const std::shared_ptr<const BdrContext>& ctx, int j);   // (1+z)^(p^(k-j))
BdrElement zeta(const std::shared_ptr<const BdrContext>& ctx, int n);     // primitive p^n-th root of 1

/// exp on the domain theta(x) == 0 mod p^margin (kernel directions are free).
BdrElement exp_small(const BdrElement& x);
/// log on units with theta(u - 1) == 0 mod p^margin.
BdrElement log_near_one(const BdrElement& u);

/// Exact division by xi; lands in the alpha-1 model. NotDivisible unless
/// theta(a) vanishes at precision.
BdrElement divide_by_xi(const BdrElement& a);
/// Exact division by t^j, certified by j successive theta-vanishing checks.
BdrElement divide_by_t(const BdrElement& a, int j);

/// Substitution z -> (1+z')^p - 1 into the level-(k+1) model.
BdrElement level_raise(const BdrElement& a, const std::shared_ptr<const BdrContext>& target);

/// Bitwise agreement of two computations of the same value at different digit
/// counts, compared modulo p^min(eff_prec) after scale alignment.
bool agree_at_overlap(const BdrElement& a, const BdrElement& b);

} // namespace qpr
