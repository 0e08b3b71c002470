#pragma once

#include <map>
#include <memory>
#include <vector>

#include "qpr/bdr.hpp"

namespace qpr {

/// gamma = sum a_i gamma_i in the d-dimensional translation group.
struct GammaVector {
    std::vector<i64> a;

    GammaVector() = default;
    explicit GammaVector(std::vector<i64> coords) : a(std::move(coords)) {
        if (a.empty()) throw DomainViolation("gamma vector needs dimension >= 1");
    }
    int d() const { return static_cast<int>(a.size()); }
    GammaVector scaled(i64 m) const;
    GammaVector operator+(const GammaVector& o) const;
    GammaVector operator-() const;
    bool is_zero() const;
};

/// Finite Laurent combination of monomials T^e, e in p^(-level) Z^d, with
/// ring-element coefficients. Exponent keys store the numerators c = p^level e.
class ToricElement {
public:
    ToricElement() = default;
    ToricElement(std::shared_ptr<const BdrContext> ctx, int d, int level,
                 std::map<std::vector<i64>, BdrElement> terms);

    static ToricElement zero(const std::shared_ptr<const BdrContext>& ctx, int d);
    static ToricElement constant(int d, const BdrElement& coeff);
    static ToricElement monomial(int d, int level, const std::vector<i64>& numerators,
                                 const BdrElement& coeff);
    /// T_i at integral level (index 1-based).
    static ToricElement variable(const std::shared_ptr<const BdrContext>& ctx, int d, int i,
                                 i64 power = 1);

    const std::shared_ptr<const BdrContext>& ctx() const { return ctx_; }
    int d() const { return d_; }
    int level() const { return level_; }
    const std::map<std::vector<i64>, BdrElement>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// The T^0 coefficient.
    BdrElement constant_coeff() const;
    i64 min_eff_prec() const;

    ToricElement with_level(int level) const;  // rescale keys to a level >= current
    ToricElement div_int(i64 n) const;         // coefficientwise exact division
    ToricElement div_pow_p(i64 j) const;

    friend ToricElement operator+(const ToricElement& a, const ToricElement& b);
    friend ToricElement operator-(const ToricElement& a, const ToricElement& b);
    friend ToricElement operator*(const ToricElement& a, const ToricElement& b);
    friend ToricElement operator-(const ToricElement& a);
    friend ToricElement operator*(const BdrElement& c, const ToricElement& a);

private:
    void canonicalize();

    std::shared_ptr<const BdrContext> ctx_;
    int d_ = 0;
    int level_ = 0;
    std::map<std::vector<i64>, BdrElement> terms_;
};

bool eq(const ToricElement& a, const ToricElement& b);

/// Root-of-unity action: gamma_i scales T_j^(1/p^n) by zeta(n) when i = j.
ToricElement galois_act(const GammaVector& g, const ToricElement& x);

/// The t-scaled derivation: T^e -> t * (sum a_i e_i) * T^e.
ToricElement partial_gamma(const GammaVector& g, const ToricElement& x);

/// exp of the derivation; a ring automorphism (finite since t is nilpotent).
ToricElement exp_derivation_act(const GammaVector& g, const ToricElement& x);

/// galois_act composed with exp_derivation_act (the orders agree).
ToricElement natural_act(const GammaVector& g, const ToricElement& x);

/// Projector keeping the monomials with exponents in p^(-n') Z^d.
ToricElement normalized_trace(int n_prime, const ToricElement& x);

/// (head, tail) with head = normalized_trace, tail = x - head.
std::pair<ToricElement, ToricElement> trace_complement(int n_prime, const ToricElement& x);

/// Average of galois_act over (Z/p^n)^d; equals normalized_trace(n) pointwise.
ToricElement galois_average(int n, const ToricElement& x);

} // namespace qpr
