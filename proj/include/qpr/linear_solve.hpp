#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "qpr/errors.hpp"
#include "qpr/zq.hpp"

namespace qpr {

/// Exact Gaussian elimination over a scaled coefficient ring. Pivots are
/// chosen per column by minimal content valuation; a candidate is accepted
/// only if its valuation is below `margin` and its mantissa inverts. With the
/// default margin only unit pivots are accepted; larger margins let the solve
/// divide by p-powers (the ledger records the loss).
///
/// E must provide: content_valuation(E), E.inv(), operators *, -, and is_zero().
template <class E>
std::vector<E> linear_solve(std::vector<std::vector<E>> a, std::vector<E> b, i64 margin = 1) {
    const size_t n = a.size();
    if (n == 0) return {};
    for (const auto& row : a)
        if (row.size() != n) throw DomainViolation("linear_solve: matrix not square");
    if (b.size() != n) throw DomainViolation("linear_solve: size mismatch");

    for (size_t col = 0; col < n; ++col) {
        // candidates sorted by valuation
        std::vector<std::pair<i64, size_t>> cand;
        for (size_t r = col; r < n; ++r) {
            i64 v = content_valuation(a[r][col]);
            if (v < margin) cand.emplace_back(v, r);
        }
        std::sort(cand.begin(), cand.end());
        bool done = false;
        for (auto [v, r] : cand) {
            E piv_inv;
            try {
                piv_inv = a[r][col].inv();
            } catch (const NonUnit&) {
                continue;
            }
            if (r != col) {
                std::swap(a[r], a[col]);
                std::swap(b[r], b[col]);
            }
            for (size_t j = col; j < n; ++j) a[col][j] = piv_inv * a[col][j];
            b[col] = piv_inv * b[col];
            for (size_t rr = 0; rr < n; ++rr) {
                if (rr == col || a[rr][col].is_zero()) continue;
                E f = a[rr][col];
                for (size_t j = col; j < n; ++j) a[rr][j] = a[rr][j] - f * a[col][j];
                b[rr] = b[rr] - f * b[col];
            }
            done = true;
            break;
        }
        if (!done) throw SingularAtPrecision("no admissible pivot in column " + std::to_string(col));
    }
    return b;
}

} // namespace qpr
