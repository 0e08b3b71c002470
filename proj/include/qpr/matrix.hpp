#pragma once

#include <vector>

#include "qpr/errors.hpp"

namespace qpr {

template <class T>
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols, T fill) : rows_(rows), cols_(cols), d_(static_cast<size_t>(rows) * cols, fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& at(int i, int j) { return d_[static_cast<size_t>(i) * cols_ + j]; }
    const T& at(int i, int j) const { return d_[static_cast<size_t>(i) * cols_ + j]; }

    std::vector<T>& data() { return d_; }
    const std::vector<T>& data() const { return d_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<T> d_;
};

template <class T>
Mat<T> mat_add(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> r = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
    return r;
}

template <class T>
Mat<T> mat_sub(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> r = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j) - b.at(i, j);
    return r;
}

template <class T>
Mat<T> mat_neg(const Mat<T>& a) {
    Mat<T> r = a;
    for (auto& x : r.data()) x = -x;
    return r;
}

template <class T>
Mat<T> mat_mul(const Mat<T>& a, const Mat<T>& b) {
    if (a.cols() != b.rows()) throw DomainViolation("matrix shape mismatch");
    Mat<T> r(a.rows(), b.cols(), a.at(0, 0) - a.at(0, 0));
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k)
            for (int j = 0; j < b.cols(); ++j) r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
    return r;
}

template <class T>
Mat<T> mat_scale(const T& c, const Mat<T>& a) {
    Mat<T> r = a;
    for (auto& x : r.data()) x = c * x;
    return r;
}

template <class T>
bool mat_eq(const Mat<T>& a, const Mat<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (!eq(a.at(i, j), b.at(i, j))) return false;
    return true;
}

template <class T>
bool mat_is_zero(const Mat<T>& a) {
    for (const auto& x : a.data())
        if (!x.is_zero()) return false;
    return true;
}

} // namespace qpr
