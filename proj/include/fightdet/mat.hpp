#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <vector>

#include "fightdet/errors.hpp"
#include "fightdet/rng.hpp"

namespace fightdet {

// Dense 2-D array, row-major. Real is float in production; double is the
// high-precision mode used by the gradient checks.
template <typename Real>
struct MatT {
    int rows = 0;
    int cols = 0;
    std::vector<Real> v; // length rows * cols

    MatT() = default;
    MatT(int r, int c) : rows(r), cols(c), v(std::size_t(r) * std::size_t(c), Real(0)) {}

    Real& operator()(int r, int c) { return v[std::size_t(r) * cols + c]; }
    Real operator()(int r, int c) const { return v[std::size_t(r) * cols + c]; }

    Real* row(int r) { return v.data() + std::size_t(r) * cols; }
    const Real* row(int r) const { return v.data() + std::size_t(r) * cols; }

    std::size_t size() const { return v.size(); }

    bool same_shape(const MatT& o) const { return rows == o.rows && cols == o.cols; }

    std::string shape_str() const {
        return std::to_string(rows) + "x" + std::to_string(cols);
    }
};

using Tensor2 = MatT<float>;
using Tensor2d = MatT<double>;

namespace detail {

// acc[j] += s * w[j]; the hot loop of every dense product.
template <typename Real>
void axpy_acc(double* __restrict acc, const Real* __restrict w, double s, int n) {
    for (int j = 0; j < n; ++j) acc[j] += s * double(w[j]);
}

} // namespace detail

template <typename Real>
void require_same_shape(const MatT<Real>& a, const MatT<Real>& b, const char* what) {
    if (!a.same_shape(b))
        throw DimensionError(std::string(what) + ": shapes " + a.shape_str() + " vs " + b.shape_str());
}

// C = A * B, dot products accumulated in 64-bit before rounding to Real.
template <typename Real>
MatT<Real> matmul(const MatT<Real>& a, const MatT<Real>& b) {
    if (a.cols != b.rows)
        throw DimensionError("matmul: shapes " + a.shape_str() + " vs " + b.shape_str());
    MatT<Real> c(a.rows, b.cols);
    std::vector<double> acc(std::size_t(b.cols));
    for (int i = 0; i < a.rows; ++i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        const Real* ar = a.row(i);
        for (int k = 0; k < a.cols; ++k)
            detail::axpy_acc(acc.data(), b.row(k), double(ar[k]), b.cols);
        Real* cr = c.row(i);
        for (int j = 0; j < b.cols; ++j) cr[j] = Real(acc[j]);
    }
    return c;
}

// z = x W + b for a single row vector, one fused accumulation pass.
template <typename Real>
MatT<Real> row_affine(const MatT<Real>& x, const MatT<Real>& w, const MatT<Real>& b) {
    if (x.rows != 1 || x.cols != w.rows || b.rows != 1 || b.cols != w.cols)
        throw DimensionError("row_affine: shapes " + x.shape_str() + ", " + w.shape_str() +
                             ", " + b.shape_str());
    const int n = w.cols;
    MatT<Real> z(1, n);
    const Real* xr = x.row(0);
    if constexpr (std::is_same_v<Real, double>) {
        double* __restrict ap = z.v.data();
        for (int j = 0; j < n; ++j) ap[j] = b.v[std::size_t(j)];
        for (int k = 0; k < w.rows; ++k) detail::axpy_acc(ap, w.row(k), double(xr[k]), n);
    } else {
        std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
        double* __restrict ap = acc.data();
        for (int j = 0; j < n; ++j) ap[j] = double(b.v[std::size_t(j)]);
        for (int k = 0; k < w.rows; ++k) detail::axpy_acc(ap, w.row(k), double(xr[k]), n);
        for (int j = 0; j < n; ++j) z.v[std::size_t(j)] = Real(ap[j]);
    }
    return z;
}

template <typename Real>
MatT<Real> transpose(const MatT<Real>& a) {
    MatT<Real> t(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

template <typename Real>
MatT<Real> add(const MatT<Real>& a, const MatT<Real>& b) {
    require_same_shape(a, b, "add");
    MatT<Real> c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.v[i] += b.v[i];
    return c;
}

template <typename Real>
MatT<Real> hadamard(const MatT<Real>& a, const MatT<Real>& b) {
    require_same_shape(a, b, "hadamard");
    MatT<Real> c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.v[i] *= b.v[i];
    return c;
}

template <typename Real>
MatT<Real> relu(const MatT<Real>& a) {
    MatT<Real> c = a;
    for (auto& x : c.v) x = x > Real(0) ? x : Real(0);
    return c;
}

template <typename Real>
MatT<Real> sigmoid(const MatT<Real>& a) {
    MatT<Real> c = a;
    for (auto& x : c.v) x = Real(1.0 / (1.0 + std::exp(-double(x))));
    return c;
}

template <typename Real>
MatT<Real> tanh_m(const MatT<Real>& a) {
    MatT<Real> c = a;
    for (auto& x : c.v) x = Real(std::tanh(double(x)));
    return c;
}

// Row-wise softmax with per-row max subtraction; each row sums to 1.
template <typename Real>
MatT<Real> softmax_row(const MatT<Real>& x) {
    MatT<Real> out(x.rows, x.cols);
    for (int i = 0; i < x.rows; ++i) {
        const Real* xi = x.row(i);
        Real* oi = out.row(i);
        double m = double(xi[0]);
        for (int j = 1; j < x.cols; ++j) m = std::max(m, double(xi[j]));
        double sum = 0.0;
        for (int j = 0; j < x.cols; ++j) {
            const double e = std::exp(double(xi[j]) - m);
            oi[j] = Real(e);
            sum += e;
        }
        const double inv = 1.0 / sum;
        for (int j = 0; j < x.cols; ++j) oi[j] = Real(double(oi[j]) * inv);
    }
    return out;
}

// Mean over all elements of squared differences.
template <typename Real>
Real mse_loss(const MatT<Real>& pred, const MatT<Real>& target) {
    require_same_shape(pred, target, "mse_loss");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = double(pred.v[i]) - double(target.v[i]);
        acc += d * d;
    }
    return Real(acc / double(pred.size()));
}

// Inverted dropout: training keeps a unit with probability 1-rate and
// scales it by 1/(1-rate); inference returns the input unchanged.
template <typename Real>
MatT<Real> dropout(const MatT<Real>& x, double rate, SeededRng& rng, bool training) {
    if (rate < 0.0 || rate >= 1.0)
        throw ParamError("dropout: rate must be in [0,1), got " + std::to_string(rate));
    if (!training || rate == 0.0) return x;
    MatT<Real> c = x;
    const Real keep_scale = Real(1.0 / (1.0 - rate));
    for (auto& val : c.v) val = rng.next_unit() < rate ? Real(0) : val * keep_scale;
    return c;
}

// Glorot uniform: +-sqrt(6 / (rows + cols)).
template <typename Real>
MatT<Real> glorot_init(int rows, int cols, SeededRng& rng) {
    if (rows < 1 || cols < 1)
        throw ParamError("glorot_init: dims must be >= 1");
    MatT<Real> m(rows, cols);
    const double limit = std::sqrt(6.0 / double(rows + cols));
    for (auto& x : m.v) x = Real(rng.uniform(-limit, limit));
    return m;
}

// [A | B] with equal row counts.
template <typename Real>
MatT<Real> concat_cols(const MatT<Real>& a, const MatT<Real>& b) {
    if (a.rows != b.rows)
        throw DimensionError("concat_cols: shapes " + a.shape_str() + " vs " + b.shape_str());
    MatT<Real> c(a.rows, a.cols + b.cols);
    for (int i = 0; i < a.rows; ++i) {
        std::copy(a.row(i), a.row(i) + a.cols, c.row(i));
        std::copy(b.row(i), b.row(i) + b.cols, c.row(i) + a.cols);
    }
    return c;
}

template <typename Real>
MatT<Real> reverse_rows(const MatT<Real>& a) {
    MatT<Real> c(a.rows, a.cols);
    for (int i = 0; i < a.rows; ++i)
        std::copy(a.row(i), a.row(i) + a.cols, c.row(a.rows - 1 - i));
    return c;
}

template <typename Real>
bool all_finite(const MatT<Real>& a) {
    for (Real x : a.v)
        if (!std::isfinite(double(x))) return false;
    return true;
}

} // namespace fightdet
