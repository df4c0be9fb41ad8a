#pragma once

// Scalar re-implementations of the model stages, used as oracles by the
// unit and acceptance suites. Plain loops over doubles throughout; nothing
// here goes through the library's vectorized forward paths.

#include <cmath>
#include <vector>

#include "fightdet/mat.hpp"

namespace oracle {

inline double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

template <typename Real>
std::vector<double> row_of(const fightdet::MatT<Real>& m, int r) {
    std::vector<double> out(std::size_t(m.cols));
    for (int j = 0; j < m.cols; ++j) out[std::size_t(j)] = double(m(r, j));
    return out;
}

// y_j = sum_i x_i W(i,j) + b_j
template <typename Real>
std::vector<double> affine(const std::vector<double>& x, const fightdet::MatT<Real>& W,
                           const fightdet::MatT<Real>* b) {
    std::vector<double> y(std::size_t(W.cols), 0.0);
    for (int j = 0; j < W.cols; ++j) {
        double acc = b ? double((*b)(0, j)) : 0.0;
        for (int i = 0; i < W.rows; ++i) acc += x[std::size_t(i)] * double(W(i, j));
        y[std::size_t(j)] = acc;
    }
    return y;
}

struct CellState {
    std::vector<double> h, c;
};

// The five LSTM equations, one scalar at a time.
template <typename Real>
CellState lstm_cell(const std::vector<double>& x, const std::vector<double>& h_prev,
                    const std::vector<double>& c_prev, const fightdet::MatT<Real>& Wi,
                    const fightdet::MatT<Real>& Wf, const fightdet::MatT<Real>& Wo,
                    const fightdet::MatT<Real>& Wg, const fightdet::MatT<Real>& Ui,
                    const fightdet::MatT<Real>& Uf, const fightdet::MatT<Real>& Uo,
                    const fightdet::MatT<Real>& Ug, const fightdet::MatT<Real>& bi,
                    const fightdet::MatT<Real>& bf, const fightdet::MatT<Real>& bo,
                    const fightdet::MatT<Real>& bg) {
    const int h = Wi.cols;
    CellState out;
    out.h.resize(std::size_t(h));
    out.c.resize(std::size_t(h));
    for (int j = 0; j < h; ++j) {
        double zi = double(bi(0, j)), zf = double(bf(0, j)), zo = double(bo(0, j)),
               zg = double(bg(0, j));
        for (std::size_t i = 0; i < x.size(); ++i) {
            zi += x[i] * double(Wi(int(i), j));
            zf += x[i] * double(Wf(int(i), j));
            zo += x[i] * double(Wo(int(i), j));
            zg += x[i] * double(Wg(int(i), j));
        }
        for (std::size_t i = 0; i < h_prev.size(); ++i) {
            zi += h_prev[i] * double(Ui(int(i), j));
            zf += h_prev[i] * double(Uf(int(i), j));
            zo += h_prev[i] * double(Uo(int(i), j));
            zg += h_prev[i] * double(Ug(int(i), j));
        }
        const double gi = sig(zi), gf = sig(zf), go = sig(zo), gg = std::tanh(zg);
        const double c = gf * c_prev[std::size_t(j)] + gi * gg;
        out.c[std::size_t(j)] = c;
        out.h[std::size_t(j)] = go * std::tanh(c);
    }
    return out;
}

// Zero-state scan over the rows of X; returns the final hidden state.
template <typename Real>
std::vector<double> lstm_scan(const fightdet::MatT<Real>& X, const fightdet::MatT<Real>& Wi,
                              const fightdet::MatT<Real>& Wf, const fightdet::MatT<Real>& Wo,
                              const fightdet::MatT<Real>& Wg, const fightdet::MatT<Real>& Ui,
                              const fightdet::MatT<Real>& Uf, const fightdet::MatT<Real>& Uo,
                              const fightdet::MatT<Real>& Ug, const fightdet::MatT<Real>& bi,
                              const fightdet::MatT<Real>& bf, const fightdet::MatT<Real>& bo,
                              const fightdet::MatT<Real>& bg) {
    std::vector<double> h(std::size_t(Wi.cols), 0.0), c(std::size_t(Wi.cols), 0.0);
    for (int t = 0; t < X.rows; ++t) {
        CellState next = lstm_cell(row_of(X, t), h, c, Wi, Wf, Wo, Wg, Ui, Uf, Uo, Ug, bi, bf,
                                   bo, bg);
        h = std::move(next.h);
        c = std::move(next.c);
    }
    return h;
}

struct AttentionOut {
    std::vector<std::vector<double>> A;   // k x k
    std::vector<std::vector<double>> out; // k x d
};

template <typename Real>
AttentionOut attention(const fightdet::MatT<Real>& X, const fightdet::MatT<Real>& Wq,
                       const fightdet::MatT<Real>& Wk, const fightdet::MatT<Real>& Wv) {
    const int k = X.rows, d = X.cols;
    const std::size_t uk = std::size_t(k);
    std::vector<std::vector<double>> Q(uk), K(uk), V(uk);
    for (int r = 0; r < k; ++r) {
        auto x = row_of(X, r);
        Q[std::size_t(r)] = affine(x, Wq, static_cast<const fightdet::MatT<Real>*>(nullptr));
        K[std::size_t(r)] = affine(x, Wk, static_cast<const fightdet::MatT<Real>*>(nullptr));
        V[std::size_t(r)] = affine(x, Wv, static_cast<const fightdet::MatT<Real>*>(nullptr));
    }
    AttentionOut res;
    res.A.assign(std::size_t(k), std::vector<double>(std::size_t(k), 0.0));
    res.out.assign(std::size_t(k), std::vector<double>(std::size_t(d), 0.0));
    const double scale = 1.0 / std::sqrt(double(d));
    for (int i = 0; i < k; ++i) {
        std::vector<double> logits(std::size_t(k), 0.0);
        double mx = -1e300;
        for (int j = 0; j < k; ++j) {
            double s = 0.0;
            for (int c = 0; c < d; ++c) s += Q[std::size_t(i)][std::size_t(c)] * K[std::size_t(j)][std::size_t(c)];
            logits[std::size_t(j)] = s * scale;
            mx = std::max(mx, logits[std::size_t(j)]);
        }
        double sum = 0.0;
        for (int j = 0; j < k; ++j) {
            logits[std::size_t(j)] = std::exp(logits[std::size_t(j)] - mx);
            sum += logits[std::size_t(j)];
        }
        for (int j = 0; j < k; ++j) res.A[std::size_t(i)][std::size_t(j)] = logits[std::size_t(j)] / sum;
        for (int c = 0; c < d; ++c) {
            double acc = 0.0;
            for (int j = 0; j < k; ++j)
                acc += res.A[std::size_t(i)][std::size_t(j)] * V[std::size_t(j)][std::size_t(c)];
            res.out[std::size_t(i)][std::size_t(c)] = acc;
        }
    }
    return res;
}

// relu -> (optional mask) -> sigmoid -> softmax head, layer by layer.
template <typename Real>
std::vector<double> head(const std::vector<double>& v, const fightdet::MatT<Real>& W1,
                         const fightdet::MatT<Real>& b1, const fightdet::MatT<Real>& W2,
                         const fightdet::MatT<Real>& b2, const fightdet::MatT<Real>& W3,
                         const fightdet::MatT<Real>& b3,
                         const std::vector<double>* mask = nullptr) {
    std::vector<double> a1 = affine(v, W1, &b1);
    for (auto& x : a1) x = x > 0.0 ? x : 0.0;
    if (mask)
        for (std::size_t i = 0; i < a1.size(); ++i) a1[i] *= (*mask)[i];
    std::vector<double> a2 = affine(a1, W2, &b2);
    for (auto& x : a2) x = sig(x);
    std::vector<double> z3 = affine(a2, W3, &b3);
    const double mx = std::max(z3[0], z3[1]);
    const double e0 = std::exp(z3[0] - mx), e1 = std::exp(z3[1] - mx);
    return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

} // namespace oracle
