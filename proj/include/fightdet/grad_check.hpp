#pragma once

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <vector>

#include "fightdet/param_store.hpp"

namespace fightdet {

// Central-difference gradient of a scalar function of the parameters,
// (f(p+eps) - f(p-eps)) / 2eps per scalar. f must be pure and deterministic.
// Work is split across threads, each perturbing its own copy of the store;
// results land in fixed slots so the output does not depend on scheduling.
template <typename Real, typename F>
std::vector<MatT<Real>> finite_diff_grad(const F& f, const ParamStoreT<Real>& params,
                                         Real eps, int threads = 0) {
    if (!(eps > Real(0)))
        throw ParamError("finite_diff_grad: epsilon must be > 0");

    const auto& entries = params.entries();
    std::vector<MatT<Real>> out;
    out.reserve(entries.size());
    std::size_t total = 0;
    std::vector<std::size_t> entry_base(entries.size());
    for (std::size_t e = 0; e < entries.size(); ++e) {
        out.emplace_back(entries[e].value.rows, entries[e].value.cols);
        entry_base[e] = total;
        total += entries[e].value.size();
    }
    if (total == 0) return out;

    if (threads <= 0) threads = int(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (std::size_t(threads) > total) threads = int(total);

    std::atomic<bool> bad{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&](std::size_t lo, std::size_t hi) {
        try {
            ParamStoreT<Real> local = params;
            std::size_t e = 0;
            for (std::size_t g = lo; g < hi && !bad.load(std::memory_order_relaxed); ++g) {
                while (e + 1 < entries.size() && g >= entry_base[e + 1]) ++e;
                while (g < entry_base[e]) --e;
                const std::size_t off = g - entry_base[e];
                Real& slot = local.entries()[e].value.v[off];
                const Real orig = slot;
                slot = orig + eps;
                const double fp = double(f(local));
                slot = orig - eps;
                const double fm = double(f(local));
                slot = orig;
                if (!std::isfinite(fp) || !std::isfinite(fm)) {
                    bad.store(true, std::memory_order_relaxed);
                    return;
                }
                out[e].v[off] = Real((fp - fm) / (2.0 * double(eps)));
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            bad.store(true, std::memory_order_relaxed);
        }
    };

    if (threads == 1) {
        worker(0, total);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (total + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const std::size_t lo = std::size_t(t) * chunk;
            const std::size_t hi = std::min(total, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    if (first_error) std::rethrow_exception(first_error);
    if (bad.load())
        throw NumericError("finite_diff_grad: objective returned a non-finite value");
    return out;
}

// Largest |a-b| / max(|a|, |b|, floor) over two gradient sets.
template <typename Real>
double max_rel_error(const std::vector<MatT<Real>>& a, const std::vector<MatT<Real>>& b,
                     double floor = 1e-6) {
    double worst = 0.0;
    for (std::size_t e = 0; e < a.size(); ++e) {
        for (std::size_t i = 0; i < a[e].size(); ++i) {
            const double x = double(a[e].v[i]);
            const double y = double(b[e].v[i]);
            const double denom = std::max({std::fabs(x), std::fabs(y), floor});
            worst = std::max(worst, std::fabs(x - y) / denom);
        }
    }
    return worst;
}

} // namespace fightdet
