#include "doctest.h"

#include <cmath>

#include "fightdet/grad_check.hpp"

using namespace fightdet;

TEST_CASE("finite_diff_grad on f(theta) = theta^2") {
    ParamStoreT<double> ps;
    MatT<double> t(1, 1);
    t(0, 0) = 3.0;
    ps.insert("theta", t);

    auto f = [](const ParamStoreT<double>& p) { return p.value("theta")(0, 0) * p.value("theta")(0, 0); };
    auto g = finite_diff_grad(f, ps, 1e-4);
    CHECK(g[0](0, 0) == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("finite_diff_grad of a constant is zero") {
    ParamStoreT<double> ps;
    ps.insert("w", MatT<double>(3, 2));
    auto f = [](const ParamStoreT<double>&) { return 42.0; };
    auto g = finite_diff_grad(f, ps, 1e-4);
    for (double v : g[0].v) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("finite_diff_grad matches the quadratic-form gradient") {
    // f = 0.5 theta^T A theta, grad = 0.5 (A + A^T) theta
    const int n = 5;
    SeededRng rng(21);
    MatT<double> A(n, n);
    for (auto& v : A.v) v = rng.uniform(-1.0, 1.0);
    MatT<double> theta(n, 1);
    for (auto& v : theta.v) v = rng.uniform(-1.0, 1.0);

    ParamStoreT<double> ps;
    ps.insert("theta", theta);

    auto f = [&](const ParamStoreT<double>& p) {
        const auto& th = p.value("theta");
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += th(i, 0) * A(i, j) * th(j, 0);
        return 0.5 * acc;
    };
    auto g = finite_diff_grad(f, ps, 1e-5);

    for (int i = 0; i < n; ++i) {
        double want = 0.0;
        for (int j = 0; j < n; ++j) want += 0.5 * (A(i, j) + A(j, i)) * theta(j, 0);
        CHECK(std::fabs(g[0](i, 0) - want) < 1e-5);
    }
}

TEST_CASE("finite_diff_grad is identical across thread counts") {
    SeededRng rng(33);
    ParamStoreT<double> ps;
    MatT<double> w(4, 7);
    for (auto& v : w.v) v = rng.uniform(-1.0, 1.0);
    ps.insert("w", w);

    auto f = [](const ParamStoreT<double>& p) {
        double acc = 0.0;
        for (double v : p.value("w").v) acc += std::sin(v) + v * v;
        return acc;
    };
    auto g1 = finite_diff_grad(f, ps, 1e-5, 1);
    auto g4 = finite_diff_grad(f, ps, 1e-5, 4);
    CHECK(g1[0].v == g4[0].v);
}

TEST_CASE("finite_diff_grad rejects bad epsilon and non-finite objectives") {
    ParamStoreT<double> ps;
    ps.insert("w", MatT<double>(1, 1));
    auto f = [](const ParamStoreT<double>&) { return 0.0; };
    CHECK_THROWS_AS(finite_diff_grad(f, ps, 0.0), ParamError);

    auto bad = [](const ParamStoreT<double>&) { return std::nan(""); };
    CHECK_THROWS_AS(finite_diff_grad(bad, ps, 1e-4), NumericError);
}

TEST_CASE("param store keeps insertion order and grad shapes") {
    ParamStore ps;
    ps.insert("b", Tensor2(1, 4));
    ps.insert("a", Tensor2(2, 3));
    CHECK(ps.entries()[0].name == "b");
    CHECK(ps.entries()[1].name == "a");
    CHECK(ps.entries()[1].grad.rows == 2);
    CHECK(ps.entries()[1].grad.cols == 3);
    CHECK(ps.scalar_count() == 10);
    CHECK_THROWS_AS(ps.insert("a", Tensor2(1, 1)), ConfigError);
    CHECK_THROWS_AS(ps.at("missing"), ConfigError);
}
