#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "biasforge/errors.hpp"
#include "biasforge/poly_interp.hpp"

using namespace biasforge;

namespace {

NodeSet random_nodes(std::mt19937_64& gen, int k) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (;;) {
        std::vector<double> v(static_cast<std::size_t>(k));
        for (auto& x : v) x = u(gen);
        std::sort(v.begin(), v.end());
        bool ok = true;
        for (int i = 1; i < k; ++i) ok = ok && v[i] - v[i - 1] >= 1e-2;
        if (ok) return NodeSet(v);
    }
}

}  // namespace

TEST_CASE("polynomial canonical form and arithmetic") {
    Polynomial p({1.0, 2.0, 0.0, 0.0});
    CHECK(p.degree() == 1);
    CHECK(Polynomial({0.0}).is_zero());
    CHECK((p * p) == Polynomial({1.0, 4.0, 4.0}));
    CHECK(p.derivative() == Polynomial({2.0}));
    CHECK(Polynomial({0.0, 0.0, 3.0}).antiderivative() == Polynomial({0.0, 0.0, 0.0, 1.0}));
    CHECK(Polynomial::from_roots(std::vector<double>{1.0, 2.0}) == Polynomial({2.0, -3.0, 1.0}));
    CHECK((p - p).is_zero());
}

TEST_CASE("lagrange examples") {
    const double v01[] = {0.0, 1.0};
    CHECK(lagrange(NodeSet({0.0, 1.0}), v01) == Polynomial({0.0, 1.0}));
    const double sq[] = {1.0, 4.0, 9.0};
    auto p = lagrange(NodeSet({1.0, 2.0, 3.0}), sq);
    CHECK(p.coefficient(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.coefficient(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.coefficient(2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lagrange(NodeSet{}, std::span<const double>{}).is_zero());
}

TEST_CASE("partition of unity") {
    std::mt19937_64 gen(7);
    for (int k = 1; k <= 6; ++k) {
        auto nodes = random_nodes(gen, k);
        std::vector<double> ones(static_cast<std::size_t>(k), 1.0);
        auto p = lagrange(nodes, ones);
        CHECK(std::abs(p.coefficient(0) - 1.0) <= 1e-12);
        for (int i = 1; i < k; ++i) CHECK(std::abs(p.coefficient(i)) <= 1e-12);
    }
}

TEST_CASE("barycentric evaluation matches the coefficient form") {
    NodeSet nodes({-1.0, 0.5, 2.0});
    const double v[] = {3.0, -1.0, 4.0};
    auto p = lagrange(nodes, v);
    for (double x : {-2.0, 0.0, 1.0, 2.0, 3.5}) CHECK(lagrange_at(nodes, v, x) == doctest::Approx(p(x)).epsilon(1e-12));
}

TEST_CASE("node set validation") {
    CHECK_THROWS_AS(NodeSet({0.0, 0.0}), Error);
    CHECK_THROWS_AS(NodeSet({1.0, 0.0}), Error);
    CHECK_THROWS_AS(NodeSet({0.0, 1e-9}), Error);
}

TEST_CASE("a_coeff examples") {
    NodeSet n12({1.0, 2.0});
    for (auto method : {CoeffMethod::power_sum, CoeffMethod::symmetric}) {
        CHECK(a_coeff(n12, 0, 1, method) == doctest::Approx(3.0));
        CHECK(a_coeff(n12, 1, 1, method) == doctest::Approx(1.0));
    }
    CHECK(std::abs(divided_power_sum(NodeSet({0.0, 1.0, 2.0}), 1)) <= 1e-15);
}

TEST_CASE("a_coeff methods agree and the vanishing identity holds") {
    std::mt19937_64 gen(11);
    std::uniform_int_distribution<int> kd(1, 6);
    for (int t = 0; t < 500; ++t) {
        auto nodes = random_nodes(gen, kd(gen));
        for (int j = 0; j <= 6; ++j)
            for (int i = 0; i <= j; ++i) {
                const double a = a_coeff(nodes, i, j, CoeffMethod::power_sum);
                const double b = a_coeff(nodes, i, j, CoeffMethod::symmetric);
                CHECK(std::abs(a - b) <= 1e-9 * (1.0 + std::abs(b)));
            }
        for (int n = 0; n <= nodes.k() - 2; ++n) CHECK(std::abs(divided_power_sum(nodes, n)) <= 1e-9);
    }
}

TEST_CASE("complete homogeneous polynomial by brute force") {
    const double v[] = {1.5, -2.0, 0.5};
    // h_2 = sum_{i<=j} x_i x_j
    double h2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) h2 += v[i] * v[j];
    CHECK(complete_homogeneous(v, 2) == doctest::Approx(h2));
    CHECK(complete_homogeneous(v, 0) == 1.0);
    CHECK(complete_homogeneous(v, -1) == 0.0);
}

TEST_CASE("build_RF") {
    SUBCASE("k = m gives zero") {
        CHECK(build_RF({}, NodeSet({-1.0, 2.0}), 2).is_zero());
    }
    SUBCASE("k = 0 Maclaurin") {
        const double zero[] = {0.0, 0.0};
        CHECK(build_RF(zero, NodeSet{}, 2).is_zero());
        const double one[] = {1.0, 1.0};
        CHECK(build_RF(one, NodeSet{}, 2) == Polynomial({1.0, 1.0}));
    }
    SUBCASE("parity mismatch") {
        const double d[] = {1.0};
        try {
            build_RF(d, NodeSet{}, 1);
            FAIL("expected ParityMismatch");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::parity_mismatch);
        }
    }
    SUBCASE("k = 1, m = 3 against interpolation of the Taylor remainder") {
        // F = x^3: R_F + L_F interpolates F's degree < m part; F - R_F - L_F must have
        // vanishing derivatives of order < m - k at 0 relative to the node product.
        NodeSet nodes({0.5});
        const double d[] = {0.0, 0.0};  // F'(0), F''(0) for F = x^3
        CHECK(build_RF(d, nodes, 3).is_zero());
        const double e[] = {1.0, 2.0};  // F = x + x^2
        auto r = build_RF(e, nodes, 3);
        // F - L_F = x + x^2 - 0.75 = (x - 0.5)(x + 1.5), and R_F must reproduce it.
        CHECK(r(0.0) == doctest::Approx(-0.75));
        CHECK(r(2.0) == doctest::Approx(1.5 * 3.5));
    }
}

TEST_CASE("iterated antiderivative") {
    auto one = [](double) { return 1.0; };
    CHECK(iterated_antiderivative(one, 0.0, 2, 3.0) == doctest::Approx(4.5));
    CHECK(iterated_antiderivative(one, 1.0, 2, -1.0) == doctest::Approx(2.0));
    CHECK(iterated_antiderivative([](double x) { return std::cos(x); }, 0.0, 1, std::numbers::pi / 2) ==
          doctest::Approx(1.0));
    // m-fold numerical derivative recovers f.
    auto f = [](double x) { return std::exp(0.3 * x) + x * x; };
    const double h = 1e-3;
    auto g = [&](double x) { return iterated_antiderivative(f, -0.5, 2, x); };
    for (double x : {0.1, 0.7, 1.3}) {
        const double d2 = (g(x + h) - 2 * g(x) + g(x - h)) / (h * h);
        CHECK(std::abs(d2 - f(x)) <= 1e-4);
    }
}

TEST_CASE("sign compatible primitive") {
    auto one = [](double) { return 1.0; };
    SignCompatiblePrimitive F(one, NodeSet({-1.0, 1.0}));
    CHECK(F(0.0) == doctest::Approx(-0.5));
    CHECK(F(2.0) == doctest::Approx(1.5));
    CHECK(sign_compatible_primitive(one, NodeSet({0.0}), 2.0) == doctest::Approx(2.0));
    CHECK(F(-1.0) == 0.0);
    CHECK(F(1.0) == 0.0);
}

TEST_CASE("sign compatible primitive alternates on random configurations") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    std::uniform_int_distribution<int> kd(1, 4);
    for (int t = 0; t < 30; ++t) {
        auto nodes = random_nodes(gen, kd(gen));
        const double a = c(gen), b = c(gen), d = c(gen);
        auto f = [=](double x) {
            const double q = a + b * x + d * x * x;
            return q * q + 0.01;
        };
        SignCompatiblePrimitive F(f, nodes);
        const int k = nodes.k();
        for (int i = 0; i < k; ++i) CHECK(std::abs(F(nodes[i])) <= 1e-8);
        for (int interval = 0; interval <= k; ++interval) {
            const double lo = interval == 0 ? nodes.front() - 1.0 : nodes[interval - 1];
            const double hi = interval == k ? nodes.back() + 1.0 : nodes[interval];
            const double sign = ((k - interval) % 2 == 0) ? 1.0 : -1.0;
            for (double s : {0.25, 0.5, 0.75}) CHECK(sign * F(lo + s * (hi - lo)) >= -1e-8);
        }
    }
}
