#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "biasforge/errors.hpp"
#include "biasforge/higher_bias.hpp"

using namespace biasforge;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::invalid_argument;
}

double mass(const Distribution& d) {
    return integrate([&](double x) { return d.density(x); }, d.effective_support().lo, d.effective_support().hi,
                     d.breakpoints());
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

Distribution random_atoms(std::mt19937_64& gen, int n) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        atoms.push_back({u(gen), 0.1 + std::abs(u(gen))});
        total += atoms.back().p;
    }
    for (auto& a : atoms) a.p /= total;
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) s += atoms[i].p;
    atoms.back().p = 1.0 - s;
    return discrete(atoms);
}

// B = prod(x - x_j) (g^2 + 0.1), which is valid for any nodes.
SignChangeSpec random_spec(std::mt19937_64& gen, int k) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> nodes;
    while (static_cast<int>(nodes.size()) < k) {
        double x = std::round(u(gen) * 100) / 100;
        bool ok = true;
        for (double y : nodes) ok = ok && std::abs(x - y) > 0.05;
        if (ok) nodes.push_back(x);
    }
    std::sort(nodes.begin(), nodes.end());
    Polynomial g({u(gen), 1.0});
    Polynomial p = Polynomial::from_roots(nodes) * (g * g + Polynomial::constant(0.1));
    return {BiasFunction::piecewise(PiecewisePolynomial::global(p), "random"), NodeSet(nodes)};
}

double atom_sum(const Distribution& X, const RealFunction& f) {
    long double s = 0.0L;
    for (const auto& a : X.atoms()) s += static_cast<long double>(a.p) * f(a.x);
    return static_cast<double>(s);
}

}  // namespace

TEST_CASE("falling factorial") {
    CHECK(falling_factorial(5, 0) == 1);
    CHECK(falling_factorial(5, 2) == 20);
    CHECK(falling_factorial(7, 7) == 5040);
    CHECK(falling_factorial(3, 4) == 0);
}

TEST_CASE("hat transform") {
    SUBCASE("uniform at 0") {
        auto h = hat_transform(uniform(0, 1), 0.0);
        CHECK(h.alpha == doctest::Approx(1.0 / 6).epsilon(1e-14));
        CHECK(moment(h.law, 1) == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(mass(h.law) == doctest::Approx(1.0).epsilon(1e-8));
        // f = x^4: E[X^4] = (1/6) * 12 E[X-hat^2].
        CHECK(0.2 == doctest::Approx(h.alpha * 12 * moment(h.law, 2)).epsilon(1e-12));
    }
    SUBCASE("second-difference identity on atoms") {
        std::mt19937_64 gen(7);
        for (int trial = 0; trial < 20; ++trial) {
            auto X = random_atoms(gen, 1 + trial % 5);
            const double a = std::uniform_real_distribution<double>(-1, 1)(gen);
            if (X.atoms().size() == 1 && X.atoms()[0].x == a) continue;
            auto h = hat_transform(X, a);
            for (int d = 2; d <= 6; ++d) {
                const double lhs = atom_sum(X, [&](double x) {
                    return std::pow(x, d) - std::pow(a, d) - d * std::pow(a, d - 1) * (x - a);
                });
                const double rhs = h.alpha * d * (d - 1) * moment(h.law, d - 2);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
            }
            CHECK(mass(h.law) == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
    SUBCASE("quadratic f holds for any X") {
        auto X = normal(0.3, 1.2);
        auto h = hat_transform(X, -0.4);
        CHECK(2 * h.alpha == doctest::Approx(1.2 * 1.2 + 0.7 * 0.7).epsilon(1e-12));
    }
    CHECK(code_of([] { hat_transform(dirac(0.5), 0.5); }) == ErrorCode::degenerate_alpha);
}

TEST_CASE("beta") {
    const SignChangeSpec one{BiasFunction::constant(1.0), NodeSet{}};
    CHECK(beta_of(uniform(-1, 1), one, 2) == doctest::Approx(1.0 / 6).epsilon(1e-14));
    CHECK(code_of([&] { beta_of(dirac(0.0), one, 2); }) == ErrorCode::degenerate_beta);
    CHECK(code_of([&] { beta_of(normal(0, 1), one, 1); }) == ErrorCode::parity_mismatch);
    CHECK(code_of([&] { bias_km(normal(0, 1), one, 1); }) == ErrorCode::parity_mismatch);

    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto X = random_atoms(gen, 6);
        const int k = 1 + trial % 3;
        auto spec = random_spec(gen, k);
        CHECK(beta_of(X, spec, k) == doctest::Approx(alpha_of(X, spec)).epsilon(1e-12));
    }
}

TEST_CASE("chain identity on random discrete configurations") {
    std::mt19937_64 gen(2024);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        auto X = random_atoms(gen, 1 + trial % 6);
        const int m = 1 + trial % 4;
        const int k = (trial / 4) % 2 == 0 ? m % 2 : m;
        auto spec = random_spec(gen, k);
        auto r = bias_km(X, spec, m);
        REQUIRE(r.beta.has_value());
        REQUIRE(static_cast<int>(r.recipe.steps.size()) == (m - k) / 2);
        double product = r.alpha;
        for (double b : r.recipe.step_normalizers) product *= b;
        CHECK(*r.beta == doctest::Approx(product).epsilon(1e-10));

        for (int d = 0; d <= m + 3; ++d) {
            std::vector<double> derivs;
            for (int i = k; i < m; ++i) derivs.push_back(i == d ? factorial(d) : 0.0);
            const Polynomial R = build_RF(derivs, spec.nodes, m);
            const Polynomial L = lagrange(spec.nodes, [d](double x) { return std::pow(x, d); });
            const double lhs = atom_sum(X, [&](double x) { return spec.B(x) * (std::pow(x, d) - R(x) - L(x)); });
            const double rhs = d < m ? 0.0 : *r.beta * factorial(d) / factorial(d - m) * moment(r.law, d - m);
            const double scale = atom_sum(X, [&](double x) {
                return std::abs(spec.B(x)) * (std::pow(std::abs(x), d) + std::abs(R(x)) + std::abs(L(x)));
            });
            CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(std::abs(rhs), scale));
            ++checked;
        }
    }
    CHECK(checked > 150);
}

TEST_CASE("moment recursion of the base stage") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 15; ++trial) {
        auto X = random_atoms(gen, 4 + trial % 3);
        const int k = 1 + trial % 3;
        auto spec = random_spec(gen, k);
        auto Y = bias(X, spec);
        for (int j = 0; j <= 4; ++j) {
            double s = 0.0;
            for (int i = 0; i <= j; ++i)
                s += a_coeff(spec.nodes, i, j) * atom_sum(X, [&](double x) { return spec.weight(x) * std::pow(x, i); });
            const double expected = s / (Y.alpha * static_cast<double>(falling_factorial(k + j, k)));
            CHECK(moment(Y.law, j) == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("zero-bias and equilibrium cases") {
    // Mean-zero X with B = 1, k = 0, m = 2: E[f(X) - f(0)] = (1/2) E[X^2] E[f''(X^L)].
    auto X = discrete({{-2, 0.25}, {0.5, 0.5}, {1, 0.25}});
    const SignChangeSpec one{BiasFunction::constant(1.0), NodeSet{}};
    auto z = bias_km(X, one, 2);
    CHECK(*z.beta == doctest::Approx(0.5 * (4 * 0.25 + 0.25 * 0.5 + 0.25)).epsilon(1e-14));
    for (int d = 2; d <= 6; ++d) {
        const double lhs = atom_sum(X, [&](double x) { return std::pow(x, d); });
        CHECK(lhs == doctest::Approx(*z.beta * d * (d - 1) * moment(z.law, d - 2)).epsilon(1e-11));
    }
    CHECK(mass(z.law) == doctest::Approx(1.0).epsilon(1e-8));

    // X >= 0, B = sign(x): the equilibrium law; Exp(1) is its own.
    auto e = bias_km(exponential(1.0), {BiasFunction::sign(0.0), NodeSet({0.0})}, 1);
    CHECK(e.alpha == doctest::Approx(1.0).epsilon(1e-9));
    for (double t : {0.1, 0.5, 1.0, 3.0}) CHECK(e.density(t) == doctest::Approx(std::exp(-t)).epsilon(1e-8));
}

TEST_CASE("chain laws have densities and no repeated draws") {
    auto X = discrete({{-1, 0.3}, {0.5, 0.3}, {2, 0.4}});
    const SignChangeSpec spec{BiasFunction::linear(0.2), NodeSet({0.2})};
    auto r = bias_km(X, spec, 3);
    CHECK(r.law.has_density());
    CHECK(mass(r.law) == doctest::Approx(1.0).epsilon(1e-8));
    RandomSource rng(99);
    auto xs = sample(r.law, rng, 100000);
    std::set<double> unique(xs.begin(), xs.end());
    CHECK(unique.size() == xs.size());
}
