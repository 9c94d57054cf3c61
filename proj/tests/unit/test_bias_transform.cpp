#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "biasforge/bias_transform.hpp"
#include "biasforge/errors.hpp"

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

// Random valid spec with k nodes: B = c * prod(x - x_j) * g(x) with g >= 0 a square.
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
    const double a = u(gen);
    Polynomial g({a, 1.0});
    Polynomial p = Polynomial::from_roots(nodes) * (g * g + Polynomial::constant(0.1));
    return {BiasFunction::piecewise(PiecewisePolynomial::global(p), "random"), NodeSet(nodes)};
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

// B = prod (x - x_j): the simplest valid spec for given nodes.
SignChangeSpec node_spec(std::vector<double> nodes) {
    return {BiasFunction::piecewise(PiecewisePolynomial::global(Polynomial::from_roots(nodes)), "prod"),
            NodeSet(nodes)};
}

}  // namespace

TEST_CASE("validate") {
    auto U = uniform(-1, 1);
    CHECK(validate({BiasFunction::linear(), NodeSet({0.0})}, U).pass);
    CHECK(validate({BiasFunction::positive_part(), NodeSet({-1.0})}, U).pass);
    CHECK(validate({BiasFunction::positive_part(), NodeSet({0.0})}, U).pass);
    auto bad = validate({BiasFunction::linear(), NodeSet({1.0})}, U);
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.violation.has_value());
    CHECK(*bad.violation == doctest::Approx(0.5).epsilon(1e-3));
    const double probe[] = {0.5};
    CHECK_FALSE(validate({BiasFunction::linear(), NodeSet({1.0})}, probe).pass);
    auto rev = validate({BiasFunction::linear(), NodeSet{}}, discrete({{-1, 0.5}, {-2, 0.5}}));
    CHECK(rev.reversed);
}

TEST_CASE("alpha examples") {
    auto U = uniform(-1, 1);
    CHECK(alpha_of(U, {BiasFunction::positive_part(), NodeSet({-1.0})}) == doctest::Approx(5.0 / 12).epsilon(1e-12));
    CHECK(alpha_of(U, {BiasFunction::positive_part(), NodeSet({0.0})}) == doctest::Approx(1.0 / 6).epsilon(1e-12));
    CHECK(alpha_of(normal(1, 2), {BiasFunction::constant(1), NodeSet{}}) == 1.0);
    CHECK(code_of([&] { alpha_of(dirac(0), {BiasFunction::linear(), NodeSet({0.0})}); }) == ErrorCode::degenerate_alpha);
    CHECK(code_of([&] { alpha_of(U, {BiasFunction::constant(-1), NodeSet{}}); }) == ErrorCode::negative_alpha);
}

TEST_CASE("bias examples") {
    SUBCASE("zero bias of a fair coin is uniform") {
        auto b = bias(discrete({{-1, 0.5}, {1, 0.5}}), {BiasFunction::linear(), NodeSet({0.0})});
        CHECK(b.alpha == 1.0);
        for (double t : {-0.9, -0.2, 0.0, 0.4, 0.99}) CHECK(b.density(t) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(b.density(1.5) == 0.0);
    }
    SUBCASE("unit bias is the identity") {
        auto X = normal(0.5, 2);
        auto b = bias(X, {BiasFunction::constant(1), NodeSet{}});
        CHECK(b.law.describe() == X.describe());
    }
    SUBCASE("positive part with node 0") {
        auto b = bias(uniform(-1, 1), {BiasFunction::positive_part(), NodeSet({0.0})});
        for (double t : {0.0, 0.3, 0.8}) CHECK(b.density(t) == doctest::Approx(1.5 * (1 - t * t)).epsilon(1e-10));
        CHECK(b.density(-0.3) == 0.0);
    }
}

TEST_CASE("density_m1 examples") {
    auto U = uniform(-1, 1);
    CHECK(density_m1(U, {BiasFunction::positive_part(), NodeSet({0.0})}, 0.0) == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(density_m1(U, {BiasFunction::positive_part(), NodeSet({-1.0})}, -0.5) == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(density_m1(U, {BiasFunction::linear(), NodeSet({0.0})}, 1.5) == 0.0);
    CHECK(density_m1(U, {BiasFunction::linear(), NodeSet({0.0})}, -1.5) == 0.0);
}

TEST_CASE("density_iter examples") {
    auto half = [](double x) { return std::abs(x) <= 1 ? 0.5 : 0.0; };
    const double b[] = {-1.0, 1.0};
    CHECK(density_iter(half, 0.0, 2, 0.0) == doctest::Approx(1.0));
    CHECK(density_iter(half, 0.0, 2, 0.5, {-1, 1}, b) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(density_iter(half, 0.0, 2, 1.5, {-1, 1}, b) == 0.0);
}

TEST_CASE("bspline density") {
    CHECK(bspline_density({0, 1}, 0.5) == 1.0);
    CHECK(bspline_density({0, 1, 2}, 1.0) == doctest::Approx(1.0));
    CHECK(bspline_density({2, 0, 1}, 0.5) == doctest::Approx(0.5));
    const double m = integrate([](double t) { return bspline_density({-1, 0.3, 0.5, 2}, t); }, -1, 2,
                               std::vector<double>{0.3, 0.5});
    CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("moment identity on random discrete configurations") {
    std::mt19937_64 gen(101);
    for (int trial = 0; trial < 60; ++trial) {
        const int k = 1 + trial % 3;
        auto X = random_atoms(gen, 2 + trial % 7);
        auto spec = random_spec(gen, k);
        auto b = bias(X, spec);
        auto xm = moments(b.law, 6);
        for (int d = k; d <= 6; ++d) {
            // F = x^d: F^(k) = d!/(d-k)! x^(d-k).
            double ff = 1.0;
            for (int i = 0; i < k; ++i) ff *= d - i;
            const double rhs = b.alpha * ff * xm[d - k];
            std::vector<double> v;
            for (double x : spec.nodes) v.push_back(std::pow(x, d));
            double lhs = 0.0;
            double scale = 0.0;
            for (const auto& a : X.atoms()) {
                const double term = a.p * spec.B(a.x) * (std::pow(a.x, d) - lagrange_at(spec.nodes, v, a.x));
                lhs += term;
                scale += std::abs(term);
            }
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(scale, 1e-300));
        }
    }
}

TEST_CASE("densities integrate to one and match the sampler") {
    std::vector<std::pair<Distribution, SignChangeSpec>> cases = {
        {uniform(-1, 1), {BiasFunction::positive_part(), NodeSet({-1.0})}},
        {normal(0, 1), {BiasFunction::linear(), NodeSet({0.0})}},
        {exponential(1), {BiasFunction::sign(), NodeSet({0.0})}},
        {discrete({{-1, 0.3}, {0.5, 0.3}, {2, 0.4}}), {BiasFunction::linear(0.2), NodeSet({0.2})}},
        {discrete({{-1.5, 0.25}, {0.0, 0.25}, {0.7, 0.2}, {2, 0.3}}), node_spec({-0.5, 1.0})},
        {discrete({{-2, 0.2}, {-0.5, 0.3}, {0.5, 0.2}, {2.5, 0.3}}), node_spec({-1.0, 0.0, 1.0})},
        {uniform(-1, 2), node_spec({-0.5, 1.0})},
        {normal(0, 1), node_spec({-0.5, 1.0})},
    };
    std::uint64_t seed = 1;
    for (const auto& [X, spec] : cases) {
        auto b = bias(X, spec);
        CAPTURE(b.law.describe());
        CHECK(std::abs(mass(b.law) - 1.0) <= 1e-6);
        TabulatedCdf cdf(b.law, 1024);
        RandomSource rng(seed++);
        auto xs = sample(b.law, rng, 20000);
        // 0.1% level: this file runs many KS checks.
        CHECK(ks_statistic(xs, [&](double x) { return cdf(x); }) < 1.95 / std::sqrt(xs.size()));
        std::set<double> uniq(xs.begin(), xs.end());
        CHECK(uniq.size() == xs.size());
    }
}

TEST_CASE("k = 2 spline density agrees with the iterated reduction") {
    auto X = uniform(-1, 2);
    auto spec = node_spec({-0.5, 1.0});
    auto b = bias(X, spec);
    // Inner law: node x_1 with B~(x) = (x - x_2) B(x).
    SignChangeSpec inner{BiasFunction::piecewise(PiecewisePolynomial::global(
                             Polynomial::from_roots(std::vector<double>{-0.5, 1.0, 1.0}))),
                         NodeSet({-0.5})};
    auto bi = bias(X, inner);
    for (double t : {-0.8, -0.2, 0.4, 1.0, 1.7}) {
        const double iter = density_iter([&](double x) { return bi.density(x); }, 1.0, 2, t, {-1, 2},
                                         std::vector<double>{-0.5});
        CHECK(b.density(t) == doctest::Approx(iter).epsilon(1e-7));
    }
}

TEST_CASE("iterated grid route") {
    for (const auto& X : {uniform(-1, 2), discrete({{-1.5, 0.25}, {0.0, 0.25}, {0.7, 0.2}, {2, 0.3}})}) {
        auto spec = node_spec({-0.5, 0.3, 1.0});
        auto exact = bias(X, spec);
        BiasOptions opt;
        opt.route = DensityRoute::iterated_grid;
        auto grid = bias(X, spec, opt);
        double gap = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double t = -1.6 + 3.7 * i / 200.0;
            gap = std::max(gap, std::abs(exact.density(t) - grid.density(t)));
        }
        MESSAGE("grid route sup gap ", gap, ", mass error ", std::abs(mass(grid.law) - 1.0));
        CHECK(gap <= 1e-2);
    }
}

TEST_CASE("sign violations and reversed orientation are rejected") {
    auto U = uniform(-1, 1);
    CHECK(code_of([&] { bias(U, {BiasFunction::linear(), NodeSet({1.0})}); }) == ErrorCode::sign_violation);
    CHECK(code_of([&] { bias(U, {BiasFunction::linear(), NodeSet{}}); }) == ErrorCode::sign_violation);
    CHECK(code_of([&] { bias(discrete({{-1, 1}}), {BiasFunction::positive_part(), NodeSet{}}); }) ==
          ErrorCode::degenerate_alpha);
}

TEST_CASE("m = 0 identity with bounded tables") {
    auto X = discrete({{-1, 0.2}, {0.5, 0.5}, {3, 0.3}});
    SignChangeSpec spec{BiasFunction::custom([](double x) { return x * x + (x > 0 ? 1.0 : 0.0); }, "b"), NodeSet{}};
    auto b = bias(X, spec);
    auto F = [](double x) { return x < 0 ? 2.0 : (x < 1 ? -1.0 : 0.5); };
    double lhs = 0.0;
    for (const auto& a : X.atoms()) lhs += a.p * spec.B(a.x) * F(a.x);
    CHECK(lhs == doctest::Approx(b.alpha * expect(b.law, F)).epsilon(1e-14));
}

TEST_CASE("mixture bias weights") {
    SignChangeSpec spec{BiasFunction::linear(), NodeSet({0.0})};
    auto mb = mixture_bias({uniform(0, 1), uniform(1, 2)}, {0.5, 0.5}, spec);
    REQUIRE(mb.recipe.step_normalizers.size() == 2);
    CHECK(mb.recipe.step_normalizers[0] == doctest::Approx(1.0 / 8));
    CHECK(mb.recipe.step_normalizers[1] == doctest::Approx(7.0 / 8));
    auto direct = bias(make_mixture({uniform(0, 1), uniform(1, 2)}, {0.5, 0.5}), spec);
    for (double t : {0.2, 0.9, 1.4, 1.9}) CHECK(mb.density(t) == doctest::Approx(direct.density(t)).epsilon(1e-9));
    CHECK(mb.alpha == doctest::Approx(direct.alpha));
    CHECK(code_of([&] { mixture_bias({dirac(0)}, {1.0}, spec); }) == ErrorCode::degenerate_alpha);
}
