#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "dam/dist.hpp"
#include "dam/errors.hpp"

using namespace dam;

namespace {

double poisson_pmf(double m, int n) { return std::exp(-m + n * std::log(m) - std::lgamma(n + 1.0)); }

// Adaptive Simpson on [a, b].
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
    double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
    return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, 50);
}

// Brute force: sum_k e^{-m} m^k/k! r^{*k}
std::vector<double> brute_compound(const BatchDistribution& b, double m, std::size_t n, int kmax) {
    std::vector<double> out(n + 1, 0.0), conv(n + 1, 0.0);
    conv[0] = 1;
    for (int k = 0; k <= kmax; ++k) {
        for (std::size_t i = 0; i <= n; ++i) out[i] += poisson_pmf(m, k) * conv[i];
        std::vector<double> next(n + 1, 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 1; j <= i; ++j) next[i] += b.prob(j) * conv[i - j];
        conv = next;
    }
    return out;
}

double service_density(const ServiceDistribution& s, double x) {
    const auto& r = s.rates();
    switch (s.family()) {
    case Family::Exponential: return r[0] * std::exp(-r[0] * x);
    case Family::Erlang:
        return std::pow(r[0], s.k()) * std::pow(x, s.k() - 1) * std::exp(-r[0] * x) / std::tgamma(double(s.k()));
    case Family::Hyperexponential: {
        double v = 0;
        for (std::size_t m = 0; m < r.size(); ++m) v += s.weights()[m] * r[m] * std::exp(-r[m] * x);
        return v;
    }
    default: return 0;
    }
}

} // namespace

TEST_CASE("batch pgf examples") {
    CHECK(batch_pgf(BatchDistribution::single(), 0.5) == doctest::Approx(0.5));
    auto g = BatchDistribution::geometric(0.5);
    CHECK(batch_pgf(g, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(batch_pgf(g, 0.8) == doctest::Approx(0.4 / 0.6).epsilon(1e-14));
    CHECK_THROWS_AS(batch_pgf(g, 2.0), DomainError);
    auto e = BatchDistribution::explicit_law({0.2, 0.5, 0.3});
    CHECK(batch_pgf(e, 3.0) == doctest::Approx(0.2 * 3 + 0.5 * 9 + 0.3 * 27));
}

TEST_CASE("batch pgf is increasing and convex on its domain") {
    for (auto b : {BatchDistribution::geometric(0.3), BatchDistribution::explicit_law({0.1, 0.6, 0.0, 0.3})}) {
        double prev = -1, prev_slope = -1;
        for (double z = 0; z < 2.5; z += 0.05) {
            double v = b.pgf(z);
            CHECK(v > prev);
            if (prev >= 0) CHECK(v - prev >= prev_slope - 1e-12);
            if (prev >= 0) prev_slope = v - prev;
            prev = v;
        }
    }
}

TEST_CASE("batch moments and tails") {
    auto e = BatchDistribution::explicit_law({0.2, 0.5, 0.3});
    CHECK(e.m1() == doctest::Approx(2.1));
    CHECK(e.m2() == doctest::Approx(0.2 + 2.0 + 2.7));
    CHECK(e.m3() == doctest::Approx(0.2 + 4.0 + 8.1));
    CHECK(e.tail(0) == doctest::Approx(1.0));
    CHECK(e.tail(1) == doctest::Approx(0.8));
    CHECK(e.tail(3) == 0.0);

    auto g = BatchDistribution::geometric(0.4);
    double m1 = 0, m2 = 0, m3 = 0;
    for (std::size_t i = 1; i < 400; ++i) {
        double p = g.prob(i), x = double(i);
        m1 += x * p;
        m2 += x * x * p;
        m3 += x * x * x * p;
    }
    CHECK(g.m1() == doctest::Approx(m1).epsilon(1e-12));
    CHECK(g.m2() == doctest::Approx(m2).epsilon(1e-12));
    CHECK(g.m3() == doctest::Approx(m3).epsilon(1e-12));
    CHECK(g.tail(3) == doctest::Approx(0.064));
    CHECK(g.m2() >= g.m1() * g.m1());

    CHECK_THROWS_AS(BatchDistribution::explicit_law({0.5, 0.4}), DomainError);
    CHECK_THROWS_AS(BatchDistribution::explicit_law({-0.5, 1.5}), DomainError);
    CHECK_THROWS_AS(BatchDistribution::geometric(1.0), DomainError);
}

TEST_CASE("batch sampling follows the law") {
    auto e = BatchDistribution::explicit_law({0.2, 0.0, 0.5, 0.3});
    std::vector<int> counts(5, 0);
    const int n = 100000;
    for (int k = 0; k < n; ++k) counts[e.sample((k + 0.5) / n)]++;
    CHECK(counts[2] == 0);
    CHECK(counts[1] / double(n) == doctest::Approx(0.2).epsilon(1e-3));
    CHECK(counts[3] / double(n) == doctest::Approx(0.5).epsilon(1e-3));
    auto g = BatchDistribution::geometric(0.5);
    std::vector<int> gc(40, 0);
    for (int k = 0; k < n; ++k) gc[std::min<std::size_t>(g.sample((k + 0.5) / n), 39)]++;
    CHECK(gc[1] / double(n) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(gc[2] / double(n) == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("compound Poisson pmf") {
    SUBCASE("ordinary Poisson") {
        auto p = compound_poisson_pmf(BatchDistribution::single(), 2.0, 40);
        CHECK(p[3] == doctest::Approx(std::exp(-2.0) * 8 / 6).epsilon(1e-13));
        for (int n = 0; n <= 40; ++n) CHECK(std::fabs(p[n] - poisson_pmf(2.0, n)) < 1e-12);
    }
    SUBCASE("zero horizon") {
        auto p = compound_poisson_pmf(BatchDistribution::geometric(0.5), 0.0, 5);
        CHECK(p[0] == 1.0);
        for (int n = 1; n <= 5; ++n) CHECK(p[n] == 0.0);
    }
    SUBCASE("geometric batches against brute-force convolution") {
        auto g = BatchDistribution::geometric(0.5);
        auto p = compound_poisson_pmf(g, 1.0, 4);
        auto o = brute_compound(g, 1.0, 4, 20);
        for (int n = 0; n <= 4; ++n) CHECK(p[n] == doctest::Approx(o[n]).epsilon(1e-12));
    }
    SUBCASE("explicit batches against brute-force convolution") {
        auto e = BatchDistribution::explicit_law({0.3, 0.0, 0.7});
        auto p = compound_poisson_pmf(e, 2.5, 12);
        auto o = brute_compound(e, 2.5, 12, 30);
        for (int n = 0; n <= 12; ++n) CHECK(p[n] == doctest::Approx(o[n]).epsilon(1e-11));
    }
    SUBCASE("large mean") {
        auto p = compound_poisson_pmf(BatchDistribution::single(), 1500.0, 1700);
        for (int n : {1400, 1500, 1600}) CHECK(p[n] == doctest::Approx(poisson_pmf(1500.0, n)).epsilon(1e-8));
    }
}

TEST_CASE("arrivals per service coefficients") {
    SUBCASE("exponential closed form") {
        auto f = arrivals_per_service_coeffs(ServiceDistribution::exponential(1), BatchDistribution::single(), 1.0, 3);
        CHECK(f[0] == doctest::Approx(0.5));
        CHECK(f[1] == doctest::Approx(0.25));
        CHECK(f[2] == doctest::Approx(0.125));
        CHECK(f[3] == doctest::Approx(0.0625));
    }
    SUBCASE("zero deterministic service") {
        auto f = arrivals_per_service_coeffs(ServiceDistribution::deterministic(0), BatchDistribution::geometric(0.3), 2.0, 4);
        CHECK(f[0] == 1.0);
        for (int i = 1; i <= 4; ++i) CHECK(f[i] == 0.0);
    }
    SUBCASE("quadrature oracle") {
        struct Case {
            ServiceDistribution s;
            BatchDistribution b;
            double lambda;
        };
        std::vector<Case> cases = {
            {ServiceDistribution::erlang(2, 2.0), BatchDistribution::single(), 1.0},
            {ServiceDistribution::erlang(3, 1.5), BatchDistribution::geometric(0.4), 0.7},
            {ServiceDistribution::exponential(0.8), BatchDistribution::explicit_law({0.5, 0.2, 0.3}), 0.4},
            {ServiceDistribution::hyperexponential({0.3, 0.7}, {0.5, 3.0}), BatchDistribution::geometric(0.5), 0.6},
        };
        for (const auto& c : cases) {
            const std::size_t n = 8;
            auto f = arrivals_per_service_coeffs(c.s, c.b, c.lambda, n);
            for (std::size_t i = 0; i <= n; ++i) {
                auto integrand = [&](double x) {
                    return compound_poisson_pmf(c.b, c.lambda * x, i)[i] * service_density(c.s, x);
                };
                double o = integrate(integrand, 0.0, 10.0) + integrate(integrand, 10.0, 120.0);
                CHECK(std::fabs(f[i] - o) < 1e-8);
            }
        }
    }
}

TEST_CASE("coefficient mass and moment identities") {
    std::vector<ServiceDistribution> services = {
        ServiceDistribution::deterministic(0.7), ServiceDistribution::exponential(1.3),
        ServiceDistribution::erlang(2, 2.5), ServiceDistribution::hyperexponential({0.4, 0.6}, {0.9, 2.2})};
    std::vector<BatchDistribution> batches = {BatchDistribution::single(), BatchDistribution::geometric(0.5),
                                              BatchDistribution::explicit_law({0.4, 0.0, 0.3, 0.3})};
    for (const auto& s : services)
        for (const auto& b : batches)
            for (double lambda : {0.2, 0.5}) {
                auto f = arrivals_per_service_coeffs_adaptive(s, b, lambda, 1e-14);
                double mass = 0, m1 = 0, m2 = 0;
                for (std::size_t i = 0; i < f.size(); ++i) {
                    CHECK(f[i] >= 0);
                    mass += f[i];
                    m1 += double(i) * f[i];
                    m2 += double(i) * (double(i) - 1) * f[i];
                }
                CHECK(mass <= 1 + 1e-12);
                CHECK(mass >= 1 - 1e-9);
                double rho1 = lambda * b.m1() * s.mean();
                double rho12 = lambda * lambda * s.moment(2);
                CHECK(m1 == doctest::Approx(rho1).epsilon(1e-8));
                // U''(1) = rho12 (E b)^2 + (rho1/E b)(E b^2 - E b)
                double u2 = rho12 * b.m1() * b.m1() + rho1 / b.m1() * (b.m2() - b.m1());
                CHECK(m2 == doctest::Approx(u2).epsilon(1e-8));
            }
}

TEST_CASE("coefficient generating function equals U(z)") {
    auto s = ServiceDistribution::erlang(2, 3.0);
    auto b = BatchDistribution::geometric(0.4);
    auto f = arrivals_per_service_coeffs(s, b, 0.9, 300);
    for (double z : {0.0, 0.3, 0.7, 0.95}) {
        double v = 0;
        for (std::size_t i = f.size(); i-- > 0;) v = v * z + f[i];
        CHECK(v == doctest::Approx(arrivals_pgf(s, b, 0.9, z)).epsilon(1e-12));
    }
}

TEST_CASE("service transforms") {
    CHECK(lst(ServiceDistribution::exponential(2), 2) == doctest::Approx(0.5));
    CHECK(lst(ServiceDistribution::deterministic(1), 0) == doctest::Approx(1.0));
    CHECK(lst(ServiceDistribution::erlang(2, 3), 1) == doctest::Approx(0.5625));
    CHECK_THROWS_AS(lst(ServiceDistribution::exponential(2), -2), DomainError);
    CHECK_THROWS_AS(lst(ServiceDistribution::hyperexponential({0.5, 0.5}, {1, 4}), -1.5), DomainError);
    CHECK(lst(ServiceDistribution::deterministic(1), -3) == doctest::Approx(std::exp(3.0)));

    for (auto s : {ServiceDistribution::deterministic(0.7), ServiceDistribution::erlang(3, 2.0),
                   ServiceDistribution::hyperexponential({0.3, 0.7}, {0.5, 3.0})}) {
        double prev = 2;
        for (double x = 0; x < 5; x += 0.25) {
            double v = s.lst(x);
            CHECK(v < prev);
            prev = v;
        }
        double h = 1e-6;
        CHECK(s.lst_derivative(0.3) == doctest::Approx((s.lst(0.3 + h) - s.lst(0.3 - h)) / (2 * h)).epsilon(1e-7));
        CHECK(-s.lst_derivative(0) == doctest::Approx(s.mean()).epsilon(1e-12));
    }
}

TEST_CASE("service moments") {
    auto e = ServiceDistribution::erlang(3, 2.0);
    CHECK(e.mean() == doctest::Approx(1.5));
    CHECK(e.moment(2) == doctest::Approx(3.0));
    auto h = ServiceDistribution::hyperexponential({0.5, 0.5}, {1.0, 2.0});
    CHECK(h.moment(2) == doctest::Approx(0.5 * 2 + 0.5 * 0.5));
    auto d = ServiceDistribution::deterministic(2.0);
    CHECK(d.moment(3) == doctest::Approx(8.0));
    auto scaled = e.scaled_to_mean(0.6);
    CHECK(scaled.mean() == doctest::Approx(0.6));
    CHECK(scaled.moment(2) / (scaled.mean() * scaled.mean()) == doctest::Approx(e.moment(2) / (e.mean() * e.mean())));
    CHECK_THROWS_AS(ServiceDistribution::hyperexponential({0.5, 0.4}, {1, 2}), DomainError);
    CHECK_THROWS_AS(ServiceDistribution::exponential(0), DomainError);
}
