#include <doctest.h>

#include <cmath>
#include <vector>

#include "dam/errors.hpp"
#include "dam/takacs.hpp"

using namespace dam;

namespace {

// Q = q0 F/(F - z) by long division of power series.
std::vector<double> series_division(const std::vector<double>& f, double q0, std::size_t n) {
    std::vector<double> g(n + 1, 0.0), Q(n + 1, 0.0);
    for (std::size_t i = 0; i <= n && i < f.size(); ++i) g[i] = f[i];
    if (n >= 1) g[1] -= 1;
    for (std::size_t k = 0; k <= n; ++k) {
        double s = k < f.size() ? q0 * f[k] : 0.0;
        for (std::size_t j = 1; j <= k; ++j) s -= g[j] * Q[k - j];
        Q[k] = s / g[0];
    }
    return Q;
}

DamModel make(double lambda, BatchDistribution b, ServiceDistribution s1, ServiceDistribution s2, std::size_t L) {
    DamModel m;
    m.lambda = lambda;
    m.batch = std::move(b);
    m.service1 = std::move(s1);
    m.service2 = std::move(s2);
    m.L = L;
    return m;
}

// nu[j] summed literally over the truncated batch law.
double literal_nu(const BusyTable& t, const BatchDistribution& b, std::size_t j) {
    double s = 0;
    for (std::size_t i = 1; i <= j + 1; ++i) {
        double w = truncated_batch_prob(b, j + 1, i), inner = 0;
        for (std::size_t k = 1; k <= i; ++k) inner += t.nu_tilde[j - k + 1];
        s += w * inner;
    }
    return s;
}

std::vector<DamModel> model_matrix() {
    std::vector<DamModel> out;
    std::vector<BatchDistribution> batches = {BatchDistribution::single(), BatchDistribution::geometric(0.5),
                                              BatchDistribution::explicit_law({0.4, 0.0, 0.3, 0.0, 0.0, 0.0, 0.0,
                                                                               0.0, 0.0, 0.0, 0.0, 0.3})};
    for (const auto& b : batches)
        for (int fam = 0; fam < 2; ++fam)
            for (double rho1 : {0.8, 1.25}) {
                double lambda = 0.4;
                double mean1 = rho1 / (lambda * b.m1()), mean2 = 0.5 / (lambda * b.m1());
                auto s1 = fam == 0 ? ServiceDistribution::exponential(1 / mean1) : ServiceDistribution::erlang(2, 2 / mean1);
                out.push_back(make(lambda, b, s1, ServiceDistribution::exponential(1 / mean2), 10));
            }
    return out;
}

} // namespace

TEST_CASE("solve_takacs examples") {
    std::vector<double> f(10);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(0.5, double(i + 1));
    auto Q = solve_takacs(f, 1.0, 5);
    for (std::size_t j = 0; j <= 5; ++j) CHECK(Q[j] == doctest::Approx(double(j + 1)).epsilon(1e-14));

    auto C = solve_takacs({1.0, 0.0, 0.0}, 3.5, 20);
    for (double v : C) CHECK(v == 3.5);

    CHECK_THROWS_AS(solve_takacs({0.0, 1.0}, 1.0, 3), SingularError);
}

TEST_CASE("solve_takacs matches power-series division") {
    struct Case {
        ServiceDistribution s;
        BatchDistribution b;
        double lambda;
    };
    std::vector<Case> cases = {
        {ServiceDistribution::exponential(1.0), BatchDistribution::geometric(0.5), 0.5},
        {ServiceDistribution::deterministic(1.1), BatchDistribution::single(), 1.0},
        {ServiceDistribution::erlang(2, 2.0), BatchDistribution::explicit_law({0.6, 0.1, 0.3}), 0.5},
        {ServiceDistribution::hyperexponential({0.2, 0.8}, {0.4, 2.0}), BatchDistribution::geometric(0.3), 0.4},
    };
    for (const auto& c : cases) {
        auto f = arrivals_per_service_coeffs(c.s, c.b, c.lambda, 40);
        auto Q = solve_takacs(f, 1.0, 30);
        auto O = series_division(f, 1.0, 30);
        for (std::size_t j = 0; j <= 30; ++j) CHECK(Q[j] == doctest::Approx(O[j]).epsilon(1e-10));
        // recurrence itself: Q_n = sum_{i=0..n} Q_{n-i+1} f_i
        for (std::size_t n = 0; n < 30; ++n) {
            double s = 0;
            for (std::size_t i = 0; i <= n; ++i) s += Q[n - i + 1] * f[i];
            CHECK(s == doctest::Approx(Q[n]).epsilon(1e-11));
        }
    }
}

TEST_CASE("busy_table examples") {
    SUBCASE("single arrivals") {
        auto m = make(0.7, BatchDistribution::single(), ServiceDistribution::erlang(2, 3.0), ServiceDistribution::exponential(2), 15);
        auto t = busy_table(m);
        for (std::size_t j = 0; j <= m.L; ++j) CHECK(t.nu[j] == doctest::Approx(t.nu_tilde[j]).epsilon(1e-14));
    }
    SUBCASE("M/M/1 at rho = 1") {
        auto m = make(1.0, BatchDistribution::single(), ServiceDistribution::exponential(1), ServiceDistribution::exponential(2), 10);
        CHECK(busy_table(m).nu_tilde[10] == doctest::Approx(11.0).epsilon(1e-13));
    }
    SUBCASE("truncation identity, geometric batches") {
        auto m = make(0.5, BatchDistribution::geometric(0.5), ServiceDistribution::exponential(1), ServiceDistribution::exponential(2), 10);
        auto t = busy_table(m);
        CHECK(std::fabs(t.nu[10] - conditional_nu1(t, m.batch) - std::pow(0.5, 10)) < 1e-12);
    }
    SUBCASE("table agrees with the literal double sum") {
        for (const auto& m : model_matrix()) {
            auto t = busy_table(m);
            CHECK(t.nu_tilde[0] == 1.0);
            for (std::size_t j = 0; j <= m.L; ++j) CHECK(t.nu[j] == doctest::Approx(literal_nu(t, m.batch, j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("busy tables are positive and non-decreasing") {
    for (const auto& m : model_matrix()) {
        auto t = busy_table(m);
        for (std::size_t j = 0; j <= m.L; ++j) {
            CHECK(t.nu_tilde[j] > 0);
            CHECK(t.nu[j] > 0);
            if (j > 0) {
                CHECK(t.nu_tilde[j] >= t.nu_tilde[j - 1]);
                CHECK(t.nu[j] >= t.nu[j - 1]);
            }
        }
    }
}

TEST_CASE("nu_tilde converges to 1/(1 - rho1) below one") {
    auto m = make(0.35, BatchDistribution::geometric(0.3), ServiceDistribution::erlang(2, 2.0), ServiceDistribution::exponential(2), 400);
    auto t = busy_table(m);
    CHECK(t.nu_tilde[400] == doctest::Approx(1 / (1 - m.rho1())).epsilon(1e-10));
}

TEST_CASE("truncation identity across the model matrix") {
    for (const auto& m : model_matrix()) {
        auto t = busy_table(m);
        CHECK(std::fabs(t.nu[m.L] - conditional_nu1(t, m.batch) - m.batch.tail(m.L)) < 1e-12);
    }
}

TEST_CASE("linear representations") {
    SUBCASE("rho1 = 1 decouples nu2") {
        auto m = make(0.5, BatchDistribution::geometric(0.5), ServiceDistribution::exponential(1), ServiceDistribution::exponential(2), 7);
        auto r = linear_reps(busy_table(m), m);
        CHECK(r.nu2 == doctest::Approx(2.0 / 0.5));
    }
    SUBCASE("M/M/1 with equal services") {
        auto m = make(0.5, BatchDistribution::single(), ServiceDistribution::exponential(1), ServiceDistribution::exponential(1), 8);
        auto r = linear_reps(busy_table(m), m);
        CHECK(std::fabs(r.nu - 2.0) < 1e-8);
    }
    SUBCASE("identities for geometric batches above one") {
        auto m = make(0.6, BatchDistribution::geometric(0.5), ServiceDistribution::exponential(1), ServiceDistribution::exponential(1), 20);
        m = m.with_rho1(1.2);
        m.service2 = ServiceDistribution::exponential(1).scaled_to_mean(0.5 / (m.lambda * m.batch.m1()));
        CHECK(m.rho1() == doctest::Approx(1.2));
        CHECK(m.rho2() == doctest::Approx(0.5));
        auto r = linear_reps(busy_table(m), m);
        CHECK(std::fabs(r.nu - r.nu1 - r.nu2) < 1e-9);
        CHECK(std::fabs(r.T - r.T1 - r.T2) < 1e-9);
        CHECK(std::fabs(r.T1 - r.nu1 * m.service1.mean()) < 1e-9);
        CHECK(std::fabs(r.T2 - r.nu2 * m.service2.mean()) < 1e-9);
        CHECK(std::fabs(m.lambda * m.batch.m1() * r.T + m.batch.m1() - r.nu) < 1e-9 * r.nu);
    }
    SUBCASE("rho2 >= 1 rejected") {
        auto m = make(1.0, BatchDistribution::single(), ServiceDistribution::exponential(2), ServiceDistribution::exponential(1), 5);
        auto t = busy_table(m);
        CHECK_THROWS_AS(linear_reps(t, m), DomainError);
    }
}

TEST_CASE("quasi-linearity: two routes to the conditional B2 count") {
    for (const auto& m : model_matrix()) {
        auto t = busy_table(m);
        CHECK(std::fabs(conditional_nu2(t, m) - conditional_nu2_direct(t, m)) < 1e-9);
    }
}
