#include "dam/takacs.hpp"

#include <cmath>
#include <string>

#include "dam/errors.hpp"

namespace dam {

namespace {

// Neumaier summation in extended precision.
struct Accumulator {
    long double sum = 0, comp = 0;
    void add(long double v) {
        long double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    long double value() const { return sum + comp; }
};

std::vector<long double> prefix_sums(const std::vector<double>& v) {
    std::vector<long double> P(v.size());
    Accumulator acc;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc.add(v[i]);
        P[i] = acc.value();
    }
    return P;
}

void require_rho2(const DamModel& m) {
    if (!(m.rho2() < 1))
        throw DomainError("rho2 < 1 required: the B2 service must obey the condition lambda*E(batch)*E(B2) < 1 (rho2 = " +
                          std::to_string(m.rho2()) + ")");
}

} // namespace

std::vector<double> solve_takacs(const CoeffSeq& f, double q0, std::size_t n) {
    if (f.empty() || !(f[0] > 0)) throw SingularError("recurrence needs f_0 > 0");
    std::vector<long double> Q(n + 1);
    Q[0] = q0;
    long double f0 = f[0];
    for (std::size_t m = 0; m < n; ++m) {
        Accumulator acc;
        acc.add(Q[m]);
        std::size_t im = std::min(m, f.size() - 1);
        for (std::size_t i = 1; i <= im; ++i) acc.add(-static_cast<long double>(f[i]) * Q[m - i + 1]);
        Q[m + 1] = acc.value() / f0;
    }
    return std::vector<double>(Q.begin(), Q.end());
}

double truncated_batch_prob(const BatchDistribution& batch, std::size_t m, std::size_t i) {
    if (i == 0 || i > m) return 0.0;
    if (i < m) return batch.prob(i);
    return batch.tail(m - 1);
}

double truncated_batch_mean(const BatchDistribution& batch, std::size_t m) {
    Accumulator acc;
    for (std::size_t i = 0; i < m; ++i) acc.add(batch.tail(i));
    return double(acc.value());
}

BusyTable busy_table(const DamModel& model) {
    model.validate();
    const std::size_t L = model.L;
    auto f = arrivals_per_service_coeffs(model.service1, model.batch, model.lambda, L + 2);
    BusyTable t;
    t.L = L;
    t.nu_tilde = solve_takacs(f, 1.0, L);

    // nu[j] = P[j] - sum_{i=1..j} r_i P[j-i], P the prefix sums of nu_tilde.
    auto P = prefix_sums(t.nu_tilde);
    t.nu.resize(L + 1);
    const auto& b = model.batch;
    if (b.is_geometric()) {
        long double q = b.q(), G = 0;
        for (std::size_t j = 0; j <= L; ++j) {
            if (j > 0) G = q * G + (1 - q) * P[j - 1];
            t.nu[j] = double(P[j] - G);
        }
    } else {
        std::size_t K = b.support_max();
        for (std::size_t j = 0; j <= L; ++j) {
            Accumulator acc;
            acc.add(P[j]);
            std::size_t im = std::min(j, K);
            for (std::size_t i = 1; i <= im; ++i) acc.add(-static_cast<long double>(b.prob(i)) * P[j - i]);
            t.nu[j] = double(acc.value());
        }
    }
    return t;
}

double conditional_nu1(const BusyTable& table, const BatchDistribution& batch) {
    const std::size_t L = table.L;
    Accumulator outer;
    for (std::size_t i = 1; i <= L; ++i) {
        long double w = truncated_batch_prob(batch, L, i);
        if (w == 0) continue;
        Accumulator inner;
        for (std::size_t j = 1; j <= i; ++j) inner.add(table.nu_tilde[L - j + 1]);
        outer.add(w * inner.value());
    }
    return double(outer.value());
}

double conditional_nu2(const BusyTable& table, const DamModel& model) {
    require_rho2(model);
    double r1 = model.rho1(), r2 = model.rho2();
    return truncated_batch_mean(model.batch, table.L) / (1 - r2) -
           (1 - r1) / (1 - r2) * conditional_nu1(table, model.batch);
}

double conditional_nu2_direct(const BusyTable& table, const DamModel& model) {
    require_rho2(model);
    const std::size_t L = table.L;
    long double r1 = model.rho1(), r2 = model.rho2();
    Accumulator outer;
    for (std::size_t i = 1; i <= L; ++i) {
        long double w = truncated_batch_prob(model.batch, L, i);
        if (w == 0) continue;
        Accumulator inner;
        for (std::size_t j = 1; j <= i; ++j)
            inner.add(1 / (1 - r2) - (1 - r1) / (1 - r2) * table.nu_tilde[L - j + 1]);
        outer.add(w * inner.value());
    }
    return double(outer.value());
}

LinearReps linear_reps(const BusyTable& table, const DamModel& model) {
    require_rho2(model);
    double r1 = model.rho1(), r2 = model.rho2(), Es = model.batch.m1();
    LinearReps r;
    r.nu1 = table.nu[table.L];
    r.nu2 = Es / (1 - r2) - (1 - r1) / (1 - r2) * r.nu1;
    r.T1 = r.nu1 * model.service1.mean();
    r.T2 = r.nu2 * model.service2.mean();
    r.T = r.T1 + r.T2;
    r.nu = r.nu1 + r.nu2;
    return r;
}

} // namespace dam
