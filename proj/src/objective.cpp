#include "dam/objective.hpp"

#include <cmath>
#include <limits>

#include "dam/errors.hpp"

namespace dam {

namespace {

// 1/x - 1/(e^x - 1)
double upper_weight(double x) {
    if (std::fabs(x) < 1e-3) {
        double x2 = x * x;
        return 0.5 - x / 12 + x * x2 / 720 - x * x2 * x2 / 30240;
    }
    return 1 / x - 1 / std::expm1(x);
}

// x / (e^x - 1), 1 at x = 0
double x_over_expm1(double x) { return x == 0 ? 1.0 : x / std::expm1(x); }

double weighted_sum(const CostProfile& costs, double x, std::size_t L, double sign) {
    if (!(x >= 0)) throw DomainError("cost exponent x must be >= 0");
    if (sign < 0 && x >= double(L)) throw DomainError("resolution too coarse for this x");
    auto c = costs.at(L);
    const double lw = std::log1p(sign * x / double(L));
    const double shift = sign > 0 ? lw * double(L - 1) : 0.0;
    long double num = 0, den = 0;
    for (std::size_t j = 0; j < L; ++j) {
        long double w = std::exp(lw * double(j) - shift);
        num += c[L - 1 - j] * w;
        den += w;
    }
    return double(num / den);
}

double richardson(const CostProfile& costs, double x, double sign) {
    double a = weighted_sum(costs, x, kCostResolution, sign);
    double b = weighted_sum(costs, x, 2 * kCostResolution, sign);
    return 2 * b - a;
}

} // namespace

ObjectiveValue exact_objective(const DamModel& model) { return exact_objective(model, stationary_distribution(model)); }

ObjectiveValue exact_objective(const DamModel& model, const StationaryDistribution& dist) {
    const double L = double(model.L);
    ObjectiveValue v;
    v.damage_lower = model.j1 * L * dist.p1;
    v.damage_upper = model.j2 * L * dist.p2;
    auto c = model.costs.at(model.L);
    long double w = 0;
    for (std::size_t i = 0; i < model.L; ++i) w += c[i] * dist.q[i];
    v.water_cost = double(w);
    v.value = v.damage_lower + v.damage_upper + v.water_cost;
    return v;
}

double psi_sum(const CostProfile& costs, double x, std::size_t L) { return weighted_sum(costs, x, L, -1); }
double eta_sum(const CostProfile& costs, double x, std::size_t L) { return weighted_sum(costs, x, L, +1); }

double psi(const CostProfile& costs, double x) {
    if (!(x >= 0)) throw DomainError("cost exponent x must be >= 0");
    if (x == 0) return costs.c_star();
    if (costs.is_linear()) return costs.bottom() + (costs.top() - costs.bottom()) * upper_weight(x);
    return richardson(costs, x, -1);
}

double eta(const CostProfile& costs, double x) {
    if (!(x >= 0)) throw DomainError("cost exponent x must be >= 0");
    if (x == 0) return costs.c_star();
    if (costs.is_linear()) return costs.bottom() + (costs.top() - costs.bottom()) * upper_weight(-x);
    return richardson(costs, x, +1);
}

double j_critical(const HeavyTrafficParams& p, const CostProfile& costs, double j1, double j2) {
    p.validate();
    double a = p.D() / (2 * p.Es);
    return (j1 + j2 * p.rho2 / (1 - p.rho2)) * a + costs.c_star();
}

double j_upper(const HeavyTrafficParams& p, const CostProfile& costs, double j1, double j2) {
    p.validate();
    const double a = p.D() / (2 * p.Es), k2 = p.rho2 / (1 - p.rho2), x = p.x();
    // C/(e^x - 1) = a x/(e^x - 1) and C e^x/(e^x - 1) = a (-x)/(e^{-x} - 1)
    return a * (j1 * x_over_expm1(x) + j2 * k2 * x_over_expm1(-x)) + psi(costs, x);
}

double j_lower(const HeavyTrafficParams& p, const CostProfile& costs, double j1, double j2) {
    p.validate();
    if (!(p.C > 0)) throw DomainError("lower-regime objective needs C > 0");
    const double k2 = p.rho2 / (1 - p.rho2), x = p.x();
    const double inv = 1 / x;
    double damage = 0;
    if (j1 != 0 || j2 != 0) {
        if (inv > 700) return std::numeric_limits<double>::infinity();
        damage = p.C * (j1 * std::exp(inv) + j2 * k2 * std::expm1(inv));
    }
    return damage + eta(costs, x);
}

} // namespace dam
