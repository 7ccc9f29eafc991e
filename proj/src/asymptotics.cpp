#include "dam/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "dam/errors.hpp"

namespace dam {

namespace {

constexpr double kLogMax = 700.0;

// exp guarded against overflow
double safe_exp(double v) { return v > kLogMax ? std::numeric_limits<double>::infinity() : std::exp(v); }

void require_positive_C(const HeavyTrafficParams& p) {
    if (p.regime != Regime::Critical && !(p.C > 0))
        throw DomainError("Upper/Lower regime limits need C > 0");
}

// g(z) = U(z) - z, or nothing outside the analyticity domain.
std::optional<double> g_value(const DamModel& m, double z) {
    try {
        return arrivals_pgf(m.service1, m.batch, m.lambda, z) - z;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

double g_derivative(const DamModel& m, double z) {
    double s = m.lambda - m.lambda * m.batch.pgf(z);
    return -m.lambda * m.service1.lst_derivative(s) * m.batch.pgf_derivative(z) - 1;
}

// lo and hi bracket a sign change with g(lo) > 0 > g(hi) or the reverse.
RootSolution refine(const DamModel& m, double lo, double hi, RootSide side) {
    double glo = *g_value(m, lo);
    double z = 0.5 * (lo + hi);
    double best = z, best_res = INFINITY;
    for (int it = 0; it < 200; ++it) {
        double gz = *g_value(m, z);
        if (std::fabs(gz) < best_res) {
            best_res = std::fabs(gz);
            best = z;
        }
        if (gz == 0 || (best_res < 1e-14 && hi - lo < 1e-12)) break;
        if ((gz > 0) == (glo > 0)) {
            lo = z;
            glo = gz;
        } else {
            hi = z;
        }
        if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::fabs(z)) break;
        double dz = g_derivative(m, z);
        double zn = dz != 0 ? z - gz / dz : lo;
        z = (zn > lo && zn < hi) ? zn : 0.5 * (lo + hi);
    }
    return RootSolution{best, best_res, side};
}

} // namespace

const char* regime_name(Regime r) {
    switch (r) {
    case Regime::Critical: return "Critical";
    case Regime::Upper: return "Upper";
    case Regime::Lower: return "Lower";
    }
    return "?";
}

void HeavyTrafficParams::validate() const {
    if (!(Es >= 1)) throw DomainError("E batch must be >= 1");
    if (!(Es2 >= Es * Es * (1 - 1e-12))) throw DomainError("E batch^2 must be >= (E batch)^2");
    if (!(rho12 > 0)) throw DomainError("rho12 must be > 0");
    if (!(rho2 > 0 && rho2 < 1)) throw DomainError("rho2 < 1 required: 0 < rho2 < 1");
    if (!(C >= 0)) throw DomainError("C must be >= 0");
    if (!(D() > 0)) throw DomainError("D must be > 0");
}

HeavyTrafficParams HeavyTrafficParams::from_model(const DamModel& m, Regime regime, double C) {
    HeavyTrafficParams p;
    p.Es = m.batch.m1();
    p.Es2 = m.batch.m2();
    double r1 = m.rho1();
    p.rho12 = m.rho1_moment(2) / (r1 * r1);
    p.rho2 = m.rho2();
    p.C = C;
    p.regime = regime;
    return p;
}

RootSolution find_root(const DamModel& model, RootSide side) {
    const double r1 = model.rho1();
    if (side == RootSide::BelowOne) {
        if (!(r1 > 1)) throw DomainError("root below one needs rho1 > 1");
        double h = 0.5;
        for (;;) {
            auto g = g_value(model, 1 - h);
            if (g && *g < 0) break;
            h /= 2;
            if (h < 1e-14) throw NoBracketError("no sign change below z = 1");
        }
        return refine(model, 0.0, 1 - h, side);
    }

    if (!(r1 < 1)) throw DomainError("root above one needs rho1 < 1");
    const double step = 0.05;
    double h = step;
    for (;;) {
        auto g = g_value(model, 1 + h);
        if (!g) throw NoBracketError("analyticity boundary reached next to z = 1");
        if (*g < 0) break;
        h /= 2;
        if (h < 1e-14) throw NoBracketError("no negative value of U(z) - z above z = 1");
    }
    double lo = 1 + h;
    if (h < step) return refine(model, lo, 1 + 2 * h, side);
    for (double z = lo + step; z < 1e6; z += step) {
        auto g = g_value(model, z);
        if (!g) throw NoBracketError("no root above 1 before the analyticity boundary at z = " + std::to_string(z));
        if (*g > 0) return refine(model, z - step, z, side);
    }
    throw NoBracketError("no root above 1 found");
}

double root_expansion(const HeavyTrafficParams& p, double delta, RootSide side) {
    double d = 2 * delta * p.Es / p.D();
    return side == RootSide::BelowOne ? 1 - d : 1 + d;
}

PLimit limit_p(const HeavyTrafficParams& p) {
    p.validate();
    require_positive_C(p);
    const double k2 = p.rho2 / (1 - p.rho2);
    const double x = p.x();
    PLimit r;
    switch (p.regime) {
    case Regime::Critical:
        r.p1 = p.D() / (2 * p.Es);
        r.p2 = k2 * r.p1;
        break;
    case Regime::Upper:
        r.p1 = 1 / std::expm1(x);
        r.p2 = k2 / (-std::expm1(-x));
        break;
    case Regime::Lower: {
        double e = safe_exp(1 / x);
        r.p1 = e;
        r.p2 = k2 * (e - 1);
        break;
    }
    }
    return r;
}

double QLimit::value(std::size_t j) const { return prefactor * std::pow(ratio, double(j)); }

QLimit limit_q_form(const HeavyTrafficParams& p, double L_ref) {
    p.validate();
    require_positive_C(p);
    QLimit q;
    if (p.regime == Regime::Critical) return q;
    if (!(L_ref > 0)) throw DomainError("reference L must be > 0");
    const double x = p.x(), a = 2 * p.Es / p.D(), delta = p.C / L_ref;
    if (p.regime == Regime::Upper) {
        q.prefactor = a / (-std::expm1(-x));
        q.ratio = 1 - a * delta;
    } else {
        q.prefactor = a / std::expm1(x);
        q.ratio = 1 + a * delta;
    }
    return q;
}

double limit_q(const HeavyTrafficParams& p, std::size_t j, double L_ref) { return limit_q_form(p, L_ref).value(j); }

} // namespace dam
