#include "dam/control.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include "dam/errors.hpp"
#include "dam/objective.hpp"

namespace dam {

namespace {

const double kInvPhi = (std::sqrt(5.0) - 1) / 2;

// Coarse scan for the best grid point, then golden refinement between its neighbours.
MinResult scan_then_minimize(const std::function<double(double)>& f, double lo, double hi, std::size_t n, double tol) {
    std::size_t best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    const double h = (hi - lo) / double(n);
    for (std::size_t k = 0; k <= n; ++k) {
        double v = f(lo + h * double(k));
        if (v < best_v) {
            best_v = v;
            best = k;
        }
    }
    double a = best == 0 ? lo : lo + h * double(best - 1);
    double b = best == n ? hi : lo + h * double(best + 1);
    auto r = minimize_scalar(f, a, b, tol);
    if (best_v < r.value) return {lo + h * double(best), best_v};
    return r;
}

} // namespace

MinResult minimize_scalar(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    MinResult best = fc < fd ? MinResult{c, fc} : MinResult{d, fd};

    // parabola through a, the midpoint and b
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double den = (m - a) * (fm - fb) - (m - b) * (fm - fa);
    if (den != 0 && std::isfinite(den)) {
        double v = m - 0.5 * ((m - a) * (m - a) * (fm - fb) - (m - b) * (m - b) * (fm - fa)) / den;
        if (v >= a && v <= b) {
            double fv = f(v);
            if (fv < best.value) best = {v, fv};
        }
    }
    if (fm < best.value) best = {m, fm};

    double flo = f(lo), fhi = f(hi);
    if (flo <= best.value) best = {lo, flo};
    if (fhi < best.value) best = {hi, fhi};
    return best;
}

double ControlSolution::rho1_at(std::size_t L) const {
    double d = C_opt / double(L);
    switch (regime) {
    case Regime::Upper: return 1 + d;
    case Regime::Lower: return 1 - d;
    default: return 1.0;
    }
}

std::string ControlSolution::rho1_prescription() const {
    std::ostringstream os;
    os.precision(12);
    switch (regime) {
    case Regime::Critical: os << "rho1 = 1"; break;
    case Regime::Upper: os << "rho1 = 1 + " << C_opt << "/L"; break;
    case Regime::Lower: os << "rho1 = 1 - " << C_opt << "/L"; break;
    }
    return os.str();
}

ControlSolution solve_control(const HeavyTrafficParams& params, const CostProfile& costs, double j1, double j2,
                              const ControlOptions& opt) {
    HeavyTrafficParams p = params;
    p.C = 0;
    p.regime = Regime::Critical;
    p.validate();
    if (!(opt.C_max > opt.eps && opt.eps > 0)) throw DomainError("need 0 < eps < C_max");

    ControlSolution s;
    s.J_critical = j_critical(p, costs, j1, j2);

    auto up = [&](double C) {
        HeavyTrafficParams q = p;
        q.C = C;
        q.regime = Regime::Upper;
        return j_upper(q, costs, j1, j2);
    };
    auto low = [&](double C) {
        HeavyTrafficParams q = p;
        q.C = C;
        q.regime = Regime::Lower;
        return j_lower(q, costs, j1, j2);
    };
    auto ru = scan_then_minimize(up, 0.0, opt.C_max, opt.scan_points, opt.tol_C);
    auto rl = scan_then_minimize(low, opt.eps, opt.C_max, opt.scan_points, opt.tol_C);
    s.upper_C = ru.argmin;
    s.upper_min = ru.value;
    s.lower_C = rl.argmin;
    s.lower_min = rl.value;

    const double tol = opt.tol_decide;
    if (ru.value < s.J_critical - tol && rl.value < s.J_critical - tol)
        s.warnings.push_back("ConsistencyWarning: both interior minima improve on the critical value");

    if (ru.value < std::min(s.J_critical, rl.value) - tol && ru.argmin > 0) {
        s.regime = Regime::Upper;
        s.C_opt = ru.argmin;
        s.objective = ru.value;
    } else if (rl.value < std::min(s.J_critical, ru.value) - tol) {
        s.regime = Regime::Lower;
        s.C_opt = rl.argmin;
        s.objective = rl.value;
    } else {
        s.regime = Regime::Critical;
        s.C_opt = 0;
        s.objective = s.J_critical;
    }
    return s;
}

std::vector<SweepRow> sweep_j2(const HeavyTrafficParams& params, const CostProfile& costs, double j1,
                               const std::vector<double>& j2_list, const ControlOptions& opt) {
    std::vector<SweepRow> rows(j2_list.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < j2_list.size();) {
            auto s = solve_control(params, costs, j1, j2_list[i], opt);
            rows[i] = {j2_list[i], s.C_opt, s.objective, s.regime};
        }
    };
    std::size_t n = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), j2_list.size());
    std::vector<std::future<void>> workers;
    for (std::size_t k = 0; k < n; ++k) workers.push_back(std::async(std::launch::async, work));
    for (auto& w : workers) w.get();
    return rows;
}

} // namespace dam
