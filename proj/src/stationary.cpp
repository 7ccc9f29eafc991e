#include "dam/stationary.hpp"

#include <cmath>
#include <string>

#include "dam/errors.hpp"

namespace dam {

StationaryDistribution stationary_distribution(const DamModel& model) {
    return stationary_distribution(model, busy_table(model));
}

StationaryDistribution stationary_distribution(const DamModel& model, const BusyTable& table) {
    const double r1 = model.rho1(), r2 = model.rho2(), Es = model.batch.m1();
    if (!(r2 < 1))
        throw DomainError("rho2 < 1 required: the B2 service must obey the condition lambda*E(batch)*E(B2) < 1 (rho2 = " +
                          std::to_string(r2) + ")");
    const std::size_t L = table.L;
    const double nuL = table.nu[L];
    const double den = Es + (r1 - r2) * nuL;

    StationaryDistribution s;
    s.p1 = (1 - r2) * Es / den;
    s.p2 = (r2 * Es + r2 * (r1 - 1) * nuL) / den;
    if (!(s.p1 > 0)) throw NormalizationError("non-positive empty-system probability");

    s.q.resize(L);
    long double level_mass = 0;
    for (std::size_t i = 1; i <= L; ++i) {
        s.q[i - 1] = s.p1 * (table.nu_tilde[i] - table.nu_tilde[i - 1]);
        level_mass += s.q[i - 1];
    }
    s.overflow = double(1.0L - s.p1 - level_mass);

    s.q_service.resize(L + 1);
    long double service_mass = 0;
    for (std::size_t i = 0; i <= L; ++i) {
        double prev = i == 0 ? 0.0 : table.nu[i - 1];
        s.q_service[i] = r1 * s.p1 * (table.nu[i] - prev) / Es;
        service_mass += s.q_service[i];
    }

    double total = double(s.p1 + s.p2 + service_mass);
    if (std::fabs(total - 1) > 1e-6)
        throw NormalizationError("probabilities sum to " + std::to_string(total));
    if (s.overflow < -1e-9 || s.p2 < -1e-12)
        throw NormalizationError("negative probability mass above the threshold");
    for (double v : s.q)
        if (v < -1e-12) throw NormalizationError("negative level probability");
    return s;
}

} // namespace dam
