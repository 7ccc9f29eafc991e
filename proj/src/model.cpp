#include "dam/model.hpp"

#include <cmath>
#include <string>

#include "dam/errors.hpp"

namespace dam {

double DamModel::rho1_moment(int l) const { return std::pow(lambda, l) * service1.moment(l); }

void DamModel::validate() const {
    if (!(lambda > 0) || !std::isfinite(lambda)) throw DomainError("model.lambda must be > 0");
    if (L < 1) throw DomainError("model.L must be >= 1");
    if (L > 1000000) throw DomainError("model.L must be <= 1e6");
    if (!(service1.mean() > 0)) throw DomainError("model.service1 mean must be > 0");
    if (!(service2.mean() > 0)) throw DomainError("model.service2 mean must be > 0");
    if (!(j1 >= 0) || !(j2 >= 0)) throw DomainError("model.j1 and model.j2 must be >= 0");
}

DamModel DamModel::with_rho1(double target) const {
    if (!(target > 0)) throw DomainError("target rho1 must be > 0");
    DamModel m = *this;
    m.service1 = service1.scaled_to_mean(target / (lambda * batch.m1()));
    return m;
}

} // namespace dam
