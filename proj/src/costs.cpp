#include "dam/costs.hpp"

#include <cmath>
#include <numeric>

#include "dam/errors.hpp"

namespace dam {

CostProfile CostProfile::linear(double top, double bottom) {
    if (!(bottom >= 0) || !(top >= bottom) || !std::isfinite(top))
        throw DomainError("linear costs need top >= bottom >= 0");
    CostProfile c;
    c.top_ = top;
    c.bottom_ = bottom;
    return c;
}

CostProfile CostProfile::explicit_values(std::vector<double> values) {
    if (values.empty()) throw DomainError("explicit costs need at least one value");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0) || !std::isfinite(values[i])) throw DomainError("costs must be finite and >= 0");
        if (i > 0 && values[i] > values[i - 1]) throw DomainError("costs must be non-increasing in level");
    }
    CostProfile c;
    c.linear_ = false;
    c.top_ = values.front();
    c.bottom_ = values.back();
    c.values_ = std::move(values);
    return c;
}

std::vector<double> CostProfile::at(std::size_t L) const {
    std::vector<double> c(L);
    if (linear_) {
        for (std::size_t i = 0; i < L; ++i)
            c[i] = L == 1 ? top_ : top_ - double(i) / double(L - 1) * (top_ - bottom_);
        return c;
    }
    std::size_t M = values_.size();
    for (std::size_t i = 1; i <= L; ++i) {
        std::size_t k = (i * M + L - 1) / L; // ceil(i*M/L)
        c[i - 1] = values_[k - 1];
    }
    return c;
}

double CostProfile::c_star() const {
    if (linear_) return 0.5 * (top_ + bottom_);
    return std::accumulate(values_.begin(), values_.end(), 0.0) / double(values_.size());
}

double c_star(const CostProfile& costs) { return costs.c_star(); }

} // namespace dam
