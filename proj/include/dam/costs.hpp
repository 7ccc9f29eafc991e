#pragma once

#include <cstddef>
#include <vector>

namespace dam {

// Water cost per level, non-increasing from the bottom level upward.
class CostProfile {
public:
    CostProfile() = default; // Linear 2 -> 1

    // c_1 = top, c_L = bottom, linear in between.
    static CostProfile linear(double top, double bottom);
    // Step profile on relative level: at size L, c_i = values[ceil(i*M/L) - 1].
    static CostProfile explicit_values(std::vector<double> values);
    static CostProfile uniform(double c) { return linear(c, c); }

    bool is_linear() const { return linear_; }
    double top() const { return top_; }
    double bottom() const { return bottom_; }
    const std::vector<double>& values() const { return values_; }

    // c_1..c_L
    std::vector<double> at(std::size_t L) const;
    double c_star() const;

private:
    bool linear_ = true;
    double top_ = 2.0, bottom_ = 1.0;
    std::vector<double> values_;
};

double c_star(const CostProfile& costs);

} // namespace dam
