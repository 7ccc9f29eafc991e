#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dam/asymptotics.hpp"
#include "dam/costs.hpp"

namespace dam {

struct MinResult {
    double argmin = 0;
    double value = 0;
};

// Golden-section search to a bracket narrower than tol, then one parabolic step.
// Endpoints are returned when they are at least as good as the interior point.
MinResult minimize_scalar(const std::function<double(double)>& f, double lo, double hi, double tol);

struct ControlOptions {
    double C_max = 50;
    double eps = 1e-4;        // left end of the Lower search
    double tol_decide = 1e-9; // ties resolve to Critical
    double tol_C = 1e-8;
    std::size_t scan_points = 2000;
};

struct ControlSolution {
    Regime regime = Regime::Critical;
    double C_opt = 0;
    double objective = 0;
    double J_critical = 0;
    double upper_C = 0, upper_min = 0;
    double lower_C = 0, lower_min = 0;
    std::vector<std::string> warnings;

    double rho1_at(std::size_t L) const;
    std::string rho1_prescription() const;
};

// params.C and params.regime are ignored.
ControlSolution solve_control(const HeavyTrafficParams& params, const CostProfile& costs, double j1, double j2,
                              const ControlOptions& opt = {});

struct SweepRow {
    double j2 = 0;
    double C_opt = 0;
    double objective = 0;
    Regime regime = Regime::Critical;
};

std::vector<SweepRow> sweep_j2(const HeavyTrafficParams& params, const CostProfile& costs, double j1,
                               const std::vector<double>& j2_list, const ControlOptions& opt = {});

} // namespace dam
