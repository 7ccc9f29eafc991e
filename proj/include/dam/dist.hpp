#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace dam {

// f_0..f_n, p_0..p_n and similar probability sequences.
using CoeffSeq = std::vector<double>;

// Batch-size law {r_i}, i >= 1. Either an explicit finite support or geometric
// r_i = (1-q) q^{i-1}.
class BatchDistribution {
public:
    BatchDistribution(); // r_1 = 1

    static BatchDistribution single() { return BatchDistribution(); }
    // probs[k] is r_{k+1}
    static BatchDistribution explicit_law(std::vector<double> probs);
    static BatchDistribution geometric(double q);

    bool is_geometric() const { return geometric_; }
    double q() const { return q_; }

    double prob(std::size_t i) const;
    // Pr{batch > i}
    double tail(std::size_t i) const;
    // Largest index with r_i > 0, or 0 for unbounded support.
    std::size_t support_max() const { return geometric_ ? 0 : probs_.size(); }

    double m1() const { return m1_; }
    double m2() const { return m2_; }
    double m3() const { return m3_; }

    double pgf(double z) const;
    double pgf_derivative(double z) const;

    // Inverse-transform sample from a uniform u in [0,1).
    std::size_t sample(double u) const;

private:
    bool geometric_ = false;
    double q_ = 0.0;
    std::vector<double> probs_;
    std::vector<double> tails_; // tails_[i] = Pr{batch > i}, i = 0..K
    std::vector<double> cdf_;
    double m1_ = 1, m2_ = 1, m3_ = 1;
};

enum class Family { Deterministic, Exponential, Erlang, Hyperexponential };

const char* family_name(Family f);

class ServiceDistribution {
public:
    ServiceDistribution(); // Exponential(1)

    static ServiceDistribution deterministic(double d);
    static ServiceDistribution exponential(double rate);
    static ServiceDistribution erlang(int k, double rate);
    static ServiceDistribution hyperexponential(std::vector<double> weights, std::vector<double> rates);

    Family family() const { return family_; }
    double mean() const { return moment(1); }
    double moment(int l) const; // l-th raw moment
    double lst(double s) const;
    double lst_derivative(double s) const;
    // Transform is analytic for s > -abscissa(); infinite for deterministic.
    double abscissa() const;

    // Same family with every time scaled so that the mean equals m.
    ServiceDistribution scaled_to_mean(double m) const;

    double d() const { return d_; }
    int k() const { return k_; }
    const std::vector<double>& rates() const { return rates_; }
    const std::vector<double>& weights() const { return weights_; }

    // Sample using a source of uniforms in [0,1).
    template <class Uniform>
    double sample(Uniform&& u) const;

private:
    Family family_ = Family::Exponential;
    double d_ = 0.0;
    int k_ = 1;
    std::vector<double> weights_{1.0};
    std::vector<double> rates_{1.0};
};

double batch_pgf(const BatchDistribution& batch, double z);
double lst(const ServiceDistribution& service, double s);

// Compound Poisson count with Poisson mean rate_time, p_0..p_{n_max}.
CoeffSeq compound_poisson_pmf(const BatchDistribution& batch, double rate_time, std::size_t n_max);

// f_i = Pr{i customers arrive during one service}, i = 0..n_max.
CoeffSeq arrivals_per_service_coeffs(const ServiceDistribution& service, const BatchDistribution& batch,
                                     double lambda, std::size_t n_max);

// Grows n_max until the unaccumulated mass is below tol (or n_cap is reached).
CoeffSeq arrivals_per_service_coeffs_adaptive(const ServiceDistribution& service,
                                              const BatchDistribution& batch, double lambda,
                                              double tol = 1e-10, std::size_t n_cap = 1u << 20);

// U(z) = B^(lambda - lambda R^(z))
double arrivals_pgf(const ServiceDistribution& service, const BatchDistribution& batch, double lambda,
                    double z);

template <class Uniform>
double ServiceDistribution::sample(Uniform&& u) const {
    auto expo = [&](double rate) {
        double v = u();
        return -std::log1p(-v) / rate;
    };
    switch (family_) {
    case Family::Deterministic:
        return d_;
    case Family::Exponential:
        return expo(rates_[0]);
    case Family::Erlang: {
        double t = 0;
        for (int i = 0; i < k_; ++i) t += expo(rates_[0]);
        return t;
    }
    case Family::Hyperexponential: {
        double v = u(), acc = 0;
        std::size_t m = 0;
        for (; m + 1 < weights_.size(); ++m) {
            acc += weights_[m];
            if (v < acc) break;
        }
        return expo(rates_[m]);
    }
    }
    return 0.0;
}

} // namespace dam
