#include "dam/dist.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "dam/errors.hpp"

namespace dam {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

std::vector<double> truncated_convolution(const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t n = a.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (std::size_t j = 0; j <= i; ++j) s += a[j] * b[i - j];
        out[i] = s;
    }
    return out;
}

// Exponential(mu) service: f_0 = mu/(mu+lambda), f_i = lambda/(mu+lambda) sum r_j f_{i-j}.
// The batch convolution is carried along incrementally.
std::vector<double> exponential_stage(const BatchDistribution& b, double lambda, double mu, std::size_t n_max) {
    std::vector<double> f(n_max + 1, 0.0);
    double a = lambda / (mu + lambda);
    f[0] = mu / (mu + lambda);
    if (b.is_geometric()) {
        double q = b.q(), s = 0;
        for (std::size_t i = 1; i <= n_max; ++i) {
            s = q * s + (1 - q) * f[i - 1];
            f[i] = a * s;
        }
        return f;
    }
    std::size_t K = b.support_max();
    for (std::size_t i = 1; i <= n_max; ++i) {
        double s = 0;
        std::size_t jm = std::min(i, K);
        for (std::size_t j = 1; j <= jm; ++j) s += b.prob(j) * f[i - j];
        f[i] = a * s;
    }
    return f;
}

} // namespace

BatchDistribution::BatchDistribution() : probs_{1.0}, tails_{1.0, 0.0}, cdf_{1.0} {}

BatchDistribution BatchDistribution::explicit_law(std::vector<double> probs) {
    while (!probs.empty() && probs.back() == 0.0) probs.pop_back();
    require(!probs.empty(), "batch law needs at least one positive probability");
    double total = 0;
    for (double p : probs) {
        require(p >= 0 && std::isfinite(p), "batch probabilities must be non-negative");
        total += p;
    }
    require(std::fabs(total - 1.0) <= 1e-12, "batch probabilities must sum to 1");

    BatchDistribution b;
    b.probs_ = std::move(probs);
    std::size_t K = b.probs_.size();
    b.tails_.assign(K + 1, 0.0);
    for (std::size_t i = K; i-- > 0;) b.tails_[i] = b.tails_[i + 1] + b.probs_[i];
    b.cdf_.resize(K);
    std::partial_sum(b.probs_.begin(), b.probs_.end(), b.cdf_.begin());
    b.m1_ = b.m2_ = b.m3_ = 0;
    for (std::size_t k = 0; k < K; ++k) {
        double i = double(k + 1);
        b.m1_ += i * b.probs_[k];
        b.m2_ += i * i * b.probs_[k];
        b.m3_ += i * i * i * b.probs_[k];
    }
    return b;
}

BatchDistribution BatchDistribution::geometric(double q) {
    require(q >= 0 && q < 1, "geometric batch parameter q must lie in [0, 1)");
    BatchDistribution b;
    b.geometric_ = true;
    b.q_ = q;
    b.probs_.clear();
    b.tails_.clear();
    b.cdf_.clear();
    double p = 1 - q;
    b.m1_ = 1 / p;
    b.m2_ = (1 + q) / (p * p);
    b.m3_ = (1 + 4 * q + q * q) / (p * p * p);
    return b;
}

double BatchDistribution::prob(std::size_t i) const {
    if (i == 0) return 0.0;
    if (geometric_) return (1 - q_) * std::pow(q_, double(i - 1));
    return i <= probs_.size() ? probs_[i - 1] : 0.0;
}

double BatchDistribution::tail(std::size_t i) const {
    if (geometric_) return std::pow(q_, double(i));
    return i < tails_.size() ? tails_[i] : 0.0;
}

double BatchDistribution::pgf(double z) const {
    if (geometric_) {
        if (std::fabs(q_ * z) >= 1) throw DomainError("batch pgf diverges at z = " + std::to_string(z));
        return (1 - q_) * z / (1 - q_ * z);
    }
    double s = 0;
    for (std::size_t k = probs_.size(); k-- > 0;) s = (s + probs_[k]) * z;
    return s;
}

double BatchDistribution::pgf_derivative(double z) const {
    if (geometric_) {
        if (std::fabs(q_ * z) >= 1) throw DomainError("batch pgf diverges at z = " + std::to_string(z));
        double d = 1 - q_ * z;
        return (1 - q_) / (d * d);
    }
    double s = 0;
    for (std::size_t k = probs_.size(); k-- > 0;) s = s * z + double(k + 1) * probs_[k];
    return s;
}

std::size_t BatchDistribution::sample(double u) const {
    if (geometric_) {
        if (q_ == 0) return 1;
        return 1 + std::size_t(std::floor(std::log1p(-u) / std::log(q_)));
    }
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t k = std::size_t(it - cdf_.begin());
    if (k >= probs_.size()) k = probs_.size() - 1;
    while (probs_[k] == 0.0 && k + 1 < probs_.size()) ++k;
    return k + 1;
}

const char* family_name(Family f) {
    switch (f) {
    case Family::Deterministic: return "deterministic";
    case Family::Exponential: return "exponential";
    case Family::Erlang: return "erlang";
    case Family::Hyperexponential: return "hyperexponential";
    }
    return "?";
}

ServiceDistribution::ServiceDistribution() = default;

ServiceDistribution ServiceDistribution::deterministic(double d) {
    require(d >= 0 && std::isfinite(d), "deterministic service time must be >= 0");
    ServiceDistribution s;
    s.family_ = Family::Deterministic;
    s.d_ = d;
    s.rates_.clear();
    s.weights_.clear();
    return s;
}

ServiceDistribution ServiceDistribution::exponential(double rate) {
    require(rate > 0 && std::isfinite(rate), "exponential rate must be > 0");
    ServiceDistribution s;
    s.rates_ = {rate};
    return s;
}

ServiceDistribution ServiceDistribution::erlang(int k, double rate) {
    require(k >= 1, "Erlang shape must be >= 1");
    require(rate > 0 && std::isfinite(rate), "Erlang stage rate must be > 0");
    ServiceDistribution s;
    s.family_ = Family::Erlang;
    s.k_ = k;
    s.rates_ = {rate};
    return s;
}

ServiceDistribution ServiceDistribution::hyperexponential(std::vector<double> weights, std::vector<double> rates) {
    require(!weights.empty() && weights.size() == rates.size(),
            "hyperexponential needs matching non-empty weights and rates");
    double total = 0;
    for (std::size_t m = 0; m < weights.size(); ++m) {
        require(weights[m] > 0, "hyperexponential weights must be > 0");
        require(rates[m] > 0 && std::isfinite(rates[m]), "hyperexponential rates must be > 0");
        total += weights[m];
    }
    require(std::fabs(total - 1) <= 1e-12, "hyperexponential weights must sum to 1");
    ServiceDistribution s;
    s.family_ = Family::Hyperexponential;
    s.weights_ = std::move(weights);
    s.rates_ = std::move(rates);
    return s;
}

double ServiceDistribution::moment(int l) const {
    switch (family_) {
    case Family::Deterministic:
        return std::pow(d_, l);
    case Family::Exponential:
    case Family::Erlang: {
        double v = 1;
        for (int i = 0; i < l; ++i) v *= double(k_ + i) / rates_[0];
        return v;
    }
    case Family::Hyperexponential: {
        double fact = std::tgamma(l + 1.0), v = 0;
        for (std::size_t m = 0; m < rates_.size(); ++m) v += weights_[m] * fact / std::pow(rates_[m], l);
        return v;
    }
    }
    return 0;
}

double ServiceDistribution::abscissa() const {
    if (family_ == Family::Deterministic) return INFINITY;
    return *std::min_element(rates_.begin(), rates_.end());
}

double ServiceDistribution::lst(double s) const {
    if (!(s > -abscissa()))
        throw DomainError("service transform not analytic at s = " + std::to_string(s));
    switch (family_) {
    case Family::Deterministic:
        return std::exp(-s * d_);
    case Family::Exponential:
        return rates_[0] / (rates_[0] + s);
    case Family::Erlang:
        return std::pow(rates_[0] / (rates_[0] + s), k_);
    case Family::Hyperexponential: {
        double v = 0;
        for (std::size_t m = 0; m < rates_.size(); ++m) v += weights_[m] * rates_[m] / (rates_[m] + s);
        return v;
    }
    }
    return 0;
}

double ServiceDistribution::lst_derivative(double s) const {
    if (!(s > -abscissa()))
        throw DomainError("service transform not analytic at s = " + std::to_string(s));
    switch (family_) {
    case Family::Deterministic:
        return -d_ * std::exp(-s * d_);
    case Family::Exponential:
    case Family::Erlang: {
        double mu = rates_[0];
        return -k_ * std::pow(mu, k_) / std::pow(mu + s, k_ + 1);
    }
    case Family::Hyperexponential: {
        double v = 0;
        for (std::size_t m = 0; m < rates_.size(); ++m) v -= weights_[m] * rates_[m] / ((rates_[m] + s) * (rates_[m] + s));
        return v;
    }
    }
    return 0;
}

ServiceDistribution ServiceDistribution::scaled_to_mean(double m) const {
    require(m > 0, "target mean must be > 0");
    double f = m / mean();
    ServiceDistribution s = *this;
    s.d_ *= f;
    for (double& r : s.rates_) r /= f;
    return s;
}

double batch_pgf(const BatchDistribution& batch, double z) { return batch.pgf(z); }

double lst(const ServiceDistribution& service, double s) { return service.lst(s); }

double arrivals_pgf(const ServiceDistribution& service, const BatchDistribution& batch, double lambda, double z) {
    return service.lst(lambda - lambda * batch.pgf(z));
}

CoeffSeq compound_poisson_pmf(const BatchDistribution& batch, double rate_time, std::size_t n_max) {
    require(rate_time >= 0 && std::isfinite(rate_time), "compound Poisson mean must be >= 0");
    // e^{-x} underflows past ~745; halve the horizon and square back up.
    int halvings = 0;
    double x = rate_time;
    while (x > 500) {
        x /= 2;
        ++halvings;
    }
    std::vector<double> p(n_max + 1, 0.0), jr(n_max + 1, 0.0);
    p[0] = std::exp(-x);
    if (batch.is_geometric() && n_max > 0) {
        double q = batch.q(), A = 0, T = 0;
        for (std::size_t n = 1; n <= n_max; ++n) {
            A = q * A + (1 - q) * p[n - 1];
            T = q * T + A;
            p[n] = x / double(n) * T;
        }
    } else {
        std::size_t K = batch.support_max();
        for (std::size_t n = 1; n <= n_max; ++n) {
            double s = 0;
            std::size_t jm = std::min(n, K);
            for (std::size_t j = 1; j <= jm; ++j) s += double(j) * batch.prob(j) * p[n - j];
            p[n] = x / double(n) * s;
        }
    }
    for (int h = 0; h < halvings; ++h) p = truncated_convolution(p, p);
    return p;
}

CoeffSeq arrivals_per_service_coeffs(const ServiceDistribution& service, const BatchDistribution& batch,
                                     double lambda, std::size_t n_max) {
    require(lambda > 0 && std::isfinite(lambda), "arrival rate must be > 0");
    switch (service.family()) {
    case Family::Deterministic:
        return compound_poisson_pmf(batch, lambda * service.d(), n_max);
    case Family::Exponential:
        return exponential_stage(batch, lambda, service.rates()[0], n_max);
    case Family::Erlang: {
        auto e = exponential_stage(batch, lambda, service.rates()[0], n_max);
        auto f = e;
        for (int i = 1; i < service.k(); ++i) f = truncated_convolution(f, e);
        return f;
    }
    case Family::Hyperexponential: {
        std::vector<double> f(n_max + 1, 0.0);
        for (std::size_t m = 0; m < service.rates().size(); ++m) {
            auto e = exponential_stage(batch, lambda, service.rates()[m], n_max);
            for (std::size_t i = 0; i <= n_max; ++i) f[i] += service.weights()[m] * e[i];
        }
        return f;
    }
    }
    return {};
}

CoeffSeq arrivals_per_service_coeffs_adaptive(const ServiceDistribution& service, const BatchDistribution& batch,
                                              double lambda, double tol, std::size_t n_cap) {
    std::size_t n = 64;
    for (;;) {
        auto f = arrivals_per_service_coeffs(service, batch, lambda, n);
        double mass = 0;
        for (std::size_t i = f.size(); i-- > 0;) mass += f[i];
        if (1 - mass < tol || n >= n_cap) return f;
        n = std::min(2 * n, n_cap);
    }
}

} // namespace dam
