#include "dam/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <random>
#include <string>
#include <thread>

#include "dam/errors.hpp"

namespace dam {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : eng_(splitmix64(seed)) {}
    double operator()() { return double(eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

// Ratio estimator over regeneration cycles: sum(Y)/sum(tau), delta-method error.
struct RatioStats {
    std::vector<double> sy, syy, syt;
    double st = 0, stt = 0;
    std::uint64_t n = 0;

    explicit RatioStats(std::size_t k) : sy(k), syy(k), syt(k) {}

    Estimate get(std::size_t k) const {
        if (st <= 0) return {};
        double r = sy[k] / st;
        double ss = syy[k] - 2 * r * syt[k] + r * r * stt;
        double se = n > 1 ? std::sqrt(std::max(0.0, ss) * double(n) / double(n - 1)) / st : 0.0;
        return {r, se};
    }
};

void check_inputs(const DamModel& model, std::uint64_t min_events, double warmup) {
    model.validate();
    if (!(model.rho2() < 1))
        throw StabilityError("rho2 < 1 required for a stationary simulation (rho2 = " + std::to_string(model.rho2()) + ")");
    if (min_events < 10000) throw DomainError("min_events must be >= 1e4");
    if (!(warmup >= 0 && warmup < 1)) throw DomainError("warmup fraction must lie in [0, 1)");
}

} // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
    return splitmix64(base_seed ^ splitmix64(index + 1));
}

SimulationResult simulate(const DamModel& model, std::uint64_t min_events, double warmup_fraction, std::uint64_t seed) {
    check_inputs(model, min_events, warmup_fraction);
    const std::size_t L = model.L;
    // slots: idle, B2, level > L, B1, levels 1..L, B1 start index 0..L
    const std::size_t kIdle = 0, kB2 = 1, kAbove = 2, kB1 = 3, kLevel = 4, kStart = 4 + L;
    const std::size_t K = kStart + L + 1;

    Uniform u(seed);
    auto interarrival = [&] { return -std::log1p(-u()) / model.lambda; };

    RatioStats stats(K);
    std::vector<double> cur(K, 0.0);
    std::vector<std::size_t> touched;
    double cycle_time = 0;
    double served_sum = 0, served_sq = 0;
    std::uint64_t served = 0;

    SimulationResult res;
    res.seed = seed;
    res.rng = kRngName;
    const auto warmup_events = std::uint64_t(std::ceil(warmup_fraction * double(min_events)));

    double t = 0, next_arrival = interarrival(), next_departure = INFINITY;
    std::size_t N = 0;
    int type = 0;           // 0 idle, 1 or 2 service in progress
    std::size_t start_idx = 0;
    bool collecting = false;
    std::uint64_t events = 0;

    auto add = [&](std::size_t k, double dt) {
        if (cur[k] == 0.0) touched.push_back(k);
        cur[k] += dt;
    };
    auto close_cycle = [&] {
        for (std::size_t k : touched) {
            double y = cur[k];
            stats.sy[k] += y;
            stats.syy[k] += y * y;
            stats.syt[k] += y * cycle_time;
            cur[k] = 0.0;
        }
        touched.clear();
        stats.st += cycle_time;
        stats.stt += cycle_time * cycle_time;
        stats.n += 1;
        served_sum += double(served);
        served_sq += double(served) * double(served);
        cycle_time = 0;
        served = 0;
    };
    auto start_service = [&](bool opener) {
        if (!opener && N > L) {
            type = 2;
            next_departure = t + model.service2.sample(u);
        } else {
            type = 1;
            start_idx = opener ? 0 : N;
            next_departure = t + model.service1.sample(u);
        }
    };

    for (;;) {
        bool arrival = next_arrival <= next_departure;
        double te = arrival ? next_arrival : next_departure;

        if (arrival && N == 0) {
            // regeneration point
            if (collecting) {
                close_cycle();
                if (events >= min_events) break;
            } else if (events >= warmup_events) {
                collecting = true;
            }
        }

        if (collecting) {
            double dt = te - t;
            cycle_time += dt;
            res.observed_time += dt;
            if (type == 0) {
                add(kIdle, dt);
                res.idle_time += dt;
            } else if (type == 2) {
                add(kB2, dt);
                res.b2_time += dt;
            } else {
                add(kB1, dt);
                add(kStart + start_idx, dt);
                res.b1_time += dt;
            }
            if (N > L)
                add(kAbove, dt);
            else if (N >= 1)
                add(kLevel + N - 1, dt);
        }
        t = te;
        ++events;

        if (arrival) {
            N += model.batch.sample(u());
            next_arrival = t + interarrival();
            if (type == 0) start_service(true);
        } else {
            --N;
            if (collecting) ++served;
            if (N == 0) {
                type = 0;
                next_departure = INFINITY;
            } else {
                start_service(false);
            }
        }
    }

    res.events = events;
    res.busy_cycles = stats.n;
    res.p1 = stats.get(kIdle);
    res.p2_service = stats.get(kB2);
    res.p2_level = stats.get(kAbove);
    res.b1_busy = stats.get(kB1);
    res.q.resize(L);
    for (std::size_t i = 0; i < L; ++i) res.q[i] = stats.get(kLevel + i);
    res.q_service.resize(L + 1);
    for (std::size_t i = 0; i <= L; ++i) res.q_service[i] = stats.get(kStart + i);
    double n = double(stats.n);
    double mean = served_sum / n;
    double var = n > 1 ? (served_sq - n * mean * mean) / (n - 1) : 0.0;
    res.busy_customers = {mean, std::sqrt(std::max(0.0, var) / n)};
    return res;
}

SimulationResult replicate(const DamModel& model, std::size_t n_reps, std::uint64_t base_seed,
                           std::uint64_t min_events, double warmup_fraction) {
    if (n_reps < 1) throw DomainError("n_reps must be >= 1");
    check_inputs(model, min_events, warmup_fraction);

    std::vector<SimulationResult> runs(n_reps);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < n_reps;)
            runs[i] = simulate(model, min_events, warmup_fraction, derive_seed(base_seed, i));
    };
    std::size_t nt = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n_reps);
    std::vector<std::future<void>> workers;
    for (std::size_t k = 0; k < nt; ++k) workers.push_back(std::async(std::launch::async, work));
    for (auto& w : workers) w.get();

    if (n_reps == 1) return runs[0];

    auto pool = [&](auto get) {
        double n = double(n_reps), s = 0, ss = 0;
        for (const auto& r : runs) s += get(r).value;
        double m = s / n;
        for (const auto& r : runs) ss += (get(r).value - m) * (get(r).value - m);
        return Estimate{m, std::sqrt(ss / (n - 1) / n)};
    };

    SimulationResult out;
    out.seed = base_seed;
    out.rng = kRngName;
    out.replications = n_reps;
    out.p1 = pool([](const SimulationResult& r) { return r.p1; });
    out.p2_service = pool([](const SimulationResult& r) { return r.p2_service; });
    out.p2_level = pool([](const SimulationResult& r) { return r.p2_level; });
    out.b1_busy = pool([](const SimulationResult& r) { return r.b1_busy; });
    out.busy_customers = pool([](const SimulationResult& r) { return r.busy_customers; });
    const std::size_t L = model.L;
    out.q.resize(L);
    for (std::size_t i = 0; i < L; ++i) out.q[i] = pool([i](const SimulationResult& r) { return r.q[i]; });
    out.q_service.resize(L + 1);
    for (std::size_t i = 0; i <= L; ++i)
        out.q_service[i] = pool([i](const SimulationResult& r) { return r.q_service[i]; });
    for (const auto& r : runs) {
        out.observed_time += r.observed_time;
        out.idle_time += r.idle_time;
        out.b1_time += r.b1_time;
        out.b2_time += r.b2_time;
        out.events += r.events;
        out.busy_cycles += r.busy_cycles;
    }
    return out;
}

} // namespace dam
