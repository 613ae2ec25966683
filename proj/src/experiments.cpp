#include "expdyn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "expdyn/constants.hpp"
#include "expdyn/errors.hpp"
#include "expdyn/rng.hpp"

namespace expdyn {

namespace {

constexpr double kZ95 = 1.959963984540054;

// One escape trial: the real orbit of 0 with check-before-map positions, so
// escape_step matches the complex-orbit convention.  draw(k) supplies the k-th
// parameter.
template <typename Draw>
TrialRecord escape_trial(std::uint64_t trial, std::uint64_t sub_seed, std::uint64_t cap,
                         Draw&& draw) {
    TrialRecord rec;
    rec.trial = trial;
    rec.seed = sub_seed;
    double x = 0.0;
    for (std::uint64_t k = 1; k <= cap + 1; ++k) {
        if (x > 50.0) {
            rec.escaped = true;
            rec.escape_step = k;
            return rec;
        }
        if (k == cap + 1) break;
        const double lambda = draw(k);
        rec.lambda_sum += lambda;
        ++rec.draws;
        x = lambda * std::exp(x);
    }
    return rec;
}

template <typename MakeTrial>
std::vector<TrialRecord> run_trials(std::uint64_t trials, int threads, MakeTrial&& make_trial) {
    if (threads < 1) throw InvalidParameter("threads must be at least 1");
    std::vector<TrialRecord> records(trials);
    if (threads == 1 || trials < 2) {
        for (std::uint64_t t = 0; t < trials; ++t) records[t] = make_trial(t);
        return records;
    }
    const auto nt = std::min<std::uint64_t>(threads, trials);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::uint64_t w = 0; w < nt; ++w) {
        pool.emplace_back([&, w] {
            for (std::uint64_t t = w; t < trials; t += nt) records[t] = make_trial(t);
        });
    }
    for (auto& th : pool) th.join();
    return records;
}

// Reduction runs over the finished records in trial order, so sums are
// bit-identical for every thread count.
EscapeExperiment reduce_escape(std::uint64_t trials, std::uint64_t cap, std::uint64_t seed,
                               double expected_mean, double draw_stddev,
                               std::vector<TrialRecord> records) {
    EscapeExperiment ex;
    ex.trials = trials;
    ex.cap = cap;
    ex.seed = seed;
    double lambda_sum = 0.0;
    std::uint64_t draws = 0;
    for (const auto& rec : records) {
        ex.escaped += rec.escaped;
        lambda_sum += rec.lambda_sum;
        draws += rec.draws;
    }
    ex.fraction = trials ? static_cast<double>(ex.escaped) / static_cast<double>(trials) : 0.0;
    ex.ci = wilson_interval(ex.escaped, trials);
    ex.lambda_mean = draws ? lambda_sum / static_cast<double>(draws) : expected_mean;
    ex.expected_mean = expected_mean;
    // The 1e-12 term absorbs summation rounding when the draws are constant.
    ex.mean_tolerance =
        4.0 * draw_stddev / std::sqrt(static_cast<double>(std::max<std::uint64_t>(draws, 1))) +
        1e-12;
    ex.mean_sane = std::abs(ex.lambda_mean - ex.expected_mean) <= ex.mean_tolerance;
    ex.records = std::move(records);
    return ex;
}

}  // namespace

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) throw InvalidParameter("need at least one trial");
    if (successes > trials) throw InvalidParameter("successes exceed trials");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half =
        kZ95 * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

EscapeExperiment mc_escape_probability(double delta, std::uint64_t trials, std::uint64_t cap,
                                       std::uint64_t seed, int threads) {
    if (!(delta >= 0.0 && delta < kInvE)) throw InvalidParameter("delta must lie in [0, 1/e)");
    if (trials == 0) throw InvalidParameter("need at least one trial");
    auto records = run_trials(trials, threads, [&](std::uint64_t t) {
        const std::uint64_t sub = derive_seed(seed, t);
        return escape_trial(t, sub, cap, [&](std::uint64_t k) {
            return delta == 0.0 ? kInvE : kInvE - delta + 2.0 * delta * uniform_draw(sub, k);
        });
    });
    const double draw_sd = delta / std::sqrt(3.0);
    return reduce_escape(trials, cap, seed, kInvE, draw_sd, std::move(records));
}

EscapeExperiment borel_mc(const PiecewiseLinearCdf& cdf, std::uint64_t trials, std::uint64_t cap,
                          std::uint64_t seed, int threads) {
    if (trials == 0) throw InvalidParameter("need at least one trial");
    if (!(cdf.mass_above(kInvE) > 0.0))
        throw InvalidParameter("distribution needs positive mass above 1/e");
    auto records = run_trials(trials, threads, [&](std::uint64_t t) {
        const std::uint64_t sub = derive_seed(seed, t);
        return escape_trial(t, sub, cap,
                            [&](std::uint64_t k) { return cdf.quantile(uniform_draw(sub, k)); });
    });
    return reduce_escape(trials, cap, seed, cdf.mean(), cdf.stddev(), std::move(records));
}

double run_probability(std::uint64_t horizon, std::uint64_t run_len, double p) {
    if (run_len == 0) throw InvalidParameter("run_len must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("p must lie in [0, 1]");
    // States track the current success-run length 0..run_len-1; reaching
    // run_len absorbs.
    std::vector<double> st(run_len, 0.0), next(run_len, 0.0);
    st[0] = 1.0;
    double absorbed = 0.0;
    for (std::uint64_t step = 0; step < horizon; ++step) {
        double total = 0.0;
        for (const double v : st) total += v;
        std::fill(next.begin(), next.end(), 0.0);
        next[0] = total * (1.0 - p);
        for (std::uint64_t j = 0; j + 1 < run_len; ++j) next[j + 1] = st[j] * p;
        absorbed += st[run_len - 1] * p;
        std::swap(st, next);
    }
    return absorbed;
}

RunFrequencyExperiment mc_run_frequency(double delta, std::uint64_t run_len,
                                        std::uint64_t horizon, std::uint64_t trials,
                                        std::uint64_t seed, int threads) {
    if (!(delta > 0.0 && delta < kInvE)) throw InvalidParameter("delta must lie in (0, 1/e)");
    if (trials == 0) throw InvalidParameter("need at least one trial");
    if (run_len == 0) throw InvalidParameter("run_len must be positive");
    const double threshold = kInvE + 0.5 * delta;
    auto records = run_trials(trials, threads, [&](std::uint64_t t) {
        const std::uint64_t sub = derive_seed(seed, t);
        TrialRecord rec;
        rec.trial = t;
        rec.seed = sub;
        std::uint64_t run = 0;
        for (std::uint64_t k = 1; k <= horizon; ++k) {
            const double lambda = kInvE - delta + 2.0 * delta * uniform_draw(sub, k);
            run = lambda > threshold ? run + 1 : 0;
            if (run >= run_len) {
                rec.escaped = true;  // hit, reusing the escape slot
                rec.escape_step = k;
                break;
            }
        }
        return rec;
    });
    RunFrequencyExperiment ex;
    ex.trials = trials;
    ex.horizon = horizon;
    ex.run_len = run_len;
    for (const auto& rec : records) ex.hits += rec.escaped;
    ex.empirical = static_cast<double>(ex.hits) / static_cast<double>(trials);
    ex.predicted = run_probability(horizon, run_len, 0.25);
    ex.sigma = std::sqrt(ex.predicted * (1.0 - ex.predicted) / static_cast<double>(trials));
    ex.within_3sigma = std::abs(ex.empirical - ex.predicted) <= 3.0 * ex.sigma;
    return ex;
}

}  // namespace expdyn
