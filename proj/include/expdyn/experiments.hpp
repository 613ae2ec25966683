#pragma once

#include <cstdint>
#include <vector>

#include "expdyn/seq.hpp"

namespace expdyn {

struct WilsonInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// 95% Wilson score interval for a binomial fraction.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

struct TrialRecord {
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    bool escaped = false;
    std::uint64_t escape_step = 0;  // trajectory position, 0 when not escaped
    // Per-trial accumulators, reduced in trial order so results do not depend
    // on the thread schedule.
    double lambda_sum = 0.0;
    std::uint64_t draws = 0;
};

struct EscapeExperiment {
    std::uint64_t trials = 0;
    std::uint64_t cap = 0;
    std::uint64_t seed = 0;
    std::uint64_t escaped = 0;
    double fraction = 0.0;
    WilsonInterval ci;
    // Sanity check: mean of every lambda drawn vs. the distribution mean,
    // required within 4 standard errors.
    double lambda_mean = 0.0;
    double expected_mean = 0.0;
    double mean_tolerance = 0.0;
    bool mean_sane = false;
    std::vector<TrialRecord> records;
};

// Fraction of trials whose orbit of 0 escapes within `cap` maps when the
// parameters are drawn uniformly from (1/e - delta, 1/e + delta).  Each trial
// uses the sub-seed derive_seed(seed, trial); delta = 0 degenerates to the
// constant sequence 1/e.  Trials are independent, so any thread count gives
// the identical report.
EscapeExperiment mc_escape_probability(double delta, std::uint64_t trials, std::uint64_t cap,
                                       std::uint64_t seed, int threads = 1);

// Same experiment with parameters drawn from a piecewise-linear CDF; the CDF
// must put positive mass above 1/e.
EscapeExperiment borel_mc(const PiecewiseLinearCdf& cdf, std::uint64_t trials,
                          std::uint64_t cap, std::uint64_t seed, int threads = 1);

// Probability that `horizon` i.i.d. trials with per-trial success probability
// p contain at least one success run of length >= run_len (exact DP).
double run_probability(std::uint64_t horizon, std::uint64_t run_len, double p = 0.25);

struct RunFrequencyExperiment {
    std::uint64_t trials = 0;
    std::uint64_t horizon = 0;
    std::uint64_t run_len = 0;
    std::uint64_t hits = 0;
    double empirical = 0.0;
    double predicted = 0.0;  // exact DP value
    double sigma = 0.0;      // binomial standard error at the predicted value
    bool within_3sigma = false;
};

// Empirical frequency of a top-quarter run of length >= run_len in uniform
// draws over (1/e - delta, 1/e + delta), checked against the exact
// success-run probability with p = 1/4.
RunFrequencyExperiment mc_run_frequency(double delta, std::uint64_t run_len,
                                        std::uint64_t horizon, std::uint64_t trials,
                                        std::uint64_t seed, int threads = 1);

}  // namespace expdyn
