#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace expdyn {

enum class SeqKind {
    Constant,
    UniformRandom,
    BorelRandom,
    PowerLaw,
    CriticalExact,
    BlockRepeat,
    AdaptiveEscape,
};

const char* to_string(SeqKind kind);

// Piecewise-linear CDF given as (x, F) knots: x strictly increasing, F
// nondecreasing from 0 to 1.  Sampling goes through the inverse CDF.
class PiecewiseLinearCdf {
public:
    explicit PiecewiseLinearCdf(std::vector<std::array<double, 2>> knots);

    double quantile(double u) const;  // u in (0,1)
    double cdf(double x) const;
    double mass_above(double x) const { return 1.0 - cdf(x); }
    double mean() const;
    double stddev() const;
    double x_min() const { return knots_.front()[0]; }
    double x_max() const { return knots_.back()[0]; }
    const std::vector<std::array<double, 2>>& knots() const { return knots_; }

private:
    std::vector<std::array<double, 2>> knots_;
};

// Configuration of the adaptive block construction.  A cloud of points sampled
// from a rectangle strictly inside {0 < Re < 1, 0 < Im < 1/2} is tracked under
// the composition; block k ends at the first index where every cloud point has
// |Im| < eps0 * 2^-k and (from block 2 on) the cloud has Re < 1 again.  At that
// index the emitted value is e^-x, which maps the restarted critical iterate x
// exactly to 1; everywhere else the value is 1/e.
struct AdaptiveConfig {
    std::complex<double> rect_lo{0.2, 0.1};
    std::complex<double> rect_hi{0.8, 0.4};
    int grid_x = 5;
    int grid_y = 5;
    int blocks = 3;
    double eps0 = 1e-3;
    std::uint64_t max_steps_per_block = 2'000'000;
};

struct AdaptiveBlock {
    std::uint64_t boundary = 0;   // index M_k of the forced-return value
    double lambda = 0.0;          // e^-x at the boundary, always > 1/e
    double critical_check = 0.0;  // lambda * e^x, equals 1 to rounding
    double eps = 0.0;             // tolerance eps0 * 2^-k used for this block
    double min_angle = 0.0;       // min |arg(z - 1)| over the spiked cloud
};

struct AdaptiveConstructionState {
    AdaptiveConfig config;
    std::vector<AdaptiveBlock> blocks;
    std::vector<std::complex<double>> cloud;  // cloud right after the last boundary map
    double critical_value = 0.0;              // restarted critical iterate (0 after a boundary)
    std::uint64_t steps = 0;                  // total indices constructed (= last boundary)
};

// Runs the construction; throws ConstructionFailure if the cloud leaves the
// tracked region or a block exceeds its step budget.
AdaptiveConstructionState build_adaptive_sequence(const AdaptiveConfig& config);

// A deterministic map from index n >= start_index() to a parameter value
// lambda_n > 0.  query is pure: equal (generator, n) always give the same bits,
// independent of call order, so orbits can be evaluated from any thread.
class ParameterSequence {
public:
    static ParameterSequence constant(double lambda);
    // Uniform on (1/e - delta, 1/e + delta), counter-based draws.
    static ParameterSequence uniform_random(double delta, std::uint64_t seed);
    // Inverse-CDF sampling of a user distribution, counter-based draws.
    static ParameterSequence borel_random(PiecewiseLinearCdf cdf, std::uint64_t seed);
    // 1/e + c / n^p.
    static ParameterSequence power_law(double p, double c);
    // (1/e) e^(1/(n-1)) (1 - 1/n) for n >= 2: the composition of the first n
    // maps sends 0 exactly to 1 - 1/n (composition seeded with value 0 at
    // index 1, i.e. orbits start at z0 = 0 with start offset 1).
    static ParameterSequence critical_exact();
    // 1/e + 1/n on the n-th block of 48 n consecutive indices.
    static ParameterSequence block_repeat();
    static ParameterSequence adaptive_escape(const AdaptiveConfig& config);
    static ParameterSequence adaptive_escape(AdaptiveConstructionState state);

    double query(std::uint64_t n) const;
    SeqKind kind() const { return kind_; }
    // Smallest defined index (2 for the critical tangent sequence, else 1).
    std::uint64_t start_index() const;
    // AdaptiveEscape only.
    const AdaptiveConstructionState& adaptive_state() const;

private:
    ParameterSequence() = default;

    SeqKind kind_ = SeqKind::Constant;
    double a_ = 0.0;  // constant: lambda; uniform: delta; power law: p
    double b_ = 0.0;  // power law: c
    std::uint64_t seed_ = 0;
    std::shared_ptr<const PiecewiseLinearCdf> cdf_;
    std::shared_ptr<const AdaptiveConstructionState> adaptive_;
};

}  // namespace expdyn
