#include "expdyn/seq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "expdyn/constants.hpp"
#include "expdyn/errors.hpp"
#include "expdyn/rng.hpp"

namespace expdyn {

const char* to_string(SeqKind kind) {
    switch (kind) {
        case SeqKind::Constant: return "constant";
        case SeqKind::UniformRandom: return "uniform_random";
        case SeqKind::BorelRandom: return "borel_random";
        case SeqKind::PowerLaw: return "power_law";
        case SeqKind::CriticalExact: return "critical_exact";
        case SeqKind::BlockRepeat: return "block_repeat";
        case SeqKind::AdaptiveEscape: return "adaptive_escape";
    }
    return "unknown";
}

PiecewiseLinearCdf::PiecewiseLinearCdf(std::vector<std::array<double, 2>> knots)
    : knots_(std::move(knots)) {
    if (knots_.size() < 2) throw InvalidParameter("cdf needs at least two knots");
    if (!(knots_.front()[1] == 0.0) || !(knots_.back()[1] == 1.0))
        throw InvalidParameter("cdf must start at F=0 and end at F=1");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i][0]) || !std::isfinite(knots_[i][1]))
            throw InvalidParameter("cdf knots must be finite");
        if (i > 0) {
            if (!(knots_[i][0] > knots_[i - 1][0]))
                throw InvalidParameter("cdf x-values must be strictly increasing");
            if (knots_[i][1] < knots_[i - 1][1])
                throw InvalidParameter("cdf values must be nondecreasing");
        }
    }
    if (!(knots_.front()[0] > 0.0)) throw InvalidParameter("cdf support must be positive");
}

double PiecewiseLinearCdf::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile argument must lie in (0,1)");
    auto it = std::lower_bound(knots_.begin(), knots_.end(), u,
                               [](const std::array<double, 2>& k, double v) { return k[1] < v; });
    if (it == knots_.begin()) return knots_.front()[0];
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (hi[1] == lo[1]) return hi[0];
    const double t = (u - lo[1]) / (hi[1] - lo[1]);
    return lo[0] + t * (hi[0] - lo[0]);
}

double PiecewiseLinearCdf::cdf(double x) const {
    if (x <= knots_.front()[0]) return 0.0;
    if (x >= knots_.back()[0]) return 1.0;
    auto it = std::lower_bound(knots_.begin(), knots_.end(), x,
                               [](const std::array<double, 2>& k, double v) { return k[0] < v; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (x - lo[0]) / (hi[0] - lo[0]);
    return lo[1] + t * (hi[1] - lo[1]);
}

double PiecewiseLinearCdf::mean() const {
    double m = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const double df = knots_[i][1] - knots_[i - 1][1];
        m += df * 0.5 * (knots_[i][0] + knots_[i - 1][0]);
    }
    return m;
}

double PiecewiseLinearCdf::stddev() const {
    const double m = mean();
    double m2 = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const double df = knots_[i][1] - knots_[i - 1][1];
        const double a = knots_[i - 1][0], b = knots_[i][0];
        m2 += df * (a * a + a * b + b * b) / 3.0;
    }
    return std::sqrt(std::max(0.0, m2 - m * m));
}

namespace {

// Index k lies in block n iff 24 (n-1) n < k <= 24 n (n+1).
std::uint64_t block_of(std::uint64_t k) {
    double guess = 0.5 * (std::sqrt(1.0 + static_cast<double>(k) / 6.0) - 1.0);
    std::uint64_t n = guess < 1.0 ? 1 : static_cast<std::uint64_t>(guess);
    while (24 * n * (n + 1) < k) ++n;
    while (n > 1 && 24 * (n - 1) * n >= k) --n;
    return n;
}

bool cloud_in_tracked_region(std::complex<double> z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag()) && z.imag() > 0.0 &&
           z.imag() < std::numbers::pi && z.real() <= 5.0;
}

}  // namespace

AdaptiveConstructionState build_adaptive_sequence(const AdaptiveConfig& config) {
    const auto lo = config.rect_lo, hi = config.rect_hi;
    if (!(lo.real() > 0.0 && hi.real() < 1.0 && lo.imag() > 0.0 && hi.imag() < 0.5 &&
          lo.real() <= hi.real() && lo.imag() <= hi.imag()))
        throw InvalidParameter(
            "tracked rectangle must lie strictly inside {0 < Re < 1, 0 < Im < 1/2}");
    if (config.grid_x < 2 || config.grid_y < 2)
        throw InvalidParameter("cloud grid needs at least 2 points per axis");
    if (config.blocks < 1) throw InvalidParameter("need at least one block");
    if (!(config.eps0 > 0.0)) throw InvalidParameter("eps0 must be positive");

    AdaptiveConstructionState st;
    st.config = config;
    st.cloud.reserve(static_cast<std::size_t>(config.grid_x) * config.grid_y);
    for (int i = 0; i < config.grid_x; ++i)
        for (int j = 0; j < config.grid_y; ++j)
            st.cloud.emplace_back(
                lo.real() + (hi.real() - lo.real()) * i / (config.grid_x - 1),
                lo.imag() + (hi.imag() - lo.imag()) * j / (config.grid_y - 1));

    std::uint64_t n = 0;
    std::uint64_t block_start = 0;
    for (int k = 1; k <= config.blocks; ++k) {
        const double eps = config.eps0 * std::ldexp(1.0, -k);
        for (;;) {
            ++n;
            if (n - block_start > config.max_steps_per_block)
                throw ConstructionFailure(n, "block boundary not reached within step budget");

            bool boundary = true;
            for (const auto& z : st.cloud) {
                if (!(std::abs(z.imag()) < eps) || (k > 1 && !(z.real() < 1.0))) {
                    boundary = false;
                    break;
                }
            }

            if (boundary) {
                AdaptiveBlock blk;
                blk.boundary = n;
                blk.eps = eps;
                blk.lambda = std::exp(-st.critical_value);
                blk.critical_check = blk.lambda * std::exp(st.critical_value);
                if (std::abs(blk.critical_check - 1.0) > 1e-12)
                    throw ConstructionFailure(n, "forced return missed 1");
                blk.min_angle = std::numeric_limits<double>::infinity();
                for (auto& z : st.cloud) {
                    z = blk.lambda * std::exp(z);
                    blk.min_angle = std::min(blk.min_angle, std::abs(std::arg(z - 1.0)));
                    if (!cloud_in_tracked_region(z))
                        throw ConstructionFailure(n, "cloud left the tracked region");
                }
                st.blocks.push_back(blk);
                st.critical_value = 0.0;
                block_start = n;
                break;
            }

            st.critical_value = kInvE * std::exp(st.critical_value);
            for (auto& z : st.cloud) {
                z = kInvE * std::exp(z);
                if (!cloud_in_tracked_region(z))
                    throw ConstructionFailure(n, "cloud left the tracked region");
            }
        }
    }
    st.steps = n;
    return st;
}

ParameterSequence ParameterSequence::constant(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InvalidParameter("constant lambda must be positive and finite");
    ParameterSequence s;
    s.kind_ = SeqKind::Constant;
    s.a_ = lambda;
    return s;
}

ParameterSequence ParameterSequence::uniform_random(double delta, std::uint64_t seed) {
    if (!(delta > 0.0 && delta < kInvE))
        throw InvalidParameter("uniform delta must lie in (0, 1/e)");
    ParameterSequence s;
    s.kind_ = SeqKind::UniformRandom;
    s.a_ = delta;
    s.seed_ = seed;
    return s;
}

ParameterSequence ParameterSequence::borel_random(PiecewiseLinearCdf cdf, std::uint64_t seed) {
    ParameterSequence s;
    s.kind_ = SeqKind::BorelRandom;
    s.cdf_ = std::make_shared<const PiecewiseLinearCdf>(std::move(cdf));
    s.seed_ = seed;
    return s;
}

ParameterSequence ParameterSequence::power_law(double p, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParameter("power-law c must be positive");
    if (!std::isfinite(p)) throw InvalidParameter("power-law exponent must be finite");
    ParameterSequence s;
    s.kind_ = SeqKind::PowerLaw;
    s.a_ = p;
    s.b_ = c;
    return s;
}

ParameterSequence ParameterSequence::critical_exact() {
    ParameterSequence s;
    s.kind_ = SeqKind::CriticalExact;
    return s;
}

ParameterSequence ParameterSequence::block_repeat() {
    ParameterSequence s;
    s.kind_ = SeqKind::BlockRepeat;
    return s;
}

ParameterSequence ParameterSequence::adaptive_escape(const AdaptiveConfig& config) {
    return adaptive_escape(build_adaptive_sequence(config));
}

ParameterSequence ParameterSequence::adaptive_escape(AdaptiveConstructionState state) {
    ParameterSequence s;
    s.kind_ = SeqKind::AdaptiveEscape;
    s.adaptive_ = std::make_shared<const AdaptiveConstructionState>(std::move(state));
    return s;
}

std::uint64_t ParameterSequence::start_index() const {
    return kind_ == SeqKind::CriticalExact ? 2 : 1;
}

const AdaptiveConstructionState& ParameterSequence::adaptive_state() const {
    if (!adaptive_) throw DomainError("not an adaptive sequence");
    return *adaptive_;
}

double ParameterSequence::query(std::uint64_t n) const {
    if (n < start_index()) throw UndefinedIndex(n);
    switch (kind_) {
        case SeqKind::Constant:
            return a_;
        case SeqKind::UniformRandom:
            return kInvE - a_ + 2.0 * a_ * uniform_draw(seed_, n);
        case SeqKind::BorelRandom:
            return cdf_->quantile(uniform_draw(seed_, n));
        case SeqKind::PowerLaw:
            return kInvE + b_ / std::pow(static_cast<double>(n), a_);
        case SeqKind::CriticalExact:
            return kInvE * std::exp(1.0 / static_cast<double>(n - 1)) *
                   (1.0 - 1.0 / static_cast<double>(n));
        case SeqKind::BlockRepeat:
            return kInvE + 1.0 / static_cast<double>(block_of(n));
        case SeqKind::AdaptiveEscape: {
            for (const auto& blk : adaptive_->blocks)
                if (blk.boundary == n) return blk.lambda;
            return kInvE;
        }
    }
    throw DomainError("unknown sequence kind");
}

}  // namespace expdyn
