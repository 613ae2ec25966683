#include "expdyn/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "expdyn/errors.hpp"

namespace expdyn {

double StripGeometry::eps_n(std::uint64_t n) {
    if (n == 0) throw InvalidParameter("substrip index must be positive");
    return 1.0 / std::sqrt(static_cast<double>(n));
}

bool StripGeometry::in_upper_strip(std::complex<double> z) {
    return z.imag() > 0.0 && z.imag() < std::numbers::pi;
}

bool StripGeometry::in_P(std::complex<double> z) {
    return z.real() > kStripReLo && z.real() < kStripReHi && z.imag() > kStripImLo &&
           z.imag() < kStripImHi;
}

bool StripGeometry::in_substrip(std::complex<double> z, std::uint64_t n) {
    return z.real() > kStripReLo && z.real() < kStripReHi && z.imag() > 0.0 &&
           z.imag() < eps_n(n);
}

double strip_density(std::complex<double> z) {
    if (!StripGeometry::in_upper_strip(z)) throw DomainError("point outside the strip");
    return 1.0 / std::sin(z.imag());
}

double hyp_derivative(double lambda, std::complex<double> z) {
    if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
    if (!StripGeometry::in_upper_strip(z)) throw DomainError("point outside the strip");
    const std::complex<double> f = lambda * std::exp(z);
    if (!StripGeometry::in_upper_strip(f)) throw DomainError("image outside the strip");
    const double a = f.imag() / std::sin(f.imag());
    const double b = lambda * std::exp(z.real()) * strip_density(f) / strip_density(z);
    if (std::abs(a - b) > 1e-10 * std::max(1.0, std::abs(a)))
        throw DomainError("hyperbolic derivative cross-check failed");
    return a;
}

std::complex<double> inverse_branch(double lambda, std::complex<double> z) {
    if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
    if (!StripGeometry::in_upper_strip(z)) throw DomainError("point outside the strip");
    return std::log(z) - std::log(lambda);
}

double strip_distance(std::complex<double> a, std::complex<double> b) {
    if (!StripGeometry::in_upper_strip(a) || !StripGeometry::in_upper_strip(b))
        throw DomainError("point outside the strip");
    const std::complex<double> ea = std::exp(a), eb = std::exp(b);
    return 2.0 * std::asinh(std::abs(ea - eb) / (2.0 * std::sqrt(ea.imag() * eb.imag())));
}

double contraction_factor(double lambda, std::span<const std::complex<double>> cloud) {
    if (cloud.size() < 2) throw InvalidParameter("need at least two cloud points");
    double worst = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto gi = inverse_branch(lambda, cloud[i]);
        for (std::size_t j = i + 1; j < cloud.size(); ++j) {
            const double den = strip_distance(cloud[i], cloud[j]);
            if (den == 0.0) continue;
            worst = std::max(worst, strip_distance(gi, inverse_branch(lambda, cloud[j])) / den);
        }
    }
    return worst;
}

namespace {

std::uint64_t grid_side(std::uint64_t samples) {
    const auto g = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(samples)));
    return std::max<std::uint64_t>(2, g);
}

}  // namespace

PushCheck strip_push_check(std::uint64_t n, std::uint64_t samples) {
    if (n == 0) throw InvalidParameter("n must be positive");
    const double eps = StripGeometry::eps_n(n);
    const double budget = 1.0 / (6.0 * static_cast<double>(n));
    const double scale = 1.0 + 1.0 / static_cast<double>(n);
    const std::uint64_t g = grid_side(samples);
    PushCheck pc;
    pc.samples = g * g;
    pc.min_margin = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < g; ++i) {
        const double x = kStripReLo + (kStripReHi - kStripReLo) * (i + 0.5) / g;
        for (std::uint64_t j = 0; j < g; ++j) {
            const double y = eps * (j + 0.5) / g;
            pc.min_margin =
                std::min(pc.min_margin, scale * std::exp(x - 1.0) * std::cos(y) - x - budget);
        }
    }
    return pc;
}

std::uint64_t smallest_push_n(std::uint64_t n_max, std::uint64_t samples) {
    for (std::uint64_t n = 1; n <= n_max; ++n)
        if (strip_push_check(n, samples).min_margin >= 0.0) return n;
    throw ConstructionFailure(n_max, "no n up to n_max passes the push check");
}

namespace {

// Samples image points w in P \ S_n on a midpoint grid and hands each
// (preimage, w) pair to the visitor.
template <typename Fn>
void for_each_annulus_sample(std::uint64_t n, std::uint64_t samples, Fn&& visit) {
    if (n < 5) throw InvalidParameter("P \\ S_n needs n >= 5");
    const double eps = StripGeometry::eps_n(n);
    const double lambda = kInvE + 1.0 / static_cast<double>(n);
    const std::uint64_t g = grid_side(samples);
    for (std::uint64_t i = 0; i < g; ++i) {
        const double x = kStripReLo + (kStripReHi - kStripReLo) * (i + 0.5) / g;
        for (std::uint64_t j = 0; j < g; ++j) {
            const double y = eps + (kStripImHi - eps) * (j + 0.5) / g;
            const std::complex<double> w(x, y);
            visit(lambda, inverse_branch(lambda, w), w);
        }
    }
}

}  // namespace

ExpansionCheck expansion_bound_check(std::uint64_t n, std::uint64_t samples) {
    ExpansionCheck ec;
    ec.bound = 1.0 + 1.0 / (7.0 * static_cast<double>(n));
    ec.min_value = std::numeric_limits<double>::infinity();
    for_each_annulus_sample(n, samples,
                            [&](double lambda, std::complex<double> z, std::complex<double>) {
                                ec.min_value = std::min(ec.min_value, hyp_derivative(lambda, z));
                            });
    return ec;
}

std::uint64_t smallest_expansion_n(std::uint64_t n_max, std::uint64_t samples) {
    for (std::uint64_t n = 5; n <= n_max; ++n) {
        const auto ec = expansion_bound_check(n, samples);
        if (ec.min_value >= ec.bound) return n;
    }
    throw ConstructionFailure(n_max, "no n up to n_max passes the expansion bound");
}

AngleCheck small_angle_inequality_check(std::uint64_t samples) {
    const std::uint64_t g = grid_side(samples);
    AngleCheck ac;
    ac.samples = g * g;
    ac.min_margin = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < g; ++i) {
        const double x = 0.1 * (i + 0.5) / g;
        for (std::uint64_t j = 0; j < g; ++j) {
            const double y = 0.1 * (j + 0.5) / g;
            ac.min_margin = std::min(ac.min_margin,
                                     x * std::sin(y) - y * (std::cos(y) - std::exp(-x)));
        }
    }
    return ac;
}

double koebe_lower_bound(double r, double log_deriv) {
    if (!(r > 0.0)) throw InvalidParameter("radius must be positive");
    return std::log(r / 4.0) + log_deriv;
}

bool koebe_contradicts_bounded_image(double log_radius) {
    return log_radius > std::log(kStripDiam);
}

ProductCheck product_inequality_check(std::uint64_t N) {
    if (N == 0) throw InvalidParameter("need N >= 1");
    ProductCheck pc;
    pc.min_margin = std::numeric_limits<double>::infinity();
    double log_prod = 0.0;
    for (std::uint64_t n = 1; n <= N; ++n) {
        log_prod += 7.0 * std::log1p(1.0 / (7.0 * static_cast<double>(n)));
        const double margin = log_prod - std::log(static_cast<double>(n + 1));
        if (margin < pc.min_margin) pc.min_margin = margin;
        if (margin <= 0.0 && pc.first_violation == 0) pc.first_violation = n;
    }
    pc.holds = pc.first_violation == 0;
    return pc;
}

double strip_contraction_constant(std::uint64_t n, std::uint64_t samples) {
    double inf = std::numeric_limits<double>::infinity();
    for_each_annulus_sample(n, samples,
                            [&](double, std::complex<double> z, std::complex<double> w) {
                                inf = std::min(inf, std::sin(w.imag()) / std::sin(z.imag()));
                            });
    return 0.9 * inf;
}

double estimate_c_prime(std::uint64_t n_max, std::uint64_t samples) {
    if (n_max < 5) throw InvalidParameter("need n_max >= 5");
    std::vector<std::uint64_t> probes{5};
    for (std::uint64_t n = 5; n < n_max;) {
        n = std::max(n + 1, (n * 3) / 2);
        probes.push_back(std::min(n, n_max));
    }
    if (probes.back() != n_max) probes.push_back(n_max);
    double c_prime = std::numeric_limits<double>::infinity();
    for (const auto n : probes)
        c_prime = std::min(c_prime, strip_contraction_constant(n, samples) *
                                        std::sqrt(static_cast<double>(n)));
    return c_prime;
}

std::vector<double> delta_schedule(std::uint64_t N, double c_prime) {
    if (N == 0) throw InvalidParameter("need N >= 1");
    if (!(c_prime > 0.0)) throw InvalidParameter("c_prime must be positive");
    std::vector<double> delta(N + 1, 0.0);
    double log_prod8 = 0.0;
    for (std::uint64_t n = 1; n <= N; ++n) {
        log_prod8 += 8.0 * std::log1p(1.0 / (7.0 * static_cast<double>(n)));
        delta[n] = 8.0 * kStripDiam * std::sqrt(static_cast<double>(n)) /
                   (c_prime * std::exp(log_prod8));
    }
    return delta;
}

}  // namespace expdyn
