#include "expdyn/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "expdyn/errors.hpp"

namespace expdyn {

namespace {

constexpr double kPi = std::numbers::pi;

// e^u - 1 without cancellation for small u: the real part is
// expm1(a) cos b - 2 sin^2(b/2), the imaginary part (expm1(a) + 1) sin b.
std::complex<double> expm1c(std::complex<double> u) {
    const double em = std::expm1(u.real());
    const double s = std::sin(0.5 * u.imag());
    return {em * std::cos(u.imag()) - 2.0 * s * s, (em + 1.0) * std::sin(u.imag())};
}

double arg_in_turn(std::complex<double> z) {
    double a = std::arg(z);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

}  // namespace

bool in_cone(std::complex<double> z, double theta) {
    if (!(theta > 0.0 && theta < kPi / 2.0)) throw InvalidParameter("theta must lie in (0, pi/2)");
    if (z == std::complex<double>(0.0, 0.0)) throw DomainError("argument of 0 is undefined");
    const double a = arg_in_turn(z);
    return a > kPi / 2.0 + theta && a < 1.5 * kPi - theta;
}

std::complex<double> inverted_map(std::complex<double> w) {
    if (w == std::complex<double>(0.0, 0.0)) throw DomainError("inverted map undefined at 0");
    const std::complex<double> e = expm1c(1.0 / w);
    if (e == std::complex<double>(0.0, 0.0)) throw DomainError("pole of the inverted map");
    return 1.0 / e;
}

SandwichCheck sandwich_check(double theta, double r, std::uint64_t samples) {
    if (!(theta > 0.0 && theta < kPi / 2.0)) throw InvalidParameter("theta must lie in (0, pi/2)");
    if (!(r > 0.0)) throw InvalidParameter("r must be positive");
    SandwichCheck sc;
    sc.r0 = 1.0 / r;
    sc.min_lower_margin = std::numeric_limits<double>::infinity();
    sc.min_upper_margin = std::numeric_limits<double>::infinity();
    sc.invariant = true;

    const double lo = kPi / 2.0 + theta, hi = 1.5 * kPi - theta;
    const double gain_floor = std::sin(theta / 2.0);
    const auto g = static_cast<std::uint64_t>(
        std::max(2.0, std::sqrt(static_cast<double>(samples))));
    for (std::uint64_t ir = 0; ir < g; ++ir) {
        const double rho = sc.r0 * (1.0 + static_cast<double>(ir + 1) / g);  // (1/r, 2/r]
        for (std::uint64_t ia = 0; ia <= g; ++ia) {
            const double a = lo + (hi - lo) * ia / g;
            const std::complex<double> w = std::polar(rho, a);
            const std::complex<double> gw = inverted_map(w);
            const double gain = std::abs(gw) - rho;
            sc.min_lower_margin = std::min(sc.min_lower_margin, gain - gain_floor);
            sc.min_upper_margin = std::min(sc.min_upper_margin, 3.0 - gain);
            if (!in_cone(gw, theta)) sc.invariant = false;
            ++sc.samples;
        }
    }
    sc.holds = sc.invariant && sc.min_lower_margin > 0.0 && sc.min_upper_margin > 0.0;
    return sc;
}

double probe_inversion_radius(double theta, std::uint64_t samples) {
    for (double r = 1.0; r >= 0x1p-20; r *= 0.5)
        if (sandwich_check(theta, r, samples).holds) return r;
    throw DomainError("no inversion radius down to 2^-20 passes the sandwich");
}

RateBounds rate_check(std::complex<double> z0, double theta, std::uint64_t N, double slack) {
    if (!(theta > 0.0 && theta < kPi / 2.0)) throw InvalidParameter("theta must lie in (0, pi/2)");
    if (N < 2) throw InvalidParameter("need N >= 2");
    RateBounds rb;
    rb.lo = std::numeric_limits<double>::infinity();
    rb.hi = 0.0;
    std::complex<double> z = z0;
    for (std::uint64_t n = 1; n <= N; ++n) {
        z = expm1c(z);
        if (z == std::complex<double>(0.0, 0.0) || !in_cone(z, theta))
            throw DomainError("orbit left the cone at step " + std::to_string(n));
        if (n >= N / 2) {
            const double v = static_cast<double>(n) * std::abs(z);
            rb.lo = std::min(rb.lo, v);
            rb.hi = std::max(rb.hi, v);
        }
    }
    rb.contained = rb.lo > 1.0 / 3.0 - slack && rb.hi < 1.0 / std::sin(theta / 2.0) + slack;
    return rb;
}

ConeExit cone_exit_time(std::complex<double> z0, double p, double theta,
                        std::uint64_t start_index, std::uint64_t max_iter) {
    if (start_index == 0) throw InvalidParameter("start_index must be positive");
    const bool autonomous = std::isinf(p) && p > 0.0;
    if (!autonomous && !(p < 2.0)) throw InvalidParameter("decay exponent must satisfy p < 2");
    ConeExit ce;
    std::complex<double> z = z0;
    for (std::uint64_t k = 1; k <= max_iter; ++k) {
        const auto n = static_cast<double>(start_index + k - 1);
        const double bump = autonomous ? 0.0 : 1.0 / std::pow(n, p);
        z = expm1c(z) + bump;
        const bool blown = !std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
                           z.real() > 700.0 || z == std::complex<double>(0.0, 0.0);
        if (blown || !in_cone(z, theta)) {
            ce.exit_step = k;
            ce.final_modulus = std::abs(z);
            return ce;
        }
    }
    ce.final_modulus = std::abs(z);
    return ce;
}

std::vector<ExitRow> exit_time_scaling(std::span<const double> p_values, double theta,
                                       std::complex<double> z0, std::uint64_t start_index,
                                       std::uint64_t max_iter) {
    std::vector<ExitRow> rows;
    rows.reserve(p_values.size());
    for (const double p : p_values) {
        const auto ce = cone_exit_time(z0, p, theta, start_index, max_iter);
        rows.push_back({p, ce.exit_step, ce.final_modulus});
    }
    return rows;
}

}  // namespace expdyn
