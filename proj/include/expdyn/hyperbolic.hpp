#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "expdyn/constants.hpp"

namespace expdyn {

// Geometry used by the expansion/contraction estimates: the horizontal strip
// S+ = {0 < Im z < pi} with hyperbolic density 1/sin(Im z), the rectangle
// P = (1/2, 3/2) x (0, 1/2), and its substrips S_n = (1/2, 3/2) x (0, 1/sqrt(n)).
// S_n sits inside P once 1/sqrt(n) <= 1/2, i.e. n >= 4.
struct StripGeometry {
    static double eps_n(std::uint64_t n);
    static bool in_upper_strip(std::complex<double> z);
    static bool in_P(std::complex<double> z);
    static bool in_substrip(std::complex<double> z, std::uint64_t n);
};

// Density 1/sin(Im z) of the hyperbolic metric of S+; domain 0 < Im z < pi.
double strip_density(std::complex<double> z);

// Hyperbolic derivative of f(z) = lambda e^z as a self-map chain on S+:
// Im(f(z)) / sin(Im f(z)).  Both this form and |f'(z)| rho(f(z)) / rho(z) are
// evaluated and cross-checked to 1e-10.  Requires z and f(z) in S+.
double hyp_derivative(double lambda, std::complex<double> z);

// Branch of log(z / lambda) with imaginary part in (0, pi): the inverse of
// lambda e^z on the upper half-plane, restricted here to z in S+.
std::complex<double> inverse_branch(double lambda, std::complex<double> z);

// Hyperbolic distance in S+, computed by pulling back through exp to the upper
// half-plane: dist(a,b) = 2 asinh(|e^a - e^b| / (2 sqrt(Im e^a Im e^b))).
double strip_distance(std::complex<double> a, std::complex<double> b);

// Worst pairwise contraction of the inverse branch over a finite cloud:
// max over z != w of dist(g z, g w) / dist(z, w).  Strictly below 1 on any
// cloud compactly inside S+ (Schwarz-Pick); the bound degrades toward 1 as the
// cloud approaches the strip boundary.  Horizontal-translation invariance of
// the metric makes the result independent of lambda.
double contraction_factor(double lambda, std::span<const std::complex<double>> cloud);

struct PushCheck {
    double min_margin = 0.0;   // min over samples of Re f(z) - Re z - 1/(6n)
    std::uint64_t samples = 0;
};

// Samples z in S_n and measures the Re gain of f(z) = (1 + 1/n) e^(z-1)
// against the per-step budget 1/(6n).  The block maps 1/e + 1/n dominate this
// f, so a nonnegative margin certifies them too.
PushCheck strip_push_check(std::uint64_t n, std::uint64_t samples);

// Smallest n in [1, n_max] whose sampled push margin is nonnegative.
std::uint64_t smallest_push_n(std::uint64_t n_max, std::uint64_t samples);

struct ExpansionCheck {
    double min_value = 0.0;  // min hyperbolic derivative over sampled preimages
    double bound = 0.0;      // 1 + 1/(7n)
};

// Samples points whose image under lambda_n = 1/e + 1/n lands in P \ S_n and
// takes the min hyperbolic derivative there; compares against 1 + 1/(7n).
// Requires n >= 5 so that P \ S_n is nonempty.
ExpansionCheck expansion_bound_check(std::uint64_t n, std::uint64_t samples);

// Smallest n in [5, n_max] whose sampled min derivative clears 1 + 1/(7n);
// the bound is asymptotic ("sufficiently large n"), so the threshold is
// measured, not assumed.
std::uint64_t smallest_expansion_n(std::uint64_t n_max, std::uint64_t samples);

struct AngleCheck {
    double min_margin = 0.0;  // min of x sin y - y (cos y - e^-x)
    std::uint64_t samples = 0;
};

// Samples the small-angle inequality y (cos y - e^-x) < x sin y on the square
// (0, 0.1)^2; the returned margin reports the observed validity, nothing more.
AngleCheck small_angle_inequality_check(std::uint64_t samples);

// Log-domain Koebe 1/4 radius: a univalent map of the unit disk scaled to a
// disk of radius r with |F'(center)| = exp(log_deriv) covers a disk of radius
// exp(ln(r/4) + log_deriv) around the image center.
double koebe_lower_bound(double r, double log_deriv);

// True when a log-radius certifies an image too large to fit inside P, i.e.
// exceeds ln(diam P).
bool koebe_contradicts_bounded_image(double log_radius);

struct ProductCheck {
    bool holds = false;
    double min_margin = 0.0;           // min over n of the log-domain gap
    std::uint64_t first_violation = 0; // 0 if none
};

// Verifies prod_{k<=n} (1 + 1/(7k))^7 > n + 1 for all n <= N in the log domain.
ProductCheck product_inequality_check(std::uint64_t N);

// Sampled inf of rho(z)/rho(f z) over preimages of P \ S_n, with a 0.9 safety
// factor: the factor C_n by which the final inverse step can shrink hyperbolic
// length.  Requires n >= 5.
double strip_contraction_constant(std::uint64_t n, std::uint64_t samples);

// C' such that C'/sqrt(n) lower-bounds the sampled C_n over a log-spaced probe
// set up to n_max.
double estimate_c_prime(std::uint64_t n_max, std::uint64_t samples);

// delta_n = 2 * 4 diam(P) / ((C'/sqrt(n)) prod_{k<=n} (1 + 1/(7k))^8), the
// certified lower bound on how much parameter room the n-th stage of the
// construction keeps; decreasing in n.  Entry [n] of the result is delta_n
// (entry [0] unused).
std::vector<double> delta_schedule(std::uint64_t N, double c_prime);

}  // namespace expdyn
