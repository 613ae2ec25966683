#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace expdyn {

// Cone at the origin around the negative real axis: with the argument taken in
// [0, 2pi), S_theta = {arg z in (pi/2 + theta, 3pi/2 - theta)}.  theta in
// (0, pi/2).  Throws DomainError at z = 0, whose argument is undefined.
bool in_cone(std::complex<double> z, double theta);

// The parabolic map f(z) = e^z - 1 read at infinity: g(w) = 1 / f(1/w).
// Expands as w - 1/2 + 1/(12 w) + O(1/w^2) for large |w|.  Poles where
// f(1/w) = 0; throws DomainError at w = 0 or a pole.
std::complex<double> inverted_map(std::complex<double> w);

struct SandwichCheck {
    double r0 = 0.0;                // inner radius of the sampled annulus (inverted plane)
    double min_lower_margin = 0.0;  // min of |g(w)| - |w| - sin(theta/2)
    double min_upper_margin = 0.0;  // min of |w| + 3 - |g(w)|
    bool invariant = false;         // every sampled g(w) stayed in the cone
    std::uint64_t samples = 0;
    bool holds = false;
};

// Checks |w| + sin(theta/2) < |g(w)| < |w| + 3 and cone invariance on a grid
// over the inverted annulus {w in S_theta : 1/r < |w| <= 2/r}, i.e. the shell
// B(0,r) \ B(0,r/2) of the original plane.
SandwichCheck sandwich_check(double theta, double r, std::uint64_t samples);

// Largest r in {1, 1/2, 1/4, ...} whose shell passes sandwich_check; the
// per-step estimates are only claimed inside B(0, r).  Throws DomainError if
// nothing above 2^-20 passes.
double probe_inversion_radius(double theta, std::uint64_t samples);

struct RateBounds {
    double lo = 0.0;        // min of n |f^n(z0)| over the observed window
    double hi = 0.0;        // max over the window
    bool contained = false; // window inside (1/3 - slack, 1/sin(theta/2) + slack)
};

// Runs the autonomous orbit of f(z) = e^z - 1 and measures n |f^n(z0)| over
// n in [N/2, N]; the per-step sandwich predicts containment in
// (1/3, 1/sin(theta/2)) and the exact rate is 2.  Throws DomainError if an
// iterate leaves the cone (a numerics diagnostic: the attracting side is
// invariant).
RateBounds rate_check(std::complex<double> z0, double theta, std::uint64_t N,
                      double slack = 0.05);

struct ConeExit {
    std::optional<std::uint64_t> exit_step;  // steps applied when first outside, counted from 1
    double final_modulus = 0.0;
};

// Iterates z -> e^z - 1 + 1/n^p for n = start_index, start_index + 1, ... and
// reports the first step whose value leaves S_theta (overflow counts as exit:
// the point left every cone of the family; an exact 0 likewise).  Requires
// p < 2; p = +inf is also accepted and disables the perturbation entirely
// (autonomous control).
ConeExit cone_exit_time(std::complex<double> z0, double p, double theta,
                        std::uint64_t start_index, std::uint64_t max_iter);

struct ExitRow {
    double p = 0.0;
    std::optional<std::uint64_t> exit_step;
    double final_modulus = 0.0;
};

// Exit table over a grid of decay exponents for one starting point.
std::vector<ExitRow> exit_time_scaling(std::span<const double> p_values, double theta,
                                       std::complex<double> z0, std::uint64_t start_index,
                                       std::uint64_t max_iter);

}  // namespace expdyn
