#pragma once

#include <complex>
#include <cstdint>
#include <functional>

#include "expdyn/seq.hpp"

namespace expdyn {

struct EscapeConfig {
    double re_threshold = 50.0;     // escaped once Re(z) exceeds this
    std::uint64_t max_iter = 10'000;  // maps applied before giving up
    double overflow_re = 700.0;     // exp() overflow guard, must stay > re_threshold
};

enum class OrbitStatus { Active, Escaped, Overflowed };

const char* to_string(OrbitStatus status);

// State after running a composition.  Trajectory positions are 1-based with z0
// at position 1, so event_step = s means the value after s-1 maps was the first
// to cross the threshold.  log_deriv accumulates sum of ln|F_k(z0)|, the log of
// |d/dz F_n| by the chain rule; it is accumulated in the log domain so long
// compositions cannot overflow.
struct OrbitState {
    std::complex<double> z;
    std::uint64_t n = 0;  // maps applied
    double log_deriv = 0.0;
    OrbitStatus status = OrbitStatus::Active;
    std::uint64_t event_step = 0;  // trajectory position at escape/overflow, 0 if none
};

// One map application z -> lambda e^z.  Throws OverflowGuard if Re(z) exceeds
// the guard.
std::complex<double> step(std::complex<double> z, double lambda, double overflow_re = 700.0);

// Iterates z0 under lambda_{n1+1}, lambda_{n1+2}, ... with escape detection.
// The observer, when given, is called after each applied map with
// (maps_applied, z, log_deriv).
OrbitState run(const ParameterSequence& seq, std::complex<double> z0, std::uint64_t n1,
               const EscapeConfig& cfg);
OrbitState run(const ParameterSequence& seq, std::complex<double> z0, std::uint64_t n1,
               const EscapeConfig& cfg,
               const std::function<void(std::uint64_t, std::complex<double>, double)>& observe);

// Checks ln|F_n'(z)| >= ln|Im F_n(z)| at the deepest step <= n the orbit
// reaches without crossing the overflow guard.  margin is the log-domain gap;
// a real iterate makes the inequality vacuous (margin +inf).
struct MisiurewiczResult {
    std::uint64_t checked_step = 0;
    bool holds = true;
    double margin = 0.0;
};

MisiurewiczResult misiurewicz_check(std::complex<double> z, const ParameterSequence& seq,
                                    std::uint64_t n);

struct RealEscape {
    bool escapes = false;
    std::uint64_t step = 0;  // trajectory position, as in OrbitState
    double final_x = 0.0;
};

// Real-axis specialization of run() for orbits of real starting points.
RealEscape real_orbit_escapes(const ParameterSequence& seq, double x0, std::uint64_t n1,
                              const EscapeConfig& cfg);

}  // namespace expdyn
