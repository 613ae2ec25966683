#include "expdyn/orbit.hpp"

#include <cmath>
#include <limits>

#include "expdyn/errors.hpp"

namespace expdyn {

const char* to_string(OrbitStatus status) {
    switch (status) {
        case OrbitStatus::Active: return "active";
        case OrbitStatus::Escaped: return "escaped";
        case OrbitStatus::Overflowed: return "overflowed";
    }
    return "unknown";
}

std::complex<double> step(std::complex<double> z, double lambda, double overflow_re) {
    if (z.real() > overflow_re) throw OverflowGuard(0);
    return lambda * std::exp(z);
}

OrbitState run(const ParameterSequence& seq, std::complex<double> z0, std::uint64_t n1,
               const EscapeConfig& cfg,
               const std::function<void(std::uint64_t, std::complex<double>, double)>& observe) {
    OrbitState st;
    st.z = z0;
    // Trajectory position k holds the value after k-1 maps; z0 sits at position 1.
    for (std::uint64_t k = 1; k <= cfg.max_iter + 1; ++k) {
        if (st.z.real() > cfg.re_threshold) {
            st.status = OrbitStatus::Escaped;
            st.event_step = k;
            return st;
        }
        if (st.z.real() > cfg.overflow_re) {
            // unreachable while re_threshold < overflow_re; kept as a guard
            st.status = OrbitStatus::Overflowed;
            st.event_step = k;
            return st;
        }
        if (k == cfg.max_iter + 1) break;
        const double lambda = seq.query(n1 + k);
        st.log_deriv += std::log(lambda) + st.z.real();
        st.z = lambda * std::exp(st.z);
        st.n = k;
        if (observe) observe(k, st.z, st.log_deriv);
    }
    st.status = OrbitStatus::Active;
    st.event_step = 0;
    return st;
}

OrbitState run(const ParameterSequence& seq, std::complex<double> z0, std::uint64_t n1,
               const EscapeConfig& cfg) {
    return run(seq, z0, n1, cfg, nullptr);
}

MisiurewiczResult misiurewicz_check(std::complex<double> z, const ParameterSequence& seq,
                                    std::uint64_t n) {
    MisiurewiczResult res;
    std::complex<double> w = z;
    double log_deriv = 0.0;
    std::uint64_t done = 0;
    for (std::uint64_t k = 1; k <= n; ++k) {
        if (w.real() > 700.0) break;  // next exp would overflow; stop at the deepest safe step
        const double lambda = seq.query(seq.start_index() + k - 1);
        log_deriv += std::log(lambda) + w.real();
        w = lambda * std::exp(w);
        done = k;
    }
    res.checked_step = done;
    if (done == 0) {
        res.holds = true;
        res.margin = std::numeric_limits<double>::infinity();
        return res;
    }
    const double im = std::abs(w.imag());
    // |(F_n)'(z)| >= |Im F_n(z)|, compared in the log domain.
    res.margin = im > 0.0 ? log_deriv - std::log(im) : std::numeric_limits<double>::infinity();
    res.holds = res.margin >= -1e-9;
    return res;
}

RealEscape real_orbit_escapes(const ParameterSequence& seq, double x0, std::uint64_t n1,
                              const EscapeConfig& cfg) {
    RealEscape res;
    double x = x0;
    for (std::uint64_t k = 1; k <= cfg.max_iter + 1; ++k) {
        if (x > cfg.re_threshold) {
            res.escapes = true;
            res.step = k;
            res.final_x = x;
            return res;
        }
        if (k == cfg.max_iter + 1) break;
        x = seq.query(n1 + k) * std::exp(x);
    }
    res.escapes = false;
    res.step = 0;
    res.final_x = x;
    return res;
}

}  // namespace expdyn
