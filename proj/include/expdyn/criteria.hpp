#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "expdyn/seq.hpp"

namespace expdyn {

struct FixedPoints {
    double p = 0.0;  // attracting-side root of lambda e^x = x, in (0,1)
    double q = 0.0;  // repelling root, in (1, inf)
};

// Real fixed points of x -> lambda e^x.  Two roots p < 1 < q for lambda < 1/e,
// the double root {1,1} at lambda = 1/e, none beyond.  Bisection, residual
// |lambda e^x - x| < 1e-12.
std::optional<FixedPoints> fixed_points(double lambda);

struct FatouVerdict {
    bool holds = false;
    std::uint64_t first_violation = 0;  // maps applied when the iterate first reached 1
    double final_value = 0.0;           // last iterate when holds
};

// Checks that every composition value of 0 under lambda_{n1+1..n1+N} stays
// below 1.  Orbits trapped below 1 certify a non-empty set of normality.
FatouVerdict fatou_criterion(const ParameterSequence& seq, std::uint64_t n1, std::uint64_t N);

struct AdmissibleC {
    double c_max = 0.0;  // min over 2 <= n <= N of n^2 (critical lambda_n - 1/e)
    double limit = 0.0;  // the n -> inf value 1/(2e)
};

// Largest C such that 1/e + C/n^2 is dominated termwise (n >= 2) by the
// critical tangent sequence.
AdmissibleC max_admissible_C(std::uint64_t N);

// Start indices (1-based) of all maximal runs, of length >= min_len, of
// consecutive values in the top quarter (1/e + delta/2, 1/e + delta).
std::vector<std::uint64_t> scan_runs(std::span<const double> values, double delta,
                                     std::uint64_t min_len);
std::vector<std::uint64_t> run_detector(const ParameterSequence& seq, double delta,
                                        std::uint64_t min_len, std::uint64_t horizon);

struct RunCriterion {
    double p = 0.0;      // fixed points of the weakest map (1/e - delta) e^z
    double q = 0.0;
    double alpha = 0.0;  // corridor padding around [p, q]
    double eps = 0.0;    // half-height of the certified strip
    double beta = 0.0;   // certified per-step Re gain outside the corridor
    std::uint64_t min_run_len = 0;  // ceil((q - p + 2 alpha) / beta)
};

// Finds (eps, beta, L) such that any run of L consecutive top-quarter values
// pushes a real orbit across the corridor [p - alpha, q + alpha]: beta is 0.9
// of the sampled inf of Re((1/e - delta) e^z) - Re(z) over the strip
// {|Im z| < eps} near the corridor ends, and eps is halved until beta > 0.
// alpha defaults to (q - p) / 10.
RunCriterion compute_run_criterion(double delta, std::optional<double> alpha = std::nullopt,
                                   int grid = 200);

}  // namespace expdyn
