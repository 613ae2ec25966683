#include "expdyn/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "expdyn/constants.hpp"
#include "expdyn/errors.hpp"

namespace expdyn {

namespace {

// f(x) = x - lambda e^x, evaluated as x - exp(ln lambda + x) so a far
// bracket endpoint cannot overflow before the root is found.
double fp_residual(double lambda, double x) { return x - std::exp(std::log(lambda) + x); }

double bisect_fixed_point(double lambda, double a, double b) {
    double fa = fp_residual(lambda, a);
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double fm = fp_residual(lambda, m);
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

std::optional<FixedPoints> fixed_points(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InvalidParameter("lambda must be positive and finite");
    if (lambda > kInvE) return std::nullopt;
    if (lambda == kInvE) return FixedPoints{1.0, 1.0};
    FixedPoints fp;
    fp.p = bisect_fixed_point(lambda, 0.0, 1.0);
    double hi = 50.0;
    while (fp_residual(lambda, hi) > 0.0) hi *= 2.0;  // tiny lambda pushes q beyond 50
    fp.q = bisect_fixed_point(lambda, 1.0, hi);
    return fp;
}

FatouVerdict fatou_criterion(const ParameterSequence& seq, std::uint64_t n1, std::uint64_t N) {
    FatouVerdict v;
    double x = 0.0;
    for (std::uint64_t k = 1; k <= N; ++k) {
        x = seq.query(n1 + k) * std::exp(x);
        if (x >= 1.0) {
            v.holds = false;
            v.first_violation = k;
            v.final_value = x;
            return v;
        }
    }
    v.holds = true;
    v.final_value = x;
    return v;
}

AdmissibleC max_admissible_C(std::uint64_t N) {
    if (N < 2) throw InvalidParameter("need N >= 2");
    AdmissibleC res;
    res.limit = kHalfInvE;
    double c = std::numeric_limits<double>::infinity();
    for (std::uint64_t n = 2; n <= N; ++n) {
        const double nn = static_cast<double>(n);
        const double crit = kInvE * std::exp(1.0 / (nn - 1.0)) * (1.0 - 1.0 / nn);
        c = std::min(c, nn * nn * (crit - kInvE));
    }
    res.c_max = c;
    return res;
}

std::vector<std::uint64_t> scan_runs(std::span<const double> values, double delta,
                                     std::uint64_t min_len) {
    if (!(delta > 0.0)) throw InvalidParameter("delta must be positive");
    if (min_len == 0) throw InvalidParameter("min_len must be positive");
    const double threshold = kInvE + 0.5 * delta;
    std::vector<std::uint64_t> starts;
    std::uint64_t run = 0;
    for (std::size_t i = 0; i <= values.size(); ++i) {
        const bool in = i < values.size() && values[i] > threshold;
        if (in) {
            ++run;
        } else {
            if (run >= min_len) starts.push_back(static_cast<std::uint64_t>(i) - run + 1);
            run = 0;
        }
    }
    return starts;
}

std::vector<std::uint64_t> run_detector(const ParameterSequence& seq, double delta,
                                        std::uint64_t min_len, std::uint64_t horizon) {
    std::vector<double> values;
    values.reserve(horizon);
    const std::uint64_t n0 = seq.start_index();
    for (std::uint64_t k = 0; k < horizon; ++k) values.push_back(seq.query(n0 + k));
    auto starts = scan_runs(values, delta, min_len);
    for (auto& s : starts) s += n0 - 1;  // report in sequence-index terms
    return starts;
}

RunCriterion compute_run_criterion(double delta, std::optional<double> alpha, int grid) {
    if (!(delta > 0.0 && delta < kInvE)) throw InvalidParameter("delta must lie in (0, 1/e)");
    if (grid < 2) throw InvalidParameter("grid must be at least 2");
    const double lam_lo = kInvE - delta;
    const auto fp = fixed_points(lam_lo);

    RunCriterion rc;
    rc.p = fp->p;
    rc.q = fp->q;
    rc.alpha = alpha.value_or((rc.q - rc.p) / 10.0);
    if (!(rc.alpha > 0.0)) throw InvalidParameter("alpha must be positive");

    // Outside the padded corridor even the weakest map in the support gains
    // ground; the sampled inf over flanking segments, shaved by 0.9, is the
    // certified per-step Re gain.  The strip half-height eps is halved until
    // that gain is positive.
    double eps = 0.5;
    double beta = 0.0;
    while (eps > 1e-6) {
        beta = std::numeric_limits<double>::infinity();
        const double segs[2][2] = {{rc.p - rc.alpha - 2.0, rc.p - rc.alpha},
                                   {rc.q + rc.alpha, rc.q + rc.alpha + 2.0}};
        for (const auto& seg : segs) {
            for (int i = 0; i < grid; ++i) {
                const double x = seg[0] + (seg[1] - seg[0]) * (i + 0.5) / grid;
                for (int j = 0; j < grid; ++j) {
                    const double y = -eps + 2.0 * eps * (j + 0.5) / grid;
                    beta = std::min(beta, lam_lo * std::exp(x) * std::cos(y) - x);
                }
            }
        }
        beta *= 0.9;
        if (beta > 0.0) break;
        eps *= 0.5;
    }
    if (!(beta > 0.0)) throw ConstructionFailure(0, "no strip height gives a positive gain");
    rc.eps = eps;
    rc.beta = beta;
    rc.min_run_len = static_cast<std::uint64_t>(std::ceil((rc.q - rc.p + 2.0 * rc.alpha) / beta));
    return rc;
}

}  // namespace expdyn
