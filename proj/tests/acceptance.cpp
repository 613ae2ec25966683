// Acceptance harness: one line per criterion, nonzero exit if any fail.
// Budgets are wall-clock and pinned here; an overrun is a failure.

#include "expdyn/cone.hpp"
#include "expdyn/constants.hpp"
#include "expdyn/criteria.hpp"
#include "expdyn/errors.hpp"
#include "expdyn/experiments.hpp"
#include "expdyn/hyperbolic.hpp"
#include "expdyn/orbit.hpp"
#include "expdyn/render.hpp"
#include "expdyn/rng.hpp"
#include "expdyn/seq.hpp"

#include <chrono>
#include <limits>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace expdyn;
using cplx = std::complex<double>;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return std::string(buf);
}

int g_failures = 0;

void run_criterion(int idx, const char* name, double budget_ms,
                   const std::function<Outcome()>& body) {
    Outcome out;
    out.ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        out = body();
    } catch (const std::exception& e) {
        out.ok = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
            .count();
    bool in_budget = ms < budget_ms;
    bool pass = out.ok && in_budget;
    if (!in_budget)
        out.detail += " [over budget]";
    std::printf("%s %2d %-28s %s (%.3f ms / budget %.0f ms)\n",
                pass ? "PASS" : "FAIL", idx, name, out.detail.c_str(), ms,
                budget_ms);
    std::fflush(stdout);
    if (!pass)
        ++g_failures;
}

// ---- 1: critical orbit tracks 1 - 1/n ------------------------------------

Outcome crit_orbit_identity() {
    auto seq = ParameterSequence::critical_exact();
    double x = 0.0;
    double worst = 0.0;
    for (int n = 2; n <= 100; ++n) {
        x = seq.query(n) * std::exp(x);
        const double target = 1.0 - 1.0 / n;
        const double rel = std::fabs(x - target) / target;
        if (rel > worst)
            worst = rel;
    }
    Outcome o;
    o.ok = worst < 1e-6;
    o.detail = "max rel dev " + fmt(worst, "%.3e") + " over n<=100";
    return o;
}

// ---- 2: power-law schedule keeps the origin's orbit bounded ---------------

Outcome powerlaw_bounded() {
    const double cmax = max_admissible_C(10000).c_max;
    const double c = 0.9 * cmax;
    auto seq = ParameterSequence::power_law(2.0, c);
    auto rep = fatou_criterion(seq, 0.0, 1000000);
    Outcome o;
    o.ok = rep.holds;
    o.detail = "C=" + fmt(c) + " final=" + fmt(rep.final_value) +
               (rep.holds ? " all iterates < 1" : " violated at step " +
                                std::to_string(rep.first_violation));
    return o;
}

// ---- 3: log-derivative dominates log-height on random samples -------------

Outcome derivative_dominates_height() {
    const std::uint64_t master = 1234;
    int violations = 0;
    double worst = 1e300;
    for (int t = 0; t < 10000; ++t) {
        const std::uint64_t s1 = derive_seed(master, 2 * t);
        const std::uint64_t s2 = derive_seed(master, 2 * t + 1);
        const double re = -3.0 + 6.0 * uniform_draw(s1, 1);
        const double im = -3.0 + 6.0 * uniform_draw(s1, 2);
        const int n = 1 + static_cast<int>(20.0 * uniform_draw(s1, 3));
        ParameterSequence seq = [&]() {
            switch (t % 3) {
            case 0:
                return ParameterSequence::constant(0.5 + 2.0 * uniform_draw(s2, 1));
            case 1:
                return ParameterSequence::uniform_random(0.2, s2);
            default:
                return ParameterSequence::critical_exact();
            }
        }();
        auto rep = misiurewicz_check(cplx(re, im), seq, n);
        if (!rep.holds)
            ++violations;
        if (rep.margin < worst)
            worst = rep.margin;
    }
    Outcome o;
    o.ok = violations == 0;
    o.detail = std::to_string(violations) + " violations in 10000 samples, min margin " +
               fmt(worst, "%.3e");
    return o;
}

// ---- 4: strip push + expansion for every n in [10,1000], product bound ----

Outcome hyperbolic_chain() {
    double min_push = 1e300;
    double min_slack = 1e300;
    for (int n = 10; n <= 1000; ++n) {
        auto push = strip_push_check(n, 2000);
        if (push.min_margin < min_push)
            min_push = push.min_margin;
        auto exp_ = expansion_bound_check(n, 2000);
        const double slack = exp_.min_value - exp_.bound;
        if (slack < min_slack)
            min_slack = slack;
        if (push.min_margin < 0.0 || slack < 0.0) {
            Outcome bad;
            bad.ok = false;
            bad.detail = "failed at n=" + std::to_string(n);
            return bad;
        }
    }
    auto prod = product_inequality_check(10000);
    Outcome o;
    o.ok = min_push >= 0.0 && min_slack >= 0.0 && prod.holds;
    o.detail = "min push margin " + fmt(min_push, "%.3e") + ", min expansion slack " +
               fmt(min_slack, "%.3e") + ", product margin " +
               fmt(prod.min_margin, "%.3e");
    return o;
}

// ---- 5: correction schedule decreases and drops 10x over two decades ------

Outcome schedule_decreasing() {
    const double cp = estimate_c_prime(10000, 500);
    auto d = delta_schedule(10000, cp);
    bool decreasing = true;
    for (int n = 101; n <= 10000; ++n) {
        if (!(d[static_cast<std::size_t>(n)] < d[static_cast<std::size_t>(n) - 1])) {
            decreasing = false;
            break;
        }
    }
    const double ratio = d[10000] / d[100];
    Outcome o;
    o.ok = decreasing && d[10000] < d[100] / 10.0;
    o.detail = std::string(decreasing ? "monotone on [100,10000]" : "not monotone") +
               ", d(1e4)/d(100)=" + fmt(ratio, "%.4f") + " (c'=" + fmt(cp) + ")";
    return o;
}

// ---- 6: inverse branch contracts the strip metric, lambda only shifts -----

Outcome inverse_contraction() {
    std::vector<cplx> cloud;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            cloud.emplace_back(-2.0 + 4.0 * i / 9.0, 0.2 + 2.8 * j / 9.0);
    double worst_factor = 0.0;
    for (double lam : {kInvE, 1.0, 2.0}) {
        const double f = contraction_factor(lam, cloud);
        if (f > worst_factor)
            worst_factor = f;
    }
    double worst_shift = 0.0;
    const double pairs[3][2] = {{kInvE, 1.0}, {1.0, 2.0}, {kInvE, 2.0}};
    for (const auto& pr : pairs) {
        const double shift = std::log(pr[1] / pr[0]);
        for (const auto& z : cloud) {
            const cplx a = inverse_branch(pr[1], z);
            const cplx b = inverse_branch(pr[0], z) - cplx(shift, 0.0);
            const double err = std::abs(a - b);
            if (err > worst_shift)
                worst_shift = err;
        }
    }
    Outcome o;
    o.ok = worst_factor < 1.0 && worst_shift <= 1e-12;
    o.detail = "max factor " + fmt(worst_factor, "%.6f") + ", max shift err " +
               fmt(worst_shift, "%.3e");
    return o;
}

// ---- 7: cone decay rate n*|z_n| -> 2 and per-step sandwich ----------------

Outcome cone_rate() {
    const double theta = 0.7853981633974483;  // pi/4
    auto rb = rate_check(cplx(-0.5, 0.0), theta, 10000);
    const double r0 = probe_inversion_radius(theta, 1000);
    auto sand = sandwich_check(theta, r0, 1000);
    Outcome o;
    o.ok = rb.lo > 1.9 && rb.hi < 2.1 && rb.contained && sand.holds;
    o.detail = "n|z_n| in [" + fmt(rb.lo, "%.4f") + "," + fmt(rb.hi, "%.4f") +
               "] on [5e3,1e4], sandwich at r=" + fmt(r0) +
               (sand.holds ? " holds" : " fails") + " (" +
               std::to_string(sand.samples) + " pts)";
    return o;
}

// ---- 8: perturbed orbits leave the cone, autonomous control stays ---------

Outcome cone_exit() {
    const double theta = 0.7853981633974483;  // pi/4
    int tested = 0;
    long max_step = 0;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const cplx z(-1.0 + 0.9 * (i + 0.5) / 10.0, 0.3 * (j + 0.5) / 10.0);
            if (!in_cone(z, theta))
                continue;
            ++tested;
            auto rep = cone_exit_time(z, 1.0, theta, 1, 100000);
            if (!rep.exit_step) {
                Outcome bad;
                bad.ok = false;
                bad.detail = "no exit from " + fmt(z.real()) + "+" + fmt(z.imag()) + "i";
                return bad;
            }
            if (static_cast<long>(*rep.exit_step) > max_step)
                max_step = static_cast<long>(*rep.exit_step);
        }
    }
    auto ctrl = cone_exit_time(cplx(-0.5, 0.0),
                               std::numeric_limits<double>::infinity(), theta, 1,
                               100000);
    Outcome o;
    o.ok = tested >= 50 && !ctrl.exit_step.has_value();
    o.detail = std::to_string(tested) + " grid points exit (max step " +
               std::to_string(max_step) + "), autonomous control stays";
    return o;
}

// ---- 9: Monte Carlo escape frequency with confidence interval -------------

Outcome mc_escape() {
    auto rep = mc_escape_probability(0.1, 1000, 10000, 2026, 8);
    Outcome o;
    o.ok = rep.fraction >= 0.99;
    o.detail = "fraction " + fmt(rep.fraction, "%.4f") + " CI [" +
               fmt(rep.ci.lo, "%.4f") + "," + fmt(rep.ci.hi, "%.4f") + "] (" +
               std::to_string(rep.escaped) + "/" + std::to_string(rep.trials) + ")";
    return o;
}

// ---- 10: adaptive schedule restarts cleanly at every block boundary -------

Outcome adaptive_blocks() {
    AdaptiveConfig cfg;
    auto seq = ParameterSequence::adaptive_escape(cfg);
    const auto& st = seq.adaptive_state();
    Outcome o;
    if (st.blocks.size() != 3) {
        o.detail = "expected 3 blocks, got " + std::to_string(st.blocks.size());
        return o;
    }
    double worst = 0.0;
    bool above = true;
    for (const auto& blk : st.blocks) {
        if (!(blk.lambda > kInvE))
            above = false;
        const double err = std::fabs(blk.critical_check - 1.0);
        if (err > worst)
            worst = err;
    }
    o.ok = above && worst <= 1e-9;
    o.detail = "3 boundaries, max |critical restart - 1| = " + fmt(worst, "%.3e") +
               (above ? ", all lambda above threshold" : ", lambda too small");
    return o;
}

// ---- 11: bitwise determinism of render and Monte Carlo --------------------

Outcome determinism() {
    auto seq = ParameterSequence::uniform_random(0.1, 7);
    GridSpec grid;
    grid.nx = 400;
    grid.ny = 400;
    EscapeConfig ecfg;
    ecfg.max_iter = 200;
    auto render_once = [&](int threads) {
        auto res = classify_grid(seq, grid, ecfg, threads);
        std::ostringstream os;
        write_pgm(res, os);
        return os.str();
    };
    const std::string a = render_once(1);
    const std::string b = render_once(1);
    const std::string c = render_once(8);
    auto m1 = mc_escape_probability(0.1, 200, 2000, 9, 1);
    auto m8 = mc_escape_probability(0.1, 200, 2000, 9, 8);
    const bool mc_same = m1.escaped == m8.escaped && m1.fraction == m8.fraction &&
                         m1.lambda_mean == m8.lambda_mean && m1.ci.lo == m8.ci.lo &&
                         m1.ci.hi == m8.ci.hi;
    Outcome o;
    o.ok = a == b && a == c && mc_same;
    o.detail = "pgm " + std::to_string(a.size()) + " bytes " +
               (a == b && a == c ? "identical across reruns and threads 1/8"
                                 : "MISMATCH") +
               (mc_same ? ", mc summary identical" : ", mc summary differs");
    return o;
}

} // namespace

int main() {
    std::printf("acceptance checks, fixed tolerances and budgets\n");
    run_criterion(1, "critical-orbit-identity", 1.0, crit_orbit_identity);
    run_criterion(2, "power-law-bounded", 1000.0, powerlaw_bounded);
    run_criterion(3, "derivative-vs-height", 5000.0, derivative_dominates_height);
    run_criterion(4, "hyperbolic-chain", 30000.0, hyperbolic_chain);
    run_criterion(5, "correction-schedule", 1000.0, schedule_decreasing);
    run_criterion(6, "inverse-contraction", 5000.0, inverse_contraction);
    run_criterion(7, "cone-decay-rate", 2000.0, cone_rate);
    run_criterion(8, "cone-exit", 10000.0, cone_exit);
    run_criterion(9, "mc-escape", 30000.0, mc_escape);
    run_criterion(10, "adaptive-blocks", 10000.0, adaptive_blocks);
    run_criterion(11, "determinism", 60000.0, determinism);
    if (g_failures == 0)
        std::printf("all 11 criteria passed\n");
    else
        std::printf("%d criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
