#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "expdyn/constants.hpp"
#include "expdyn/errors.hpp"
#include "expdyn/orbit.hpp"
#include "expdyn/rng.hpp"
#include "expdyn/seq.hpp"

using namespace expdyn;
using cplx = std::complex<double>;

TEST_CASE("step applies one exponential map") {
    const cplx one = step(cplx(0.0, 0.0), 1.0);
    CHECK(one.real() == 1.0);
    CHECK(one.imag() == 0.0);

    // fixed point of z -> e^{z-1}
    const cplx fp = step(cplx(1.0, 0.0), kInvE);
    CHECK(fp.real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fp.imag() == 0.0);

    const cplx euler = step(cplx(0.0, M_PI), 1.0);
    CHECK(euler.real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(euler.imag()) < 1e-15);
}

TEST_CASE("step refuses arguments beyond the overflow guard") {
    try {
        step(cplx(700.5, 0.0), 1.0);
        FAIL("expected OverflowGuard");
    } catch (const OverflowGuard& g) {
        CHECK(g.step == 0);
    }
    CHECK_THROWS_AS(step(cplx(10.0, 0.0), 1.0, 5.0), OverflowGuard);
    CHECK_NOTHROW(step(cplx(699.0, 0.0), 1.0));
}

TEST_CASE("escape classification follows the direct iteration oracle") {
    const auto seq = ParameterSequence::constant(1.0);
    EscapeConfig cfg;  // threshold 50

    std::vector<std::uint64_t> ks;
    std::vector<cplx> zs;
    std::vector<double> lds;
    const OrbitState st = run(seq, cplx(1.0, 0.0), 0, cfg,
                              [&](std::uint64_t k, cplx z, double ld) {
                                  ks.push_back(k);
                                  zs.push_back(z);
                                  lds.push_back(ld);
                              });

    CHECK(st.status == OrbitStatus::Escaped);
    CHECK(st.event_step == 4);  // z0 sits at position 1, third image crosses
    CHECK(st.n == 3);

    // identical arithmetic as the iteration loop, so bitwise comparable
    const cplx w1 = std::exp(cplx(1.0, 0.0));
    const cplx w2 = std::exp(w1);
    const cplx w3 = std::exp(w2);
    REQUIRE(ks.size() == 3);
    CHECK(ks[0] == 1);
    CHECK(ks[1] == 2);
    CHECK(ks[2] == 3);
    CHECK(zs[0] == w1);
    CHECK(zs[1] == w2);
    CHECK(zs[2] == w3);
    CHECK(st.z == w3);

    CHECK(lds[0] == 1.0);  // ln 1 + Re z0
    CHECK(lds[1] == 1.0 + w1.real());
    CHECK(lds[2] == 1.0 + w1.real() + w2.real());
    CHECK(st.log_deriv == lds[2]);
}

TEST_CASE("starting points beyond the threshold escape at position one") {
    const auto seq = ParameterSequence::constant(1.0);
    EscapeConfig cfg;

    OrbitState st = run(seq, cplx(60.0, 0.0), 0, cfg);
    CHECK(st.status == OrbitStatus::Escaped);
    CHECK(st.event_step == 1);
    CHECK(st.n == 0);
    CHECK(st.z == cplx(60.0, 0.0));

    // even far beyond the overflow guard: classification, not application
    st = run(seq, cplx(800.0, 0.0), 0, cfg);
    CHECK(st.status == OrbitStatus::Escaped);
    CHECK(st.event_step == 1);
    CHECK(st.n == 0);
}

TEST_CASE("parabolic orbit stays active and climbs toward the fixed point") {
    const auto seq = ParameterSequence::constant(kInvE);
    EscapeConfig cfg;  // max_iter 10000

    std::vector<double> xs;
    const OrbitState st = run(seq, cplx(0.0, 0.0), 0, cfg,
                              [&](std::uint64_t, cplx z, double) { xs.push_back(z.real()); });

    CHECK(st.status == OrbitStatus::Active);
    CHECK(st.event_step == 0);
    CHECK(st.n == cfg.max_iter);
    CHECK(st.z.imag() == 0.0);
    CHECK(st.z.real() < 1.0);
    CHECK(st.z.real() > 0.999);  // convergence is ~ 2/n

    REQUIRE(xs.size() == cfg.max_iter);
    for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] >= xs[i - 1]);
}

TEST_CASE("tuned sequence reproduces the 1 - 1/n ladder from zero") {
    const auto seq = ParameterSequence::critical_exact();
    EscapeConfig cfg;
    cfg.max_iter = 99;

    std::size_t checked = 0;
    const OrbitState st = run(seq, cplx(0.0, 0.0), 1, cfg,
                              [&](std::uint64_t k, cplx z, double) {
                                  const double want = 1.0 - 1.0 / static_cast<double>(k + 1);
                                  CHECK(std::abs(z.real() - want) <= 1e-9);
                                  CHECK(z.imag() == 0.0);
                                  ++checked;
                              });
    CHECK(checked == 99);
    CHECK(st.status == OrbitStatus::Active);
    CHECK(st.n == 99);
}

TEST_CASE("undefined sequence indices propagate out of the iteration") {
    const auto seq = ParameterSequence::critical_exact();
    EscapeConfig cfg;
    cfg.max_iter = 5;
    // first query would be index 1, below the sequence's first defined index
    CHECK_THROWS_AS(run(seq, cplx(0.0, 0.0), 0, cfg), UndefinedIndex);
}

TEST_CASE("accumulated derivative matches finite differences on short orbits") {
    EscapeConfig cfg;
    cfg.re_threshold = 600.0;
    cfg.max_iter = 15;
    const cplx z0(0.3, 0.2);
    const double h = 1e-7;

    const ParameterSequence seqs[] = {
        ParameterSequence::constant(kInvE),
        ParameterSequence::uniform_random(0.05, 123),
    };
    for (const auto& seq : seqs) {
        const OrbitState base = run(seq, z0, 0, cfg);
        REQUIRE(base.status == OrbitStatus::Active);
        REQUIRE(base.n == 15);
        const OrbitState bumped = run(seq, z0 + cplx(h, 0.0), 0, cfg);
        const double fd = std::abs(bumped.z - base.z) / h;
        CHECK(fd == doctest::Approx(std::exp(base.log_deriv)).epsilon(1e-3));
    }
}

TEST_CASE("derivative-vs-height inequality at the equality edge") {
    const auto seq = ParameterSequence::constant(1.0);
    const MisiurewiczResult res = misiurewicz_check(cplx(0.0, M_PI / 2.0), seq, 1);
    CHECK(res.holds);
    CHECK(res.checked_step == 1);
    CHECK(res.margin == 0.0);  // |F1'| = |i| = 1 = |Im F1|
}

TEST_CASE("derivative-vs-height inequality is vacuous on the real line") {
    const auto seq = ParameterSequence::uniform_random(0.1, 99);
    const MisiurewiczResult res = misiurewicz_check(cplx(0.7, 0.0), seq, 10);
    CHECK(res.holds);
    CHECK(std::isinf(res.margin));
    CHECK(res.checked_step == 10);
}

TEST_CASE("derivative-vs-height check truncates at the overflow guard") {
    const auto seq = ParameterSequence::constant(1.0);

    // starting point already beyond the guard: nothing to check
    MisiurewiczResult res = misiurewicz_check(cplx(705.0, 0.0), seq, 5);
    CHECK(res.checked_step == 0);
    CHECK(res.holds);
    CHECK(std::isinf(res.margin));

    // one application lands beyond the guard, so only step 1 is checked
    res = misiurewicz_check(cplx(100.0, 1.0), seq, 5);
    CHECK(res.checked_step == 1);
    CHECK(res.holds);
    // margin = (ln 1 + 100) - ln(e^100 sin 1) = -ln sin 1
    CHECK(res.margin == doctest::Approx(-std::log(std::sin(1.0))).epsilon(1e-12));
}

TEST_CASE("derivative-vs-height inequality survives random sampling") {
    std::size_t violations = 0;
    for (std::uint64_t t = 0; t < 10'000; ++t) {
        const std::uint64_t s = derive_seed(4242, t);
        const double u1 = uniform_draw(s, 1);
        const double u2 = uniform_draw(s, 2);
        const double u3 = uniform_draw(s, 3);
        const double u4 = uniform_draw(s, 4);
        const cplx z(-3.0 + 6.0 * u1, -4.0 + 8.0 * u2);
        const auto n = static_cast<std::uint64_t>(1 + static_cast<int>(20.0 * u3));

        ParameterSequence seq = ParameterSequence::constant(0.05 + 1.5 * u4);
        if (t % 3 == 1) seq = ParameterSequence::uniform_random(0.02 + 0.2 * u4, derive_seed(7, t));
        if (t % 3 == 2) seq = ParameterSequence::critical_exact();

        const MisiurewiczResult res = misiurewicz_check(z, seq, n);
        if (!res.holds) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("real orbits escape exactly when the parameters push them out") {
    EscapeConfig cfg;

    const RealEscape out = real_orbit_escapes(ParameterSequence::constant(0.4), 0.0, 0, cfg);
    CHECK(out.escapes);
    CHECK(out.step >= 2);
    CHECK(out.final_x > 50.0);

    // complex iteration agrees on the escape position
    const OrbitState st = run(ParameterSequence::constant(0.4), cplx(0.0, 0.0), 0, cfg);
    CHECK(st.status == OrbitStatus::Escaped);
    CHECK(st.event_step == out.step);
    CHECK(st.z.real() == doctest::Approx(out.final_x).epsilon(1e-12));

    const RealEscape in = real_orbit_escapes(ParameterSequence::constant(kInvE), 0.0, 0, cfg);
    CHECK(!in.escapes);
    CHECK(in.step == 0);
    CHECK(in.final_x > 0.999);
    CHECK(in.final_x < 1.0);
}

TEST_CASE("slowly decaying supercritical parameters keep the origin orbit below one") {
    // c below the admissible bound for p = 2; the termwise comparison with the
    // tangent ladder starts at index 2, so query from there
    const auto seq = ParameterSequence::power_law(2.0, 0.18);
    EscapeConfig cfg;
    cfg.re_threshold = 1.0;  // escape here would mean some value exceeded one
    cfg.max_iter = 100'000;
    const OrbitState st = run(seq, cplx(0.0, 0.0), 1, cfg);
    CHECK(st.status == OrbitStatus::Active);
    CHECK(st.z.real() < 1.0);
    CHECK(st.z.real() > 0.0);

    // including the index-1 map adds the whole of c in one step, and this c
    // is too large for that head start
    const OrbitState head = run(seq, cplx(0.0, 0.0), 0, cfg);
    CHECK(head.status == OrbitStatus::Escaped);
}

TEST_CASE("real starting points stay exactly real") {
    EscapeConfig cfg;
    cfg.max_iter = 300;
    const OrbitState st = run(ParameterSequence::uniform_random(0.1, 5), cplx(0.25, 0.0), 0, cfg);
    CHECK(st.z.imag() == 0.0);
}

TEST_CASE("above-threshold blocks drive real orbits upward monotonically") {
    EscapeConfig cfg;
    cfg.max_iter = 100;
    std::vector<double> xs{1.5};
    const OrbitState st = run(ParameterSequence::block_repeat(), cplx(1.5, 0.0), 0, cfg,
                              [&](std::uint64_t, cplx z, double) { xs.push_back(z.real()); });
    CHECK(st.status == OrbitStatus::Escaped);
    for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] >= xs[i - 1]);
}

TEST_CASE("identical inputs give identical orbits") {
    EscapeConfig cfg;
    cfg.re_threshold = 600.0;
    cfg.max_iter = 500;
    const cplx z0(0.1, 0.9);

    const OrbitState a = run(ParameterSequence::uniform_random(0.1, 77), z0, 0, cfg);
    const OrbitState b = run(ParameterSequence::uniform_random(0.1, 77), z0, 0, cfg);
    CHECK(a.z == b.z);
    CHECK(a.n == b.n);
    CHECK(a.log_deriv == b.log_deriv);
    CHECK(a.status == b.status);
    CHECK(a.event_step == b.event_step);
}
