#include <doctest.h>

#include <cmath>

#include "loewner/flow.hpp"
#include "loewner/rng.hpp"

using namespace loewner;

namespace {
const DrivingFunction kZero = DrivingFunction::constant(0.0, 1.0);
}

TEST_CASE("elementary maps: closed forms") {
    CHECK(elementary_forward(Complex(0, 1), 0.0, 0.0) == Complex(0, 1));
    // slit tip maps to the driving value
    CHECK(std::abs(elementary_forward(Complex(0, 2), 0.0, 1.0)) <= 1e-15);
    CHECK(elementary_forward(Complex(3, 0), 0.0, 1.0).real() ==
          doctest::Approx(std::sqrt(13.0)).epsilon(1e-15));
    // left of the slit: negative branch
    CHECK(elementary_forward(Complex(-3, 0), 0.0, 1.0).real() ==
          doctest::Approx(-std::sqrt(13.0)).epsilon(1e-15));

    CHECK(elementary_inverse(Complex(0, 0), 0.0, 1.0) == Complex(0, 2));
    CHECK(elementary_inverse(Complex(0, 1), 0.0, 0.0) == Complex(0, 1));
    CHECK(elementary_inverse(Complex(std::sqrt(13.0), 0), 0.0, 1.0).real() ==
          doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("elementary maps: inverse round-trip off the slit") {
    SplitMix64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        const Complex z(rng.uniform(-3, 3), rng.uniform(0.05, 3.0));
        const double l0 = rng.uniform(-1, 1);
        const double d = rng.uniform(0.0, 0.5);
        const Complex w = elementary_forward(z, l0, d);
        CHECK(w.imag() >= -1e-12);
        CHECK(std::abs(elementary_inverse(w, l0, d) - z) <= 1e-12 * (1.0 + std::abs(z)));
    }
}

TEST_CASE("elementary forward rejects points inside the removed slit") {
    CHECK_THROWS_AS(elementary_forward(Complex(0.0, 1.0), 0.0, 1.0), SwallowedError);
}

TEST_CASE("forward_map: constant driving is exact") {
    const auto flow = DiscretizedFlow::build(kZero, 64);
    // g_t(i) = sqrt(4t - 1): fine for t < 1/4, swallowed at t = 1/4
    CHECK(std::abs(forward_map(flow, Complex(0, 1), 0.1875) - Complex(0, 0.5)) <= 1e-14);
    CHECK_THROWS_AS(forward_map(flow, Complex(0, 1), 1.0), SwallowedError);
    CHECK(std::abs(forward_map(flow, Complex(0, 3), 1.0) - Complex(0, std::sqrt(5.0))) <= 1e-14);

    // oracle equivalence on random points: g_s(z) = sqrt(z^2 + 4s) exactly
    SplitMix64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const Complex z(rng.uniform(-4, 4), rng.uniform(0.2, 4.0));
        for (double s : {0.25, 1.0}) {
            const Complex expect = sqrt_upper(z * z + 4.0 * s, z.real());
            CHECK(std::abs(forward_map(flow, z, s) - expect) <= 1e-12 * (1 + std::abs(expect)));
        }
    }
}

TEST_CASE("forward_map: hydrodynamic normalization at large |z|") {
    const auto sp = DrivingFunction::spiral(2.0, 1.0);
    const auto flow = DiscretizedFlow::build(sp, 256);
    SplitMix64 rng(11);
    for (double R : {1e3, 1e4}) {
        for (int i = 0; i < 10; ++i) {
            const double phi = rng.uniform(0.3, 2.8);
            const Complex z = R * Complex(std::cos(phi), std::sin(phi));
            for (double s : {0.5, 1.0}) {
                const Complex err = forward_map(flow, z, s) - z - 2.0 * s / z;
                CHECK(std::abs(err) <= 10.0 * s / (R * R));
            }
        }
    }
}

TEST_CASE("forward_map: Im is nonincreasing along the flow") {
    const auto lam = DrivingFunction::midpoint_random(0.5, 1.0, 3);
    const auto flow = DiscretizedFlow::build(lam, 128);
    SplitMix64 rng(5);
    for (int i = 0; i < 10; ++i) {
        Complex z(rng.uniform(-2, 2), rng.uniform(0.3, 2.0));
        double prev = z.imag();
        for (int k = 1; k <= flow.steps(); ++k) {
            const Complex g = forward_map(flow, z, flow.times[k]);
            CHECK(g.imag() <= prev + 1e-13);
            prev = g.imag();
        }
    }
}

TEST_CASE("forward_derivative: closed forms for constant driving") {
    const auto flow = DiscretizedFlow::build(kZero, 32);
    CHECK(forward_derivative(flow, Complex(3, 0), 0.0) == Complex(1, 0));
    CHECK(std::abs(forward_derivative(flow, Complex(3, 0), 1.0) -
                   Complex(3.0 / std::sqrt(13.0), 0)) <= 1e-14);
    const Complex di = forward_derivative(flow, Complex(0, 1), 1.0);
    CHECK(std::abs(di) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("log_derivative_integral agrees with the chain rule") {
    const auto flow0 = DiscretizedFlow::build(kZero, 64);
    CHECK(std::abs(log_derivative_integral(flow0, Complex(3, 0), 0.0)) == 0.0);
    CHECK(log_derivative_integral(flow0, Complex(3, 0), 1.0).real() ==
          doctest::Approx(std::log(3.0 / std::sqrt(13.0))).epsilon(1e-3));

    const auto sp = DrivingFunction::spiral(1.0, 1.0);
    const auto flow = DiscretizedFlow::build(sp, 4096);
    const Complex z(1, 2);
    const Complex lhs = log_derivative_integral(flow, z, 0.5);
    const Complex rhs = std::log(forward_derivative(flow, z, 0.5));
    CHECK(std::abs(lhs - rhs) <= 5e-3);
}

TEST_CASE("log-derivative quadrature converges to the chain rule") {
    // per-step midpoint evaluation of g at the half step is exact for the
    // piecewise-constant driver, so the quadrature is second order in the
    // step: errors shrink ~4x per halving
    const auto lam = DrivingFunction::linear(1.0, 1.0);
    const Complex z(0.5, 1.5);
    auto err_at = [&](int n) {
        const auto flow = DiscretizedFlow::build(lam, n);
        return std::abs(log_derivative_integral(flow, z, 1.0) -
                        std::log(forward_derivative(flow, z, 1.0)));
    };
    const double e1 = err_at(1024);
    const double e2 = err_at(2048);
    const double ratio = e1 / e2;
    CHECK(ratio >= 3.4);
    CHECK(ratio <= 4.6);
}

TEST_CASE("second_derivative: closed form and s = 0") {
    const auto flow = DiscretizedFlow::build(kZero, 32);
    CHECK(second_derivative(flow, Complex(3, 0), 0.0) == Complex(0, 0));
    // g(z) = sqrt(z^2+4): g'' = 4/(z^2+4)^{3/2}
    CHECK(second_derivative(flow, Complex(3, 0), 1.0).real() ==
          doctest::Approx(4.0 / std::pow(13.0, 1.5)).epsilon(1e-13));
}

TEST_CASE("second_derivative recurrence vs quadrature cross-check") {
    const auto lam = DrivingFunction::linear(1.0, 1.0);
    const auto flow = DiscretizedFlow::build(lam, 4096);
    const Complex z(1, 1);
    const Complex a = second_derivative(flow, z, 0.5);
    const Complex b = second_derivative_integral(flow, z, 0.5);
    CHECK(std::abs(a - b) <= 1e-2 * std::abs(a));
}

TEST_CASE("swallow_time") {
    const auto flow = DiscretizedFlow::build(kZero, 256);
    // (2i)^2 + 4t = 0 at t = 1
    const auto t1 = swallow_time(flow, Complex(0, 2));
    REQUIRE(t1.has_value());
    CHECK(*t1 == doctest::Approx(1.0));

    CHECK(!swallow_time(flow, Complex(1, 1)).has_value());

    // Im z > 2 sqrt(T): never swallowed, for any driver
    const auto lam = DrivingFunction::midpoint_random(0.8, 1.0, 17);
    const auto flow2 = DiscretizedFlow::build(lam, 256);
    CHECK(!swallow_time(flow2, Complex(0.3, 2.1)).has_value());

    // forward_map throws once the point is gone
    CHECK_THROWS_AS(forward_map(flow, Complex(0, 1.0), 1.0), SwallowedError);
}

TEST_CASE("graded grid keeps the capacity budget") {
    const auto lam = DrivingFunction::linear(1.0, 2.0);
    for (GridKind kind : {GridKind::Uniform, GridKind::GradedAtZero}) {
        const auto flow = DiscretizedFlow::build(lam, 77, kind);
        double cap = 0.0;
        for (double d : flow.increments) {
            CHECK(d > 0.0);
            cap += 2.0 * d;
        }
        CHECK(cap == doctest::Approx(2.0 * lam.horizon()).epsilon(1e-12));
        CHECK(flow.times.front() == 0.0);
        CHECK(flow.times.back() == doctest::Approx(2.0));
    }
}

TEST_CASE("flow serialization fields") {
    const auto lam = DrivingFunction::linear(1.0, 1.0);
    const auto flow = DiscretizedFlow::build(lam, 8);
    CHECK(flow.driving.size() == 8);
    CHECK(flow.times.size() == 9);
    // midpoint sampling
    CHECK(flow.driving[0] == doctest::Approx(0.5 / 8.0));
}
