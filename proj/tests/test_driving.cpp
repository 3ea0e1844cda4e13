#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "loewner/driving.hpp"

using namespace loewner;

TEST_CASE("family closed forms") {
    const auto zero = DrivingFunction::constant(0.0, 1.0);
    CHECK(zero(0.0) == 0.0);
    CHECK(zero(0.7) == 0.0);

    const auto sp = DrivingFunction::spiral(2.0, 1.0);
    CHECK(sp(1.0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(sp(0.0) == doctest::Approx(0.0));

    const auto lin = DrivingFunction::linear(1.0, 1.0);
    CHECK(lin(0.25) == doctest::Approx(0.25).epsilon(1e-15));

    const auto pow75 = DrivingFunction::power(1.0, 0.75, 1.0);
    CHECK(pow75(0.5) == doctest::Approx(std::pow(0.5, 0.75)).epsilon(1e-15));

    const auto quad = DrivingFunction::power(0.1, 2.0, 1.0, 0.3); // 0.3 t + 0.1 t^2
    CHECK(quad(2.0) == doctest::Approx(0.3 * 2.0 + 0.1 * 4.0).epsilon(1e-15));
}

TEST_CASE("parameter validation names the violated bound") {
    CHECK_THROWS_WITH_AS(DrivingFunction::spiral(4.0, 1.0),
                         doctest::Contains("kappa"), std::invalid_argument);
    CHECK_THROWS_AS(DrivingFunction::spiral(1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(DrivingFunction::constant(0.0, -1.0), std::invalid_argument);
}

TEST_CASE("derivative matches centered differences") {
    for (const auto& lam : {DrivingFunction::linear(0.7, 1.0),
                            DrivingFunction::power(1.0, 0.75, 1.0),
                            DrivingFunction::spiral(1.0, 1.0)}) {
        REQUIRE(lam.has_derivative());
        const double h = 1e-5;
        for (double t : {0.2, 0.5, 0.8}) {
            const double fd = (lam(t + h) - lam(t - h)) / (2.0 * h);
            const double d = lam.derivative(t);
            CHECK(std::fabs(fd - d) <= 1e-3 * (1.0 + std::fabs(d)));
        }
    }
    // weierstrass carries frequencies up to 2^16: the h^2 |lambda'''| term
    // needs a smaller probe step
    const auto w = DrivingFunction::weierstrass(0.5, 0.75, 1.0, 3);
    const double h = 1e-8;
    for (double t : {0.2, 0.5, 0.8}) {
        const double fd = (w(t + h) - w(t - h)) / (2.0 * h);
        const double d = w.derivative(t);
        CHECK(std::fabs(fd - d) <= 1e-3 * (1.0 + std::fabs(d)));
    }
}

TEST_CASE("lip_half_seminorm") {
    const auto zero = DrivingFunction::constant(0.0, 1.0);
    CHECK(lip_half_seminorm(zero, 256).value == 0.0);

    // linear b=1 on [0,1]: sup b sqrt(dt) attained at dt = 1
    const auto lin = DrivingFunction::linear(1.0, 1.0);
    CHECK(lip_half_seminorm(lin, 4096).value == doctest::Approx(1.0).epsilon(1e-12));

    // spiral: sigma = 2 sqrt(kappa), approached from below as the grid refines
    const auto sp = DrivingFunction::spiral(1.0, 1.0);
    const double v1 = lip_half_seminorm(sp, 1024).value;
    const double v2 = lip_half_seminorm(sp, 4096).value;
    CHECK(v2 <= 2.0 + 1e-12);
    CHECK(v2 >= v1 - 1e-12);
    CHECK(v2 > 1.9);
}

TEST_CASE("seminorm is nondecreasing on nested grids") {
    const auto lam = DrivingFunction::weierstrass(0.5, 0.6, 1.0, 11);
    double prev = 0.0;
    for (int n : {64, 128, 256, 512, 1024}) {
        const double v = lip_half_seminorm(lam, n).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    // dyadic separations are a subset of all pairs
    CHECK(lip_half_seminorm(lam, 512, NormReport::PairScheme::DyadicPairs).value <=
          lip_half_seminorm(lam, 512, NormReport::PairScheme::AllPairs).value + 1e-12);
}

TEST_CASE("holder_norm") {
    const auto zero = DrivingFunction::constant(0.0, 1.0);
    CHECK(holder_norm(zero, 0, 0.5, 256).value == 0.0);

    // linear b=1 on [0,1], n=1, alpha=1/2: sup|lambda| + sup|lambda'| + 0 = 2
    const auto lin = DrivingFunction::linear(1.0, 1.0);
    CHECK(holder_norm(lin, 1, 0.5, 1024).value == doctest::Approx(2.0).epsilon(1e-9));

    // power M=1 beta=0.75 as C^{0,0.75} on [0,1]: sup = 1, seminorm = 1
    const auto pw = DrivingFunction::power(1.0, 0.75, 1.0);
    CHECK(holder_norm(pw, 0, 0.75, 2048).value == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("rescale: Fact (a)") {
    // lambda(t) = b t on [0,T] rescales to b sqrt(T) s on [0,1]
    const auto lin = DrivingFunction::linear(2.0, 4.0);
    const auto resc = lin.rescaled();
    CHECK(resc.horizon() == 1.0);
    CHECK(resc(0.5) == doctest::Approx(2.0 * std::sqrt(4.0) * 0.5).epsilon(1e-12));
    CHECK(resc(0.0) == 0.0);

    const auto c = DrivingFunction::constant(3.0, 2.0).rescaled();
    CHECK(c(0.3) == doctest::Approx(0.0));

    // spiral kappa=1 on [0,1] is a fixed point (T = 1, lambda(0) = 0)
    const auto sp = DrivingFunction::spiral(1.0, 1.0);
    const auto sp2 = sp.rescaled();
    for (double t : {0.1, 0.5, 0.9}) CHECK(sp2(t) == doctest::Approx(sp(t)).epsilon(1e-12));

    // seminorm preserved
    for (const auto& lam : {DrivingFunction::power(0.8, 0.75, 0.7),
                            DrivingFunction::midpoint_random(0.5, 2.0, 9)}) {
        const double a = lip_half_seminorm(lam, 2048).value;
        const double b = lip_half_seminorm(lam.rescaled(), 2048).value;
        CHECK(std::fabs(a - b) <= 1e-6 * (1.0 + a));
    }
}

TEST_CASE("shift: Fact (b)") {
    const auto lin = DrivingFunction::linear(1.0, 1.0);
    const auto sh = lin.shifted(0.5);
    CHECK(sh.horizon() == doctest::Approx(0.5));
    CHECK(sh(0.2) == doctest::Approx(0.7).epsilon(1e-15));

    const auto c = DrivingFunction::constant(2.0, 1.0).shifted(0.25);
    CHECK(c(0.1) == 2.0);

    // composition law: shifting twice equals shifting once by the sum
    const auto w = DrivingFunction::weierstrass(0.5, 0.75, 1.0, 7);
    const auto once = w.shifted(0.3);
    const auto twice = w.shifted(0.1).shifted(0.2);
    for (double u : {0.0, 0.2, 0.5, 0.69})
        CHECK(twice(u) == doctest::Approx(once(u)).epsilon(1e-12));
}

TEST_CASE("omega: second differences") {
    const auto c = DrivingFunction::constant(1.0, 1.0);
    CHECK(omega(c, 0.5, 0.2, 0.1) == 0.0);

    const auto lin = DrivingFunction::linear(2.0, 1.0);
    CHECK(omega(lin, 0.5, 0.2, 0.1) <= 1e-14);

    // lambda = t^2: the second difference telescopes to 2 eps (u - v), sup at v=0
    const auto quad = DrivingFunction::power(1.0, 2.0, 1.0);
    CHECK(omega(quad, 0.5, 0.1, 0.05) == doctest::Approx(0.01).epsilon(1e-10));

    CHECK_THROWS_AS(omega(quad, 0.9, 0.1, 0.2), std::domain_error);
}

TEST_CASE("omega bounds from the driver class") {
    // power family with exponent 1/2+delta: omega <= 2 M min(u,eps)^{1/2+delta}
    const double M = 1.0, delta = 0.25;
    const auto pw = DrivingFunction::power(M, 0.5 + delta, 1.0);
    for (double s : {0.3, 0.5, 0.7}) {
        for (double u : {0.01, 0.05, 0.2}) {
            for (double eps : {0.01, 0.1}) {
                if (s + eps > 1.0 || u > s) continue;
                const double bound = 2.0 * M * std::pow(std::min(u, eps), 0.5 + delta);
                CHECK(omega(pw, s, u, eps) <= bound + 1e-12);
            }
        }
    }

    // C^{1,alpha} families: omega <= M' (eps^alpha u if u<=eps else u^alpha eps)
    for (const auto& lam : {DrivingFunction::linear(1.0, 1.0),
                            DrivingFunction::power(1.0, 2.0, 1.0)}) {
        const double alpha = 1.0;
        const double Mn = holder_norm(lam, 1, alpha, 512).value;
        for (double u : {0.02, 0.1}) {
            for (double eps : {0.03, 0.15}) {
                const double s = 0.5;
                const double bound = Mn * (u <= eps ? std::pow(eps, alpha) * u
                                                    : std::pow(u, alpha) * eps);
                CHECK(omega(lam, s, u, eps) <= bound + 1e-12);
            }
        }
    }
}

TEST_CASE("omega window-exchange symmetry") {
    const auto w = DrivingFunction::weierstrass(0.5, 0.75, 1.0, 5);
    const double s = 0.6, u = 0.15, eps = 0.1;
    // exchanging the two windows flips the sign inside |.|: same supremum
    const double fwd = omega(w, s, u, eps);
    double rev = 0.0;
    const int n = 512;
    const double la = w(s - u), lb = w(s + eps - u);
    for (int i = 0; i <= n; ++i) {
        const double v = u * i / n;
        rev = std::max(rev, std::fabs(w(s - v) - la - w(s + eps - v) + lb));
    }
    CHECK(fwd == doctest::Approx(rev).epsilon(1e-12));
}

TEST_CASE("midpoint-random hits the requested seminorm") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto lam = DrivingFunction::midpoint_random(0.5, 1.0, seed);
        CHECK(lam(0.0) == 0.0);
        // rescaled to sigma on its construction grid; a finer probe stays close
        const double v = lip_half_seminorm(lam, 4096).value;
        CHECK(v == doctest::Approx(0.5).epsilon(0.02));
    }
    const auto z = DrivingFunction::midpoint_random(0.0, 1.0, 4);
    CHECK(z(0.37) == 0.0);
}

TEST_CASE("weierstrass normalization and determinism") {
    const auto w1 = DrivingFunction::weierstrass(0.5, 0.75, 1.0, 42);
    const auto w2 = DrivingFunction::weierstrass(0.5, 0.75, 1.0, 42);
    for (double t : {0.1, 0.3, 0.9}) CHECK(w1(t) == w2(t));
    // sampled C^beta seminorm == M by construction
    const auto norm = holder_norm(w1, 0, 0.75, 2048);
    const double sup = [&] {
        double s = 0.0;
        for (int i = 0; i <= 2048; ++i) s = std::max(s, std::fabs(w1(i / 2048.0)));
        return s;
    }();
    CHECK(norm.value - sup == doctest::Approx(0.5).epsilon(0.02));

    // beta > 1: lambda' is the normalized C^{beta-1} sum
    const auto wi = DrivingFunction::weierstrass(0.5, 1.75, 1.0, 42);
    REQUIRE(wi.has_derivative());
    CHECK(wi(0.0) == 0.0);
    const double h = 1e-6;
    CHECK(wi.derivative(0.5) ==
          doctest::Approx((wi(0.5 + h) - wi(0.5 - h)) / (2 * h)).epsilon(1e-4));
}
