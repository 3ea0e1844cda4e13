#include <doctest.h>

#include <cmath>

#include "loewner/tracer.hpp"

using namespace loewner;

TEST_CASE("vertical slit: composition is exact for constant driving") {
    const auto zero = DrivingFunction::constant(0.0, 1.0);
    const TracedSlit slit = trace(zero, 1024);
    CHECK(slit.points[0] == Complex(0, 0));
    double max_err = 0.0;
    for (int k = 0; k <= 1024; ++k) {
        const Complex expect(0.0, 2.0 * std::sqrt(slit.times[k]));
        max_err = std::max(max_err, std::abs(slit.points[k] - expect));
    }
    CHECK(max_err <= 1e-12);
}

TEST_CASE("spiral tip: gamma(1) = sqrt(kappa) + i sqrt(4-kappa)") {
    const auto sp = DrivingFunction::spiral(2.0, 1.0);
    const TracedSlit slit = trace(sp, 8192);
    const Complex expect(std::sqrt(2.0), std::sqrt(2.0));
    CHECK(std::abs(slit.points.back() - expect) <= 1e-3);
}

TEST_CASE("linear driver: gamma(s) = 2i sqrt(s) + (2/3)s + O(s^{3/2})") {
    const auto lin = DrivingFunction::linear(1.0, 1.0);
    const TracedSlit slit = trace(lin, 8192);
    const int k = static_cast<int>(std::lround(0.01 * 8192));
    const double t = slit.times[k];
    const Complex expect(2.0 / 3.0 * t, 2.0 * std::sqrt(t));
    CHECK(std::abs(slit.points[k] - expect) <= 5e-4);
}

TEST_CASE("trace invariants: base point, interior, cone") {
    const auto lam = DrivingFunction::midpoint_random(0.5, 1.0, 21);
    const TracedSlit slit = trace(lam, 2048);
    CHECK(slit.points[0].real() == lam(0.0));
    CHECK(slit.points[0].imag() == 0.0);
    for (int k = 1; k <= slit.steps(); ++k) CHECK(slit.points[k].imag() > 0.0);

    const auto rep = cone_check(slit, 0.5);
    CHECK(rep.pass);

    // sigma = 0: exactly on the 2i sqrt(t) axis
    const auto rep0 = cone_check(trace(DrivingFunction::constant(0.0, 1.0), 256), 0.0);
    CHECK(rep0.pass);
}

TEST_CASE("trace warns outside the validated regime") {
    const auto big = DrivingFunction::spiral(3.0, 1.0); // sigma = 2 sqrt(3) > 1
    const TracedSlit slit = trace(big, 512);
    CHECK(!slit.warnings.empty());
}

TEST_CASE("no self-intersection at trace resolution") {
    for (const auto& lam : {DrivingFunction::spiral(2.0, 1.0),
                            DrivingFunction::midpoint_random(0.5, 1.0, 5)}) {
        const TracedSlit slit = trace(lam, 1024);
        CHECK(min_nonadjacent_segment_distance(slit) > 0.0);
    }
}

TEST_CASE("sub-slit tips") {
    const auto zero = DrivingFunction::constant(0.0, 1.0);
    const SubSlitTip st = sub_slit_tip(zero, 0.3, 0.7, 512);
    CHECK(std::abs(st.gamma_st - Complex(0, 2.0 * std::sqrt(0.4))) <= 1e-13);
    CHECK(std::abs(st.tau_st - Complex(0, 2)) <= 1e-13);

    // linear driving: gamma(s,t) depends only on t-s
    const auto lin = DrivingFunction::linear(1.0, 1.0);
    const Complex a = sub_slit_tip(lin, 0.2, 0.3, 1024).gamma_st;
    const Complex b = sub_slit_tip(lin, 0.6, 0.7, 1024).gamma_st;
    CHECK(std::abs(a - b) <= 1e-10);

    // power family: |tau - 2i| <= c M (t-s)^{delta} for small windows
    const auto pw = DrivingFunction::power(1.0, 0.75, 1.0);
    const Complex tau1 = sub_slit_tip(pw, 0.5, 0.51, 1024).tau_st;
    const Complex tau2 = sub_slit_tip(pw, 0.5, 0.6, 1024).tau_st;
    CHECK(std::abs(tau1 - Complex(0, 2)) < std::abs(tau2 - Complex(0, 2)));
    CHECK(std::abs(tau2 - Complex(0, 2)) < 0.5);
}

TEST_CASE("constant-driving rigidity: tau = 2i only for constant windows") {
    // constant on [s,t] => tau = 2i within trace tolerance (already above);
    // non-constant => strictly away from 2i
    const auto lin = DrivingFunction::linear(1.0, 1.0);
    CHECK(std::abs(sub_slit_tip(lin, 0.2, 0.7, 1024).tau_st - Complex(0, 2)) > 1e-2);
}

TEST_CASE("scaling equivariance of the trace (Fact (a))") {
    const auto lam = DrivingFunction::power(0.5, 0.75, 2.0);
    const int n = 1024;
    const TracedSlit orig = trace(lam, n);
    const TracedSlit resc = trace(lam.rescaled(), n);
    const double rootT = std::sqrt(2.0);
    double max_err = 0.0;
    for (int k = 0; k <= n; ++k) {
        const Complex mapped = (orig.points[k] - orig.points[0]) / rootT;
        max_err = std::max(max_err, std::abs(resc.points[k] - mapped));
    }
    CHECK(max_err <= 2e-3);
}

TEST_CASE("stationarity of the flow (Fact (b))") {
    const auto lam = DrivingFunction::spiral(1.0, 1.0);
    const int n = 4096;
    const double s = 0.5, u = 0.25;
    const auto flow = DiscretizedFlow::build(lam, n);
    const Complex tip = tip_at(lam, s + u, n);
    const Complex lhs = forward_map(flow, tip, s) - lam(s);
    const Complex rhs = sub_slit_tip(lam, s, s + u, n).gamma_st;
    CHECK(std::abs(lhs - rhs) <= 2e-3);
}

TEST_CASE("reverse-ode trace agrees with composition") {
    const auto lam = DrivingFunction::linear(1.0, 1.0);
    const int n = 1024;
    const TracedSlit a = trace(lam, n, TraceMethod::Composition);
    const TracedSlit b = trace(lam, n, TraceMethod::ReverseOde);
    double sup = 0.0;
    for (int k = 0; k <= n; ++k) sup = std::max(sup, std::abs(a.points[k] - b.points[k]));
    CHECK(sup <= 5e-3);
}
