#pragma once

#include <string>
#include <vector>

#include "loewner/flow.hpp"
#include "loewner/reports.hpp"

namespace loewner {

enum class TraceMethod {
    Composition, // exact inverse maps of the piecewise-constant flow
    ReverseOde,  // RK4 on the reverse-flow IVP; independent oracle
};

struct TracedSlit {
    std::vector<double> times;   // t_0 = 0 ... t_n = T
    std::vector<Complex> points; // gamma(t_k)
    TraceMethod method = TraceMethod::Composition;
    std::string driving_ref;     // provenance of the driver
    std::vector<std::string> warnings;

    int steps() const { return static_cast<int>(times.size()) - 1; }
    // point at the grid node nearest to t
    Complex at(double t) const;
};

struct SubSlitTip {
    double s = 0.0;
    double t = 0.0;
    Complex gamma_st; // gamma(s,t) = g_s(gamma(t)) - lambda(s)
    Complex tau_st;   // gamma(s,t) / sqrt(t-s)
};

// Tip of the window driver v -> lambda(a+v) - lambda(a) at capacity-time len,
// by inverse composition over n uniform steps. This is gamma(a, a+len).
Complex window_tip(const DrivingFunction& lambda, double a, double len, int n);

// gamma(t) for the driver itself (single tip, O(n)).
Complex tip_at(const DrivingFunction& lambda, double t, int n);

// Full trace over an n-step uniform grid. Composition is exact for constant
// driving; reverse-ode integrates the IVP h' = -2/(h - xi(u)), xi(u) =
// lambda(t_k - u), from lambda(t_k) + i sqrt(delta) with fixed RK4 at 4
// substeps per grid step. Emits a warning when the sampled Lip(1/2) seminorm
// exceeds 1 (outside the validated regime); throws if a traced point leaves
// the closed half-plane by more than 1e-9.
TracedSlit trace(const DrivingFunction& lambda, int n,
                 TraceMethod method = TraceMethod::Composition, int threads = 0);

// gamma(s,t) via the stationarity property: the tip at time t-s of the
// shifted, rebased driver.
SubSlitTip sub_slit_tip(const DrivingFunction& lambda, double s, double t, int n);

// Per-node box bounds of the sigma-cone: |Re gamma|/sqrt(t) <= sigma + tol,
// Im gamma/sqrt(t) in [sqrt(4-sigma^2) - tol, 2 + tol], tol = 5 n^{-1/2}.
VerificationReport cone_check(const TracedSlit& slit, double sigma);

// Minimum distance between non-adjacent trace segments (self-intersection
// diagnostic). Uses a uniform spatial hash; returns +inf for n > 2^14 where
// the check is skipped.
double min_nonadjacent_segment_distance(const TracedSlit& slit);

} // namespace loewner
