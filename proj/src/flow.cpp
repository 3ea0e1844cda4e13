#include "loewner/flow.hpp"

#include <cmath>

namespace loewner {

namespace {

// strict interior of the removed slit: the tip itself maps to the driving
// value and is a legitimate boundary evaluation for the elementary map
bool inside_removed_slit(Complex z, double lambda0, double delta, double tol) {
    return std::fabs(z.real() - lambda0) <= tol && z.imag() < 2.0 * std::sqrt(delta) - tol;
}

// Absorption test used while composing a flow: tip included (it is absorbed
// at the end of the step). Detecting before the degenerate square root keeps
// the test robust: after it, rounding noise turns into O(sqrt(eps))
// displacement that a fixed tolerance cannot see.
bool absorbed_by_step(Complex z, double lambda0, double delta, double tol) {
    return std::fabs(z.real() - lambda0) <= tol &&
           z.imag() <= 2.0 * std::sqrt(delta) + tol;
}

} // namespace

Complex sqrt_upper(Complex zeta, double sign_ref) {
    Complex w = std::sqrt(zeta); // principal: Re >= 0
    if (w.imag() < 0.0) return -w;
    if (w.imag() == 0.0 && sign_ref < 0.0) return -w;
    return w;
}

Complex elementary_forward(Complex z, double lambda0, double delta) {
    if (delta < 0.0) throw std::invalid_argument("elementary_forward: delta must be >= 0");
    const Complex d = z - lambda0;
    if (delta > 0.0 && inside_removed_slit(z, lambda0, delta, 1e-14))
        throw SwallowedError(z, 0.0);
    return lambda0 + sqrt_upper(d * d + 4.0 * delta, d.real());
}

Complex elementary_inverse(Complex w, double lambda0, double delta) {
    if (delta < 0.0) throw std::invalid_argument("elementary_inverse: delta must be >= 0");
    const Complex d = w - lambda0;
    return lambda0 + sqrt_upper(d * d - 4.0 * delta, d.real());
}

double DiscretizedFlow::swallow_tolerance() const {
    return 1e-9 * std::sqrt(horizon());
}

DiscretizedFlow DiscretizedFlow::build(const DrivingFunction& lambda, int n, GridKind kind) {
    if (n < 1) throw std::invalid_argument("DiscretizedFlow: need n >= 1 steps");
    const double T = lambda.horizon();
    DiscretizedFlow flow;
    flow.times.resize(n + 1);
    flow.driving.resize(n);
    flow.increments.resize(n);
    flow.node_values.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double x = static_cast<double>(k) / n;
        flow.times[k] = (kind == GridKind::Uniform) ? T * x : T * x * x;
        flow.node_values[k] = lambda(flow.times[k]);
    }
    flow.times[n] = T;
    for (int k = 0; k < n; ++k) {
        flow.increments[k] = flow.times[k + 1] - flow.times[k];
        flow.driving[k] = lambda(0.5 * (flow.times[k] + flow.times[k + 1]));
    }
    return flow;
}

int node_index(const DiscretizedFlow& flow, double s) {
    const auto& t = flow.times;
    if (s <= t.front()) return 0;
    if (s >= t.back()) return static_cast<int>(t.size()) - 1;
    const auto it = std::lower_bound(t.begin(), t.end(), s);
    const int hi = static_cast<int>(it - t.begin());
    return (t[hi] - s <= s - t[hi - 1]) ? hi : hi - 1;
}

Complex forward_map(const DiscretizedFlow& flow, Complex z, double s) {
    const int idx = node_index(flow, s);
    const double tol = flow.swallow_tolerance();
    for (int k = 0; k < idx; ++k) {
        if (std::abs(z - flow.driving[k]) < tol ||
            absorbed_by_step(z, flow.driving[k], flow.increments[k], tol))
            throw SwallowedError(z, flow.times[k]);
        z = elementary_forward(z, flow.driving[k], flow.increments[k]);
    }
    return z;
}

Complex forward_derivative(const DiscretizedFlow& flow, Complex z, double s) {
    const int idx = node_index(flow, s);
    const double tol = flow.swallow_tolerance();
    Complex deriv = 1.0;
    for (int k = 0; k < idx; ++k) {
        if (std::abs(z - flow.driving[k]) < tol)
            throw SwallowedError(z, flow.times[k]);
        const Complex zn = elementary_forward(z, flow.driving[k], flow.increments[k]);
        // d/dz [l + sqrt((z-l)^2 + 4d)] = (z-l)/(g-l)
        deriv *= (z - flow.driving[k]) / (zn - flow.driving[k]);
        z = zn;
    }
    return deriv;
}

Complex log_derivative_integral(const DiscretizedFlow& flow, Complex z, double s) {
    const int idx = node_index(flow, s);
    const double tol = flow.swallow_tolerance();
    Complex acc = 0.0;
    for (int k = 0; k < idx; ++k) {
        if (std::abs(z - flow.driving[k]) < tol)
            throw SwallowedError(z, flow.times[k]);
        const double half = 0.5 * flow.increments[k];
        const Complex zmid = elementary_forward(z, flow.driving[k], half);
        const Complex q = zmid - flow.driving[k];
        acc -= 2.0 * flow.increments[k] / (q * q);
        z = elementary_forward(zmid, flow.driving[k], half);
    }
    return acc;
}

Complex second_derivative(const DiscretizedFlow& flow, Complex z, double s) {
    const int idx = node_index(flow, s);
    const double tol = flow.swallow_tolerance();
    Complex d1 = 1.0, d2 = 0.0;
    for (int k = 0; k < idx; ++k) {
        if (std::abs(z - flow.driving[k]) < tol)
            throw SwallowedError(z, flow.times[k]);
        const Complex zn = elementary_forward(z, flow.driving[k], flow.increments[k]);
        const Complex w = zn - flow.driving[k];
        const Complex p1 = (z - flow.driving[k]) / w;            // phi'
        const Complex p2 = 4.0 * flow.increments[k] / (w * w * w); // phi''
        d2 = p2 * d1 * d1 + p1 * d2;
        d1 *= p1;
        z = zn;
    }
    return d2;
}

Complex second_derivative_integral(const DiscretizedFlow& flow, Complex z, double s) {
    const int idx = node_index(flow, s);
    const double tol = flow.swallow_tolerance();
    Complex deriv = 1.0;
    Complex acc = 0.0;
    for (int k = 0; k < idx; ++k) {
        if (std::abs(z - flow.driving[k]) < tol)
            throw SwallowedError(z, flow.times[k]);
        const double half = 0.5 * flow.increments[k];
        const Complex zmid = elementary_forward(z, flow.driving[k], half);
        const Complex dmid = deriv * (z - flow.driving[k]) / (zmid - flow.driving[k]);
        const Complex q = zmid - flow.driving[k];
        acc += dmid * flow.increments[k] / (q * q * q);
        const Complex zn = elementary_forward(zmid, flow.driving[k], half);
        deriv = dmid * (zmid - flow.driving[k]) / (zn - flow.driving[k]);
        z = zn;
    }
    return 4.0 * deriv * acc;
}

std::optional<double> swallow_time(const DiscretizedFlow& flow, Complex z) {
    if (!in_closed_half_plane(z))
        throw std::invalid_argument("swallow_time: z must lie in the closed upper half-plane");
    const double tol = flow.swallow_tolerance();
    const int n = flow.steps();
    auto lambda_at = [&](int k) {
        return flow.node_values.empty() ? flow.driving[std::min(k, n - 1)]
                                        : flow.node_values[k];
    };
    for (int k = 0; k <= n; ++k) {
        if (std::abs(z - lambda_at(k)) < tol) return flow.times[k];
        if (k == n) break;
        if (absorbed_by_step(z, flow.driving[k], flow.increments[k], tol))
            return flow.times[k + 1];
        z = elementary_forward(z, flow.driving[k], flow.increments[k]);
    }
    return std::nullopt;
}

} // namespace loewner
