#include "loewner/tip.hpp"

#include <cmath>
#include <limits>

#include "loewner/parallel.hpp"

namespace loewner {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr Complex kTwoI{0.0, 2.0};

int effective_n_tip(const QuadratureSpec& spec) {
    return spec.n_tip > 0 ? spec.n_tip : 1024;
}

// stable form of d_s gamma(s-u,s); see header
Complex dgamma_stable(Complex tau, Complex L_w, double u, double lambda_prime) {
    const Complex bracket = kI * (tau - kTwoI) / tau + kI * (std::exp(L_w) - 1.0);
    return bracket / std::sqrt(u) - lambda_prime;
}

} // namespace

Complex TipTable::L_at_mid(int j) const {
    // partial cell [e_j, m_j] under the sqrt rule
    const double w = 2.0 * (std::sqrt(mids[j]) - std::sqrt(edges[j])) / std::sqrt(mids[j]);
    return prefix_L[j] + bracket[j] * w;
}

TipTable build_tip_table(const DrivingFunction& lambda, double s, double u_max,
                         QuadratureSpec spec) {
    if (!(s > 0.0 && s <= lambda.horizon() * (1.0 + 1e-12)))
        throw std::invalid_argument("tip table: requires 0 < s <= T");
    if (!(u_max > 0.0 && u_max <= s * (1.0 + 1e-12)))
        throw std::invalid_argument("tip table: requires 0 < u_max <= s");
    if (spec.delta_eff <= 0.0) spec.delta_eff = lambda.lip_exponent_hint();
    spec.n_tip = effective_n_tip(spec);

    TipTable tbl;
    tbl.s = s;
    tbl.u_max = std::min(u_max, s);
    tbl.spec = spec;

    const int n = spec.n_quad;
    const double p = 1.0 / spec.delta_eff;
    tbl.edges.resize(n + 1);
    tbl.mids.resize(n);
    for (int j = 0; j <= n; ++j)
        tbl.edges[j] = tbl.u_max * std::pow(static_cast<double>(j) / n, p);
    for (int j = 0; j < n; ++j) tbl.mids[j] = 0.5 * (tbl.edges[j] + tbl.edges[j + 1]);

    tbl.tau.assign(n, Complex{});
    tbl.bracket.assign(n, Complex{});
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
        const double u = tbl.mids[j];
        const Complex g = window_tip(lambda, s - u, u, spec.n_tip);
        const Complex tau = g / std::sqrt(u);
        tbl.tau[j] = tau;
        tbl.bracket[j] = 0.5 + 2.0 / (tau * tau);
    });

    tbl.prefix_L.assign(n + 1, Complex{});
    for (int j = 0; j < n; ++j) {
        // int_cell bracket(v)/v dv with bracket ~ bracket(m_j) sqrt(v/m_j)
        const double w =
            2.0 * (std::sqrt(tbl.edges[j + 1]) - std::sqrt(tbl.edges[j])) / std::sqrt(tbl.mids[j]);
        tbl.prefix_L[j + 1] = tbl.prefix_L[j] + tbl.bracket[j] * w;
    }
    tbl.L_total = tbl.prefix_L[n];

    // the bracket must decay toward u -> 0 for the integral to exist
    if (n >= 3) {
        const double b0 = std::abs(tbl.bracket[0]);
        const double b1 = std::abs(tbl.bracket[1]);
        const double b2 = std::abs(tbl.bracket[2]);
        if (b0 > 0.1 && b0 >= b1 && b1 >= b2)
            tbl.warnings.push_back("integrand does not decay on the finest nodes; "
                                   "the singularity may be non-integrable");
    }
    if (lambda.family() == Family::MidpointRandom)
        tbl.warnings.push_back("driver is only Lip(1/2); tip integrals assume Lip(1/2+delta)");
    return tbl;
}

Complex L_of(const DrivingFunction& lambda, double s, int n_quad, int n_tip) {
    QuadratureSpec spec;
    spec.n_quad = n_quad;
    spec.n_tip = n_tip;
    spec.delta_eff = 0.0;
    return build_tip_table(lambda, s, s, spec).L_total;
}

Complex gamma_prime(const DrivingFunction& lambda, double s, int n_quad, int n_tip) {
    return (kI / std::sqrt(s)) * std::exp(L_of(lambda, s, n_quad, n_tip));
}

Complex L_window(const DrivingFunction& lambda, double s, double u, int n_quad, int n_tip) {
    QuadratureSpec spec;
    spec.n_quad = n_quad;
    spec.n_tip = n_tip;
    spec.delta_eff = 0.0;
    return build_tip_table(lambda, s, u, spec).L_total;
}

Complex dgamma_ds(const DrivingFunction& lambda, double s, double u, int n_quad, int n_tip) {
    if (!(u > 0.0 && u < s))
        throw std::invalid_argument("dgamma_ds: requires 0 < u < s");
    const int nt = n_tip > 0 ? n_tip : 1024;
    const Complex g = window_tip(lambda, s - u, u, nt);
    const Complex tau = g / std::sqrt(u);
    const Complex Lw = L_window(lambda, s, u, n_quad, n_tip);
    return dgamma_stable(tau, Lw, u, lambda.derivative_or_fd(s - u));
}

namespace {

Complex q_from_table(const DrivingFunction& lambda, const TipTable& tbl) {
    const int n = tbl.spec.n_quad;
    const double floor_u = tbl.spec.u_floor_frac * tbl.u_max;
    std::vector<Complex> terms(n, Complex{});
    for (int j = 0; j < n; ++j) {
        const double u = tbl.mids[j];
        if (u < floor_u) continue;
        // singular bracket of d_s gamma; below ~32 eps it is rounding noise
        // of the sub-traces (constant driving gives exactly zero)
        const Complex part =
            kI * (tbl.tau[j] - kTwoI) / tbl.tau[j] + kI * (std::exp(tbl.L_at_mid(j)) - 1.0);
        const double lp = lambda.derivative_or_fd(tbl.s - u);
        const double gate = 32.0 * std::numeric_limits<double>::epsilon();
        if (std::abs(part) < gate && std::fabs(lp) * std::sqrt(u) < gate) continue;
        const Complex dg = part / std::sqrt(u) - lp;
        const Complex g = tbl.tau[j] * std::sqrt(u);
        terms[j] = dg / (g * g * g) * tbl.sqrt_weight(j);
    }
    return pairwise_sum(terms);
}

} // namespace

Complex Q_of(const DrivingFunction& lambda, double s, int n_quad, int n_tip) {
    QuadratureSpec spec;
    spec.n_quad = n_quad;
    spec.n_tip = n_tip;
    spec.delta_eff = 0.0;
    const TipTable tbl = build_tip_table(lambda, s, s, spec);
    return q_from_table(lambda, tbl);
}

Complex gamma_second(const DrivingFunction& lambda, double s, int n_quad, int n_tip) {
    return *tip_frame(lambda, s, n_quad, true, n_tip).gamma_second;
}

TipFrame tip_frame(const DrivingFunction& lambda, double s, int n_quad, bool with_second,
                   int n_tip) {
    QuadratureSpec spec;
    spec.n_quad = n_quad;
    spec.n_tip = n_tip;
    spec.delta_eff = 0.0;
    const TipTable tbl = build_tip_table(lambda, s, s, spec);

    TipFrame frame;
    frame.s = s;
    frame.quadrature = tbl.spec;
    frame.warnings = tbl.warnings;
    frame.L = tbl.L_total;
    frame.gamma_prime = (kI / std::sqrt(s)) * std::exp(frame.L);
    frame.gamma = tip_at(lambda, s, 2 * tbl.spec.n_tip);
    if (with_second) {
        frame.Q = q_from_table(lambda, tbl);
        frame.gamma_second =
            2.0 * frame.gamma_prime / (frame.gamma * frame.gamma) - 4.0 * frame.gamma_prime * *frame.Q;
    }
    return frame;
}

GammaFrame gamma_frame(const DrivingFunction& lambda, double t, int n_quad, int n_tip) {
    const double rootT = std::sqrt(lambda.horizon());
    if (!(t >= 0.0 && t <= rootT * (1.0 + 1e-12)))
        throw std::invalid_argument("gamma_frame: requires 0 <= t <= sqrt(T)");
    GammaFrame frame;
    frame.t = t;
    if (t == 0.0) {
        frame.Gamma = Complex(lambda(0.0), 0.0);
        frame.Gamma_prime = kTwoI; // forced limit
        return frame;
    }
    const double s = t * t;
    frame.Gamma = tip_at(lambda, s, n_tip > 0 ? 2 * n_tip : 2048);
    frame.Gamma_prime = kTwoI * std::exp(L_of(lambda, s, n_quad, n_tip));
    return frame;
}

GammaSecond0 gamma_second0(const DrivingFunction& lambda, double t0, int n_quad, int n_tip) {
    const double rootT = std::sqrt(lambda.horizon());
    if (t0 <= 0.0) t0 = 0.2 * rootT;
    if (t0 > rootT) throw std::invalid_argument("gamma_second0: t0 must be <= sqrt(T)");

    Complex D[3];
    for (int j = 0; j < 3; ++j) {
        const double t = t0 / static_cast<double>(1 << j);
        const Complex gp = kTwoI * std::exp(L_of(lambda, t * t, n_quad, n_tip));
        D[j] = (gp - kTwoI) / t;
    }
    const Complex r1a = 2.0 * D[1] - D[0];
    const Complex r1b = 2.0 * D[2] - D[1];
    const Complex r2 = (4.0 * r1b - r1a) / 3.0;

    GammaSecond0 out;
    out.estimate = r2;
    out.spread = std::abs(r1b - r1a) + std::abs(r2 - r1b);
    double lp0;
    if (lambda.has_derivative()) {
        lp0 = lambda.derivative(0.0);
    } else {
        const double h = lambda.horizon() / static_cast<double>(1 << 16);
        lp0 = (lambda(h) - lambda(0.0)) / h;
    }
    out.prediction = (4.0 / 3.0) * lp0;
    out.converged = out.spread <= 0.1 * std::max(std::abs(out.estimate), 1e-12);
    return out;
}

} // namespace loewner
