#include "loewner/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "loewner/parallel.hpp"

namespace loewner {

namespace {

std::string describe(const DrivingFunction& lambda) {
    std::ostringstream os;
    os << family_name(lambda.family());
    for (const auto& [k, v] : lambda.params()) os << " " << k << "=" << v;
    if (lambda.seed()) os << " seed=" << *lambda.seed();
    if (lambda.is_derived()) os << " (derived)";
    return os.str();
}

Complex reverse_ode_tip(const DrivingFunction& lambda, double tk, double delta) {
    // xi(u) = lambda(t_k - u); start at lambda(t_k) + i y0, y0 = 2 sqrt(delta/4).
    // The initial height carries delta/4 of capacity, so integrating to
    // u = t_k - delta/4 lands on gamma(t_k) without the O(delta) bias.
    const double y0 = std::sqrt(delta);
    const double h = 0.25 * delta;
    const long steps = std::lround((tk - 0.25 * delta) / h);
    Complex z(lambda(tk), y0);
    auto rhs = [&](double u, Complex w) { return -2.0 / (w - lambda(tk - u)); };
    double u = 0.0;
    for (long i = 0; i < steps; ++i) {
        const Complex k1 = rhs(u, z);
        const Complex k2 = rhs(u + 0.5 * h, z + 0.5 * h * k1);
        const Complex k3 = rhs(u + 0.5 * h, z + 0.5 * h * k2);
        const Complex k4 = rhs(u + h, z + h * k3);
        z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        u += h;
    }
    return z;
}

double segment_distance(Complex a0, Complex a1, Complex b0, Complex b1);

} // namespace

Complex TracedSlit::at(double t) const {
    const int n = steps();
    const double T = times.back();
    int k = static_cast<int>(std::lround(t / T * n));
    k = std::clamp(k, 0, n);
    return points[k];
}

namespace {

// Local Lip(1/2) seminorm of the driver at the right end of the window,
// probed on scales from the finest cell upward. Drivers that are smooth at
// the endpoint give ~sqrt(delta) values; a sqrt-type endpoint (spiral at
// t = 1) gives its full local constant.
double endpoint_sigma(const DrivingFunction& lambda, double a, double len, int n) {
    const double t_end = a + len;
    double sigma = 0.0;
    // small scales only: an interior smooth point reads ~ lambda' sqrt(tau),
    // a sqrt-type endpoint keeps its full constant at every scale
    const double tau_max = std::min(len, 64.0 * len / n);
    for (double tau = len / n; tau <= tau_max * (1.0 + 1e-12); tau *= 4.0)
        sigma = std::max(sigma, std::fabs(lambda.tail_increment(t_end, tau)) / std::sqrt(tau));
    return sigma;
}

// Grading exponent for the cells nearest the evaluated tip. Empirically the
// tip error of the composed flow decays like n^{-p (1 - sigma^2/16)} when
// cells are graded as u ~ (j/n)^p toward the tip (u = distance from the
// evaluation time), so p = 1.125/(1 - sigma^2/16) restores first order with
// a small safety factor. Smooth drivers have sigma ~ sqrt(cell) and get an
// essentially uniform grid.
double tip_grading_exponent(double sigma) {
    const double s2 = std::min(sigma * sigma, 12.0);
    const double p = 1.125 / (1.0 - s2 / 16.0);
    return p <= 1.25 ? 1.0 : p; // mild cases: plain uniform grid
}

} // namespace

Complex window_tip(const DrivingFunction& lambda, double a, double len, int n) {
    if (n < 1) throw std::invalid_argument("window_tip: n >= 1 required");
    if (len <= 0.0) throw std::invalid_argument("window_tip: len > 0 required");
    const double t_end = a + len;
    const double p = tip_grading_exponent(endpoint_sigma(lambda, a, len, n));

    // The chain runs rebased at lambda(t_end): near-tip arithmetic stays at
    // small magnitudes and the driving enters through tail_increment, so a
    // singular endpoint does not cost cancellation digits that the winding
    // would amplify.
    Complex w = 0.0;
    double d_lo = 0.0;
    for (int j = n - 1; j >= 0; --j) {
        const double x = static_cast<double>(n - j) / n;
        const double d_hi = (j == 0) ? len : len * (p == 1.0 ? x : std::pow(x, p));
        const double lj = lambda.tail_increment(t_end, 0.5 * (d_hi + d_lo));
        w = elementary_inverse(w, lj, d_hi - d_lo);
        d_lo = d_hi;
    }
    // rebase at lambda(a): gamma of the driver lambda(a+v) - lambda(a)
    return w - lambda.tail_increment(t_end, len);
}

Complex tip_at(const DrivingFunction& lambda, double t, int n) {
    return window_tip(lambda, 0.0, t, n) + lambda(0.0);
}

TracedSlit trace(const DrivingFunction& lambda, int n, TraceMethod method, int threads) {
    if (n < 2) throw std::invalid_argument("trace: n >= 2 required");
    const DiscretizedFlow flow = DiscretizedFlow::build(lambda, n, GridKind::Uniform);

    TracedSlit slit;
    slit.times = flow.times;
    slit.points.assign(n + 1, Complex{});
    slit.method = method;
    slit.driving_ref = describe(lambda);
    slit.points[0] = Complex(lambda(0.0), 0.0);

    if (method == TraceMethod::Composition) {
        parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
            const int k = static_cast<int>(i) + 1;
            const double tk = flow.times[k];
            if (tip_grading_exponent(endpoint_sigma(lambda, 0.0, tk, k)) > 1.0) {
                // endpoint-singular node: graded chain
                slit.points[k] = window_tip(lambda, 0.0, tk, k) + slit.points[0].real();
                return;
            }
            Complex w = flow.node_values[k];
            for (int j = k - 1; j >= 0; --j)
                w = elementary_inverse(w, flow.driving[j], flow.increments[j]);
            slit.points[k] = w;
        }, threads);
    } else {
        const double delta = flow.horizon() / n;
        parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
            const int k = static_cast<int>(i) + 1;
            slit.points[k] = reverse_ode_tip(lambda, flow.times[k], delta);
        }, threads);
    }

    for (int k = 0; k <= n; ++k) {
        if (slit.points[k].imag() < -1e-9) {
            std::ostringstream os;
            os << "trace: point at t=" << slit.times[k]
               << " left the closed half-plane (Im = " << slit.points[k].imag() << ")";
            throw std::runtime_error(os.str());
        }
    }

    const double sigma = lip_half_seminorm(lambda, std::min(n, 1024)).value;
    if (sigma > 1.0) {
        std::ostringstream os;
        os << "sampled Lip(1/2) seminorm " << sigma
           << " > 1: outside the validated generation regime";
        slit.warnings.push_back(os.str());
    }
    return slit;
}

SubSlitTip sub_slit_tip(const DrivingFunction& lambda, double s, double t, int n) {
    if (!(0.0 <= s && s < t && t <= lambda.horizon() * (1.0 + 1e-12)))
        throw std::invalid_argument("sub_slit_tip: requires 0 <= s < t <= T");
    SubSlitTip out;
    out.s = s;
    out.t = t;
    out.gamma_st = window_tip(lambda, s, t - s, n);
    out.tau_st = out.gamma_st / std::sqrt(t - s);
    return out;
}

VerificationReport cone_check(const TracedSlit& slit, double sigma) {
    VerificationReport rep;
    rep.name = "cone-check";
    rep.samples = slit.steps();
    const double tol = 5.0 / std::sqrt(static_cast<double>(slit.steps()));
    const double im_lo = std::sqrt(std::max(0.0, 4.0 - sigma * sigma));
    rep.columns = {"t", "re_over_root_t", "im_over_root_t"};
    double margin = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= slit.steps(); ++k) {
        const double rt = std::sqrt(slit.times[k]);
        const double x = slit.points[k].real() / rt;
        const double y = slit.points[k].imag() / rt;
        const double m =
            std::min({sigma + tol - std::fabs(x), y - (im_lo - tol), (2.0 + tol) - y});
        if (m < margin) {
            margin = m;
            rep.rows = {{slit.times[k], x, y}};
        }
    }
    rep.margin = margin;
    rep.pass = margin >= 0.0;
    rep.set_scalar("sigma", sigma);
    rep.set_scalar("tol", tol);
    return rep;
}

namespace {

double segment_distance(Complex a0, Complex a1, Complex b0, Complex b1) {
    auto point_seg = [](Complex p, Complex s0, Complex s1) {
        const Complex d = s1 - s0;
        const double len2 = std::norm(d);
        double t = len2 > 0.0 ? ((p - s0).real() * d.real() + (p - s0).imag() * d.imag()) / len2
                              : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return std::abs(p - (s0 + t * d));
    };
    return std::min({point_seg(a0, b0, b1), point_seg(a1, b0, b1), point_seg(b0, a0, a1),
                     point_seg(b1, a0, a1)});
}

} // namespace

double min_nonadjacent_segment_distance(const TracedSlit& slit) {
    const int n = slit.steps();
    if (n > (1 << 14)) return std::numeric_limits<double>::infinity();

    // hash segments into a uniform grid sized by the longest segment
    double cell = 0.0;
    for (int k = 0; k < n; ++k)
        cell = std::max(cell, std::abs(slit.points[k + 1] - slit.points[k]));
    if (cell == 0.0) return std::numeric_limits<double>::infinity();

    auto key = [cell](double x, double y) {
        const long ix = static_cast<long>(std::floor(x / cell));
        const long iy = static_cast<long>(std::floor(y / cell));
        return ix * 73856093L ^ iy * 19349663L;
    };
    std::unordered_map<long, std::vector<int>> buckets;
    for (int k = 0; k < n; ++k) {
        const Complex mid = 0.5 * (slit.points[k] + slit.points[k + 1]);
        buckets[key(mid.real(), mid.imag())].push_back(k);
    }

    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        const Complex mid = 0.5 * (slit.points[k] + slit.points[k + 1]);
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                const auto it =
                    buckets.find(key(mid.real() + dx * cell, mid.imag() + dy * cell));
                if (it == buckets.end()) continue;
                for (int j : it->second) {
                    if (j <= k + 1 && j >= k - 1) continue; // adjacent or self
                    best = std::min(best, segment_distance(slit.points[k], slit.points[k + 1],
                                                           slit.points[j], slit.points[j + 1]));
                }
            }
        }
    }
    return best;
}

} // namespace loewner
