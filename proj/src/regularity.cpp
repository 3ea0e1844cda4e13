#include "loewner/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "loewner/parallel.hpp"
#include "loewner/rng.hpp"

namespace loewner {

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    LineFit fit;
    const double den = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0;
    const double mean_y = sy / n;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = fit.intercept + fit.slope * x[i];
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

// dyadic moduli M_j = max_k |f(t_{k + 2^j}) - f(t_k)|
std::vector<double> dyadic_moduli(const std::vector<Complex>& f, int& j_levels) {
    const int n = static_cast<int>(f.size());
    std::vector<double> mods;
    for (int lag = 1; 2 * lag <= n; lag *= 2) {
        double m = 0.0;
        for (int k = 0; k + lag < n; ++k) m = std::max(m, std::abs(f[k + lag] - f[k]));
        mods.push_back(m);
    }
    j_levels = static_cast<int>(mods.size());
    return mods;
}

} // namespace

HolderFit holder_fit(const std::vector<double>& t, const std::vector<Complex>& f, FitKind kind) {
    if (t.size() != f.size()) throw std::invalid_argument("holder_fit: length mismatch");
    if (t.size() < (1u << 8)) throw std::invalid_argument("holder_fit: need >= 2^8 samples");
    const double dt = t[1] - t[0];
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        if (std::fabs((t[i + 1] - t[i]) - dt) > 1e-9 * std::fabs(dt))
            throw std::invalid_argument("holder_fit: samples must be on a uniform grid");
    }

    std::vector<Complex> vals;
    if (kind == FitKind::Function) {
        vals = f;
    } else {
        vals.resize(f.size() - 1);
        for (std::size_t i = 0; i + 1 < f.size(); ++i) vals[i] = (f[i + 1] - f[i]) / dt;
    }

    int levels = 0;
    const std::vector<double> mods = dyadic_moduli(vals, levels);
    if (levels < 8) throw std::runtime_error("holder_fit: insufficient dyadic scales");

    std::vector<double> lx, ly;
    for (int j = 2; j < levels - 2; ++j) { // drop two coarsest and two finest
        if (mods[j] <= 0.0) continue;
        lx.push_back(std::log(dt * (1 << j)));
        ly.push_back(std::log(mods[j]));
    }
    if (lx.size() < 4) throw std::runtime_error("holder_fit: insufficient dyadic scales");

    const LineFit lf = least_squares(lx, ly);
    HolderFit fit;
    fit.exponent = lf.slope;
    fit.constant = std::exp(lf.intercept);
    fit.r_squared = lf.r_squared;
    fit.j_min = 2;
    fit.j_max = levels - 3;
    fit.n_pairs = static_cast<int>(vals.size());
    return fit;
}

VerificationReport e_sigma_sample(double sigma, int N, int n, std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("e_sigma_sample: N >= 1 required");
    if (!(sigma >= 0.0 && sigma <= 1.0))
        throw std::invalid_argument("e_sigma_sample: sigma in [0,1] required");

    VerificationReport rep;
    rep.name = "diam-e";
    rep.samples = N;
    rep.seed = seed;
    rep.columns = {"sample", "re_tip", "im_tip", "margin"};

    const double tol = 5.0 / std::sqrt(static_cast<double>(n));
    const double im_lo = std::sqrt(4.0 - sigma * sigma);

    std::vector<Complex> tips(N);
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t k) {
        const auto lam = DrivingFunction::midpoint_random(
            sigma, 1.0, SplitMix64::stream(seed, k).next());
        tips[k] = tip_at(lam, 1.0, n);
    });

    double margin = std::numeric_limits<double>::infinity();
    std::vector<Complex> cloud;
    for (int k = 0; k < N; ++k) {
        const double x = tips[k].real(), y = tips[k].imag();
        const double m = std::min({sigma + tol - std::fabs(x), y - (im_lo - tol),
                                   (2.0 + tol) - y});
        rep.rows.push_back({static_cast<double>(k), x, y, m});
        margin = std::min(margin, m);
        cloud.push_back(tips[k]);
        cloud.push_back(Complex(-x, y)); // mirror driver -lambda is also in X_sigma
    }
    if (sigma > 0.0) {
        // the spiral boundary member kappa = sigma^2/4 and its mirror
        const auto sp = DrivingFunction::spiral(sigma * sigma / 4.0, 1.0);
        const Complex tip = tip_at(sp, 1.0, n);
        cloud.push_back(tip);
        cloud.push_back(Complex(-tip.real(), tip.imag()));
    }

    double diam = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (std::size_t j = i + 1; j < cloud.size(); ++j)
            diam = std::max(diam, std::abs(cloud[i] - cloud[j]));

    rep.margin = margin;
    rep.pass = margin >= 0.0;
    rep.set_scalar("sigma", sigma);
    rep.set_scalar("tol", tol);
    rep.set_scalar("diam", diam);
    if (sigma > 0.0) rep.set_scalar("diam_over_sigma", diam / sigma);
    return rep;
}

VerificationReport lipschitz_ratio(const DrivingFunction& lambda1, const DrivingFunction& lambda2,
                                   int n, double cap) {
    if (std::fabs(lambda1.horizon() - lambda2.horizon()) > 1e-12)
        throw std::invalid_argument("lipschitz_ratio: drivers must share the horizon");
    const double T = lambda1.horizon();

    VerificationReport rep;
    rep.name = "lipschitz";
    rep.samples = n;

    double sup_dlambda = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double t = T * k / n;
        sup_dlambda = std::max(sup_dlambda, std::fabs(lambda1(t) - lambda2(t)));
    }
    if (sup_dlambda < 1e-12) {
        rep.pass = true;
        rep.margin = cap;
        rep.notes.push_back("degenerate pair: sup|lambda1-lambda2| < 1e-12, exact equality");
        rep.set_scalar("sup_dlambda", sup_dlambda);
        return rep;
    }

    const TracedSlit g1 = trace(lambda1, n);
    const TracedSlit g2 = trace(lambda2, n);
    double sup_dgamma = 0.0;
    for (int k = 0; k <= n; ++k)
        sup_dgamma = std::max(sup_dgamma, std::abs(g1.points[k] - g2.points[k]));

    const double ratio = sup_dgamma / sup_dlambda;
    rep.pass = ratio <= cap;
    rep.margin = cap - ratio;
    rep.set_scalar("ratio", ratio);
    rep.set_scalar("sup_dlambda", sup_dlambda);
    rep.set_scalar("sup_dgamma", sup_dgamma);
    rep.set_scalar("cap", cap);
    return rep;
}

HolderFit common_past_divergence(const DrivingFunction& lambda_base, double s, double delta,
                                 int N_eps, int n, double M_pert) {
    const double T = lambda_base.horizon();
    if (!(s > 0.0 && s < T))
        throw std::invalid_argument("common_past_divergence: requires 0 < s < T");
    if (N_eps < 4) throw std::invalid_argument("common_past_divergence: N_eps >= 4 required");

    const double expo = 0.5 + delta;
    auto continuation = [&](double sign) {
        return DrivingFunction::from_callable(
            [base = lambda_base, s, sign, M_pert, expo](double t) {
                return t <= s ? base(t) : base(t) + sign * M_pert * std::pow(t - s, expo);
            },
            T);
    };
    const DrivingFunction l1 = continuation(+1.0);
    const DrivingFunction l2 = continuation(-1.0);

    // the asymptotic regime needs eps well inside the continuation window
    int j0 = 1;
    while (std::pow(2.0, -j0) > 0.25 * (T - s)) ++j0;
    std::vector<double> lx, ly;
    bool all_zero = true;
    std::vector<double> diffs(N_eps);
    parallel_for(static_cast<std::size_t>(N_eps), [&](std::size_t i) {
        const double eps = std::pow(2.0, -(j0 + static_cast<int>(i)));
        diffs[i] = std::abs(tip_at(l1, s + eps, n) - tip_at(l2, s + eps, n));
    });
    for (int i = 0; i < N_eps; ++i) {
        const double eps = std::pow(2.0, -(j0 + i));
        if (diffs[i] > 1e-14) {
            all_zero = false;
            lx.push_back(std::log(eps));
            ly.push_back(std::log(diffs[i]));
        }
    }

    HolderFit fit;
    fit.n_pairs = N_eps;
    if (all_zero) {
        // identical continuations: report exact agreement
        fit.exponent = std::numeric_limits<double>::infinity();
        fit.constant = 0.0;
        fit.r_squared = 1.0;
        return fit;
    }
    const LineFit lf = least_squares(lx, ly);
    fit.exponent = lf.slope;
    fit.constant = std::exp(lf.intercept);
    fit.r_squared = lf.r_squared;
    fit.j_min = j0;
    fit.j_max = j0 + N_eps - 1;
    if (fit.r_squared < 0.95) {
        std::ostringstream os;
        os << "common_past_divergence: fit quality r^2 = " << fit.r_squared << " < 0.95";
        throw std::runtime_error(os.str());
    }
    return fit;
}

VerificationReport gain_experiment(double beta, double M, const std::vector<std::uint64_t>& seeds,
                                   int n, double band) {
    if (!(beta > 0.5 && beta <= 2.0))
        throw std::invalid_argument("gain_experiment: beta in (0.5, 2] required");
    if (seeds.empty()) throw std::invalid_argument("gain_experiment: need at least one seed");

    VerificationReport rep;
    rep.name = "gain";
    rep.samples = static_cast<long>(seeds.size());
    rep.seed = seeds.front();
    rep.columns = {"seed", "exponent", "r_squared"};
    rep.set_scalar("beta", beta);
    rep.set_scalar("M", M);

    const bool weak_case = std::fabs(beta - 1.5) < 1e-12;
    const double target = beta <= 1.0 ? beta - 0.5 : (beta < 1.5 ? beta - 0.5 : beta - 1.5);
    const int n_samples = 256;
    const int n_quad = 192, n_tip = 192;
    const double T = 1.0;

    double sum_expo = 0.0;
    double min_r2 = 1.0;
    double weak_ratio_spread = 0.0;

    for (std::uint64_t seed : seeds) {
        const auto lam = DrivingFunction::weierstrass(M, beta, T, seed);
        std::vector<double> ts(n_samples);
        std::vector<Complex> vals(n_samples);

        if (beta <= 1.0) {
            // Gamma'(t) = 2i e^{L(t^2)} over a uniform t-grid
            const double t_lo = std::sqrt(T) / n_samples;
            const double dt = (std::sqrt(T) - t_lo) / (n_samples - 1);
            for (int k = 0; k < n_samples; ++k) ts[k] = t_lo + dt * k;
            parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t k) {
                vals[k] = Complex(0.0, 2.0) *
                          std::exp(L_of(lam, ts[k] * ts[k], n_quad, n_tip));
            });
        } else if (beta < 1.5 || weak_case) {
            // gamma'(s) on [T/4, T]
            const double a = T / 4.0;
            const double ds = (T - a) / (n_samples - 1);
            for (int k = 0; k < n_samples; ++k) ts[k] = a + ds * k;
            parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t k) {
                vals[k] = gamma_prime(lam, ts[k], n_quad, n_tip);
            });
        } else {
            // gamma''(s) on [T/4, T]
            const double a = T / 4.0;
            const double ds = (T - a) / (n_samples - 1);
            for (int k = 0; k < n_samples; ++k) ts[k] = a + ds * k;
            parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t k) {
                vals[k] = gamma_second(lam, ts[k], n_quad, n_tip);
            });
        }

        if (weak_case) {
            // modulus against h max(1, log 1/h): report the fitted constant and
            // how uniform the per-level ratios are
            int levels = 0;
            const std::vector<double> mods = dyadic_moduli(vals, levels);
            const double dt = ts[1] - ts[0];
            double num = 0.0, den = 0.0, rmin = 1e300, rmax = 0.0;
            for (int j = 2; j < levels - 2; ++j) {
                const double h = dt * (1 << j);
                const double phi = h * std::max(1.0, std::log(1.0 / h));
                num += mods[j] * phi;
                den += phi * phi;
                const double r = mods[j] / phi;
                rmin = std::min(rmin, r);
                rmax = std::max(rmax, r);
            }
            const double N_hat = num / den;
            weak_ratio_spread = std::max(weak_ratio_spread, rmax / std::max(rmin, 1e-300));
            rep.rows.push_back({static_cast<double>(seed), N_hat, rmax / rmin});
            sum_expo += N_hat;
            continue;
        }

        const HolderFit fit = holder_fit(ts, vals, FitKind::Function);
        rep.rows.push_back({static_cast<double>(seed), fit.exponent, fit.r_squared});
        sum_expo += fit.exponent;
        min_r2 = std::min(min_r2, fit.r_squared);
    }

    const double mean = sum_expo / static_cast<double>(seeds.size());
    if (weak_case) {
        rep.set_scalar("N_hat_mean", mean);
        rep.set_scalar("ratio_spread", weak_ratio_spread);
        // the h log(1/h) model should describe all levels within a small factor
        rep.margin = 4.0 - weak_ratio_spread;
        rep.pass = rep.margin >= 0.0;
        return rep;
    }

    rep.set_scalar("mean_exponent", mean);
    rep.set_scalar("target", target);
    rep.set_scalar("min_r_squared", min_r2);
    rep.margin = std::min(band - std::fabs(mean - target), min_r2 - 0.95);
    rep.pass = rep.margin >= 0.0;
    return rep;
}

VerificationReport gprime_limit_check(const DrivingFunction& lambda, double s, int j_max) {
    const double T = lambda.horizon();
    if (!(s > 0.0 && s < T))
        throw std::invalid_argument("gprime_limit_check: requires 0 < s < T");

    VerificationReport rep;
    rep.name = "gprime-limit";
    rep.columns = {"j", "eps", "re_v", "im_v", "abs_v"};

    int j_min = 1;
    while (std::pow(2.0, -j_min) > T - s) ++j_min;
    j_max = std::max(j_max, j_min + 3);

    const int n_flow = std::max(1 << 14, 4 << j_max);
    const DiscretizedFlow flow = DiscretizedFlow::build(lambda, n_flow, GridKind::Uniform);

    std::vector<Complex> v(j_max - j_min + 1);
    parallel_for(v.size(), [&](std::size_t i) {
        const int j = j_min + static_cast<int>(i);
        const double eps = std::pow(2.0, -j);
        // tip of the same discrete flow at the node nearest to s+eps
        const int k = node_index(flow, s + eps);
        Complex w = flow.node_values[k];
        for (int m = k - 1; m >= 0; --m)
            w = elementary_inverse(w, flow.driving[m], flow.increments[m]);
        v[i] = std::sqrt(flow.times[k] - s) * forward_derivative(flow, w, s);
    });

    for (std::size_t i = 0; i < v.size(); ++i) {
        const double eps = std::pow(2.0, -(j_min + static_cast<int>(i)));
        rep.rows.push_back({static_cast<double>(j_min + i), eps, v[i].real(), v[i].imag(),
                            std::abs(v[i])});
    }

    // Cauchy decay across the first few dyadic refinements
    std::vector<double> d;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) d.push_back(std::abs(v[i + 1] - v[i]));
    double min_ratio = std::numeric_limits<double>::infinity();
    const std::size_t n_ratio = std::min<std::size_t>(5, d.size() - 1);
    for (std::size_t i = 0; i < n_ratio; ++i)
        min_ratio = std::min(min_ratio, d[i] / std::max(d[i + 1], 1e-300));

    const Complex limit_ref = std::sqrt(s) * std::exp(-L_of(lambda, s, 2048));
    const double rel = std::abs(v.back() - limit_ref) / std::abs(limit_ref);

    rep.set_scalar("min_cauchy_ratio", min_ratio);
    rep.set_scalar("rel_err_vs_L", rel);
    rep.set_scalar("limit_re", limit_ref.real());
    rep.set_scalar("limit_im", limit_ref.imag());
    rep.margin = std::min((min_ratio - 1.5) / 1.5, (0.02 - rel) / 0.02);
    rep.pass = rep.margin >= 0.0;
    if (!rep.pass) rep.notes.push_back("non-convergence: see table");
    return rep;
}

VerificationReport lipschitz_experiment(double sigma, int N, int n, std::uint64_t seed,
                                        double cap) {
    VerificationReport rep;
    rep.name = "lipschitz";
    rep.samples = N;
    rep.seed = seed;
    rep.columns = {"pair", "ratio_n", "ratio_2n", "stability"};

    double max_ratio = 0.0;
    double worst_stability = 0.0;
    for (int k = 0; k < N; ++k) {
        const auto l1 = DrivingFunction::midpoint_random(
            sigma, 1.0, SplitMix64::stream(seed, 2 * k).next());
        const auto l2 = DrivingFunction::midpoint_random(
            sigma, 1.0, SplitMix64::stream(seed, 2 * k + 1).next());
        const double r1 = lipschitz_ratio(l1, l2, n, cap).scalars.at("ratio");
        const double r2 = lipschitz_ratio(l1, l2, 2 * n, cap).scalars.at("ratio");
        const double stab = std::fabs(r2 / r1 - 1.0);
        rep.rows.push_back({static_cast<double>(k), r1, r2, stab});
        max_ratio = std::max({max_ratio, r1, r2});
        worst_stability = std::max(worst_stability, stab);
    }

    // translation pair: gamma just translates, the ratio is exactly 1
    const auto base = DrivingFunction::midpoint_random(
        sigma, 1.0, SplitMix64::stream(seed, 2ULL * N).next());
    const double tr = lipschitz_ratio(base, base.translated(0.25), n, cap).scalars.at("ratio");

    rep.set_scalar("max_ratio", max_ratio);
    rep.set_scalar("worst_stability", worst_stability);
    rep.set_scalar("translation_ratio", tr);
    rep.set_scalar("cap", cap);
    rep.margin = std::min({cap - max_ratio, 0.05 - worst_stability,
                           1e-6 - std::fabs(tr - 1.0)});
    rep.pass = rep.margin >= 0.0;
    return rep;
}

VerificationReport tip_identity_check(const DrivingFunction& lambda, double t, int n_quad,
                                      int n_tip) {
    QuadratureSpec spec;
    spec.n_quad = n_quad;
    spec.n_tip = n_tip > 0 ? n_tip : 2048;
    spec.delta_eff = 0.5; // integrand ~ u^{-1/2}: quadratic grading
    const TipTable tbl = build_tip_table(lambda, t, t, spec);

    std::vector<Complex> terms(tbl.mids.size());
    for (std::size_t j = 0; j < tbl.mids.size(); ++j) {
        const Complex g = tbl.tau[j] * std::sqrt(tbl.mids[j]);
        terms[j] = 2.0 / g * tbl.sqrt_weight(j);
    }
    const Complex integral = pairwise_sum(terms);
    const Complex lhs = lambda(t) - tip_at(lambda, t, 4 * spec.n_tip);
    const double rel = std::abs(integral - lhs) / std::abs(lhs);

    VerificationReport rep;
    rep.name = "tip-identity";
    rep.samples = n_quad;
    rep.set_scalar("t", t);
    rep.set_scalar("lhs_re", lhs.real());
    rep.set_scalar("lhs_im", lhs.imag());
    rep.set_scalar("integral_re", integral.real());
    rep.set_scalar("integral_im", integral.imag());
    rep.set_scalar("rel_err", rel);
    rep.margin = (0.02 - rel) / 0.02;
    rep.pass = rep.margin >= 0.0;
    return rep;
}

} // namespace loewner
