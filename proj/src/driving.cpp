#include "loewner/driving.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "loewner/rng.hpp"

namespace loewner {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Sampled alpha-Hoelder seminorm of tabulated values on a uniform grid.
double sampled_seminorm(const std::vector<double>& v, double T, double alpha) {
    const int n = static_cast<int>(v.size()) - 1;
    const double dt = T / n;
    double best = 0.0;
    for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const double num = std::fabs(v[j] - v[i]);
            const double den = std::pow(dt * (j - i), alpha);
            best = std::max(best, num / den);
        }
    }
    return best;
}

} // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::Constant: return "constant";
        case Family::Linear: return "linear";
        case Family::Spiral: return "spiral";
        case Family::Power: return "power";
        case Family::Weierstrass: return "weierstrass";
        case Family::MidpointRandom: return "midpoint-random";
        case Family::Tabulated: return "tabulated";
    }
    return "tabulated";
}

Family family_from_name(const std::string& name) {
    if (name == "constant") return Family::Constant;
    if (name == "linear") return Family::Linear;
    if (name == "spiral") return Family::Spiral;
    if (name == "power") return Family::Power;
    if (name == "weierstrass") return Family::Weierstrass;
    if (name == "midpoint-random") return Family::MidpointRandom;
    if (name == "tabulated") return Family::Tabulated;
    throw std::invalid_argument("unknown driving family: " + name);
}

DrivingFunction DrivingFunction::constant(double c, double T) {
    require(T > 0.0, "constant: horizon T must be positive");
    DrivingFunction f;
    f.T_ = T;
    f.eval_ = [c](double) { return c; };
    f.deriv_ = [](double) { return 0.0; };
    f.tail_ = [](double, double) { return 0.0; };
    f.family_ = Family::Constant;
    f.params_ = {{"c", c}};
    return f;
}

DrivingFunction DrivingFunction::linear(double b, double T) {
    require(T > 0.0, "linear: horizon T must be positive");
    DrivingFunction f;
    f.T_ = T;
    f.eval_ = [b](double t) { return b * t; };
    f.deriv_ = [b](double) { return b; };
    f.tail_ = [b](double, double tau) { return -b * tau; };
    f.family_ = Family::Linear;
    f.params_ = {{"b", b}};
    return f;
}

DrivingFunction DrivingFunction::spiral(double kappa, double T) {
    require(kappa > 0.0 && kappa < 4.0,
            "spiral: requires 0 < kappa < 4 (kappa >= 4 means sigma = 2 sqrt(kappa) >= 4, "
            "slit generation not guaranteed)");
    require(T > 0.0 && T <= 1.0, "spiral: requires 0 < T <= 1");
    DrivingFunction f;
    f.T_ = T;
    const double a = 2.0 * std::sqrt(kappa);
    f.eval_ = [a](double t) { return a * (1.0 - std::sqrt(std::max(0.0, 1.0 - t))); };
    f.deriv_ = [a](double t) { return 0.5 * a / std::sqrt(std::max(1e-300, 1.0 - t)); };
    f.tail_ = [a](double t, double tau) {
        const double r0 = std::sqrt(std::max(0.0, 1.0 - t));
        const double r1 = std::sqrt(std::max(0.0, 1.0 - t + tau));
        return -a * tau / (r0 + r1);
    };
    f.family_ = Family::Spiral;
    f.params_ = {{"kappa", kappa}};
    return f;
}

DrivingFunction DrivingFunction::power(double M, double beta, double T, double b) {
    require(T > 0.0, "power: horizon T must be positive");
    require(beta > 0.0, "power: exponent beta must be positive");
    DrivingFunction f;
    f.T_ = T;
    f.eval_ = [M, beta, b](double t) { return b * t + M * std::pow(t, beta); };
    f.deriv_ = [M, beta, b](double t) {
        return b + M * beta * std::pow(std::max(t, 1e-300), beta - 1.0);
    };
    f.tail_ = [M, beta, b](double t, double tau) {
        if (t <= 0.0 || tau <= 0.0) return 0.0;
        // (t-tau)^beta - t^beta without cancellation for tau << t
        const double mono = M * std::pow(t, beta) * std::expm1(beta * std::log1p(-tau / t));
        return -b * tau + mono;
    };
    f.family_ = Family::Power;
    f.params_ = {{"M", M}, {"beta", beta}, {"b", b}};
    return f;
}

DrivingFunction DrivingFunction::weierstrass(double M, double beta, double T,
                                             std::uint64_t seed) {
    require(T > 0.0, "weierstrass: horizon T must be positive");
    require(beta > 0.0 && beta <= 2.0, "weierstrass: requires beta in (0,2]");
    constexpr int kTerms = 17; // j = 0..16
    const double a = 2.0;

    SplitMix64 rng = SplitMix64::stream(seed, 0);
    std::vector<double> phase(kTerms);
    for (double& p : phase) p = rng.uniform(0.0, 2.0 * kPi);

    const bool integrated = beta > 1.0;
    const double be = integrated ? beta - 1.0 : beta; // exponent of the cosine sum

    std::vector<double> freq(kTerms), amp(kTerms);
    {
        double aj = 1.0;
        for (int j = 0; j < kTerms; ++j) {
            freq[j] = aj;
            amp[j] = std::pow(aj, -be);
            aj *= a;
        }
    }
    auto raw = [phase, freq, amp](double t) {
        double s = 0.0;
        for (int j = 0; j < kTerms; ++j) s += amp[j] * std::cos(freq[j] * t + phase[j]);
        return s;
    };
    auto raw_int = [phase, freq, amp](double t) {
        // termwise integral of `raw` from 0 to t
        double s = 0.0;
        for (int j = 0; j < kTerms; ++j)
            s += amp[j] * (std::sin(freq[j] * t + phase[j]) - std::sin(phase[j])) / freq[j];
        return s;
    };

    // Normalize empirically: scale so the sampled seminorm of the C^be part
    // equals M (the C^beta class constant the experiments prescribe).
    const int n_norm = 2048;
    std::vector<double> samples(n_norm + 1);
    for (int i = 0; i <= n_norm; ++i) samples[i] = raw(T * i / n_norm);
    const double semi = sampled_seminorm(samples, T, be);
    require(semi > 0.0, "weierstrass: degenerate sample");
    const double scale = M / semi;

    DrivingFunction f;
    f.T_ = T;
    if (integrated) {
        f.eval_ = [raw_int, scale](double t) { return scale * raw_int(t); };
        f.deriv_ = [raw, scale](double t) { return scale * raw(t); };
        f.tail_ = [phase, freq, amp, scale](double t, double tau) {
            // sin A - sin B = 2 cos((A+B)/2) sin((A-B)/2), applied termwise
            double s = 0.0;
            for (int j = 0; j < kTerms; ++j)
                s -= amp[j] / freq[j] * 2.0 * std::cos(freq[j] * (t - 0.5 * tau) + phase[j]) *
                     std::sin(0.5 * freq[j] * tau);
            return scale * s;
        };
    } else {
        f.eval_ = [raw, scale, raw0 = raw(0.0)](double t) { return scale * (raw(t) - raw0); };
        f.deriv_ = [phase, freq, amp, scale](double t) {
            double s = 0.0;
            for (int j = 0; j < kTerms; ++j)
                s -= amp[j] * freq[j] * std::sin(freq[j] * t + phase[j]);
            return scale * s;
        };
        f.tail_ = [phase, freq, amp, scale](double t, double tau) {
            // cos A - cos B = 2 sin((A+B)/2) sin((B-A)/2), applied termwise
            double s = 0.0;
            for (int j = 0; j < kTerms; ++j)
                s += amp[j] * 2.0 * std::sin(freq[j] * (t - 0.5 * tau) + phase[j]) *
                     std::sin(0.5 * freq[j] * tau);
            return scale * s;
        };
    }
    f.family_ = Family::Weierstrass;
    f.params_ = {{"M", M}, {"beta", beta}};
    f.seed_ = seed;
    return f;
}

DrivingFunction DrivingFunction::midpoint_random(double sigma, double T, std::uint64_t seed,
                                                 int levels) {
    require(sigma >= 0.0, "midpoint-random: sigma must be nonnegative");
    require(T > 0.0, "midpoint-random: horizon T must be positive");
    require(levels >= 1 && levels <= 20, "midpoint-random: levels in [1,20]");

    const int n = 1 << levels;
    std::vector<double> v(n + 1, 0.0); // on [0,1], Brownian-scaled to [0,T] below
    SplitMix64 rng = SplitMix64::stream(seed, 1);
    if (sigma > 0.0) {
        v[n] = sigma * rng.symmetric();
        for (int j = 1; j <= levels; ++j) {
            const int step = n >> j;
            const double amp = sigma * std::pow(2.0, -0.5 * j);
            for (int k = step; k < n; k += 2 * step) {
                v[k] = 0.5 * (v[k - step] + v[k + step]) + amp * rng.symmetric();
            }
        }
        // post-hoc rescale so the sampled Lip(1/2) seminorm is exactly sigma
        const double semi = sampled_seminorm(v, 1.0, 0.5);
        if (semi > 0.0) {
            const double s = sigma / semi;
            for (double& x : v) x *= s;
        }
    }

    const double rootT = std::sqrt(T);
    DrivingFunction f;
    f.T_ = T;
    f.eval_ = [v = std::move(v), n, T, rootT](double t) {
        const double x = std::clamp(t / T, 0.0, 1.0) * n;
        const int i = std::min(static_cast<int>(x), n - 1);
        const double frac = x - i;
        return rootT * ((1.0 - frac) * v[i] + frac * v[i + 1]);
    };
    f.family_ = Family::MidpointRandom;
    f.params_ = {{"sigma", sigma}, {"levels", static_cast<double>(levels)}};
    f.seed_ = seed;
    return f;
}

DrivingFunction DrivingFunction::tabulated(std::vector<double> t, std::vector<double> values) {
    require(t.size() == values.size(), "tabulated: t and lambda columns differ in length");
    require(t.size() >= 2, "tabulated: need at least two samples");
    require(t.front() == 0.0, "tabulated: t_0 must be 0");
    for (std::size_t i = 1; i < t.size(); ++i)
        require(t[i] > t[i - 1], "tabulated: t must be strictly increasing");

    DrivingFunction f;
    f.T_ = t.back();
    f.eval_ = [t = std::move(t), values = std::move(values)](double x) {
        if (x <= t.front()) return values.front();
        if (x >= t.back()) return values.back();
        const auto it = std::upper_bound(t.begin(), t.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
        const double frac = (x - t[i]) / (t[i + 1] - t[i]);
        return (1.0 - frac) * values[i] + frac * values[i + 1];
    };
    f.family_ = Family::Tabulated;
    return f;
}

DrivingFunction DrivingFunction::from_callable(std::function<double(double)> eval, double T,
                                               std::function<double(double)> deriv) {
    require(T > 0.0, "from_callable: horizon T must be positive");
    require(static_cast<bool>(eval), "from_callable: eval required");
    DrivingFunction f;
    f.T_ = T;
    f.eval_ = std::move(eval);
    f.deriv_ = std::move(deriv);
    f.family_ = Family::Tabulated;
    f.derived_ = true;
    return f;
}

double DrivingFunction::derivative(double t) const {
    if (!deriv_) {
        throw std::domain_error("driving function has no closed-form derivative (family " +
                                family_name(family_) + ")");
    }
    return deriv_(t);
}

double DrivingFunction::derivative_or_fd(double t) const {
    if (deriv_) return deriv_(t);
    const double h = T_ / static_cast<double>(1 << 20);
    if (t < h) return (eval_(t + h) - eval_(t)) / h;
    if (t > T_ - h) return (eval_(t) - eval_(t - h)) / h;
    return (eval_(t + h) - eval_(t - h)) / (2.0 * h);
}

double DrivingFunction::tail_increment(double t, double tau) const {
    if (tail_) return tail_(t, tau);
    return eval_(t - tau) - eval_(t);
}

DrivingFunction DrivingFunction::rescaled() const {
    DrivingFunction f;
    f.T_ = 1.0;
    const double rootT = std::sqrt(T_);
    f.eval_ = [e = eval_, T = T_, rootT, l0 = eval_(0.0)](double s) {
        return (e(s * T) - l0) / rootT;
    };
    if (deriv_) {
        f.deriv_ = [d = deriv_, T = T_, rootT](double s) { return rootT * d(s * T); };
    }
    if (tail_) {
        f.tail_ = [tl = tail_, T = T_, rootT](double s, double tau) {
            return tl(s * T, tau * T) / rootT;
        };
    }
    f.family_ = family_;
    f.params_ = params_;
    f.seed_ = seed_;
    f.derived_ = true;
    return f;
}

DrivingFunction DrivingFunction::shifted(double s) const {
    require(s > 0.0 && s < T_, "shift: requires 0 < s < T");
    DrivingFunction f;
    f.T_ = T_ - s;
    f.eval_ = [e = eval_, s](double u) { return e(s + u); };
    if (deriv_) f.deriv_ = [d = deriv_, s](double u) { return d(s + u); };
    if (tail_) f.tail_ = [tl = tail_, s](double u, double tau) { return tl(s + u, tau); };
    f.family_ = family_;
    f.params_ = params_;
    f.seed_ = seed_;
    f.derived_ = true;
    return f;
}

DrivingFunction DrivingFunction::translated(double c) const {
    DrivingFunction f;
    f.T_ = T_;
    f.eval_ = [e = eval_, c](double t) { return e(t) + c; };
    f.deriv_ = deriv_;
    f.tail_ = tail_;
    f.family_ = family_;
    f.params_ = params_;
    f.seed_ = seed_;
    f.derived_ = true;
    return f;
}

DrivingFunction DrivingFunction::shifted_rebased(double s) const {
    require(s >= 0.0 && s < T_, "shifted_rebased: requires 0 <= s < T");
    DrivingFunction f;
    f.T_ = T_ - s;
    f.eval_ = [e = eval_, s, l0 = eval_(s)](double u) { return e(s + u) - l0; };
    if (deriv_) f.deriv_ = [d = deriv_, s](double u) { return d(s + u); };
    if (tail_) f.tail_ = [tl = tail_, s](double u, double tau) { return tl(s + u, tau); };
    f.family_ = family_;
    f.params_ = params_;
    f.seed_ = seed_;
    f.derived_ = true;
    return f;
}

double DrivingFunction::lip_exponent_hint() const {
    auto clamp = [](double d) { return std::clamp(d, 0.25, 0.5); };
    switch (family_) {
        case Family::Constant:
        case Family::Linear:
        case Family::Spiral:
            return 0.5;
        case Family::Power: {
            const double beta = params_.at("beta");
            return beta >= 1.0 ? 0.5 : clamp(beta - 0.5);
        }
        case Family::Weierstrass: {
            const double beta = params_.at("beta");
            return beta >= 1.0 ? 0.5 : clamp(beta - 0.5);
        }
        default:
            break;
    }
    // two-scale modulus probe
    const int n = 1024;
    const double h1 = T_ / 16.0, h2 = T_ / n;
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i + 64 <= n; ++i) {
        const double t = T_ * i / n;
        m1 = std::max(m1, std::fabs(eval_(t + h1) - eval_(t)));
        m2 = std::max(m2, std::fabs(eval_(t + h2) - eval_(t)));
    }
    if (m1 <= 0.0 || m2 <= 0.0) return 0.5; // constant
    const double expo = std::log(m1 / m2) / std::log(h1 / h2);
    return clamp(expo - 0.5);
}

NormReport lip_half_seminorm(const DrivingFunction& lambda, int n_grid,
                             NormReport::PairScheme scheme) {
    if (n_grid < 2) throw std::invalid_argument("lip_half_seminorm: n_grid >= 2 required");
    const double T = lambda.horizon();
    std::vector<double> v(n_grid + 1);
    for (int i = 0; i <= n_grid; ++i) v[i] = lambda(T * i / n_grid);
    const double dt = T / n_grid;

    double best = 0.0;
    if (scheme == NormReport::PairScheme::AllPairs) {
        for (int i = 0; i <= n_grid; ++i)
            for (int j = i + 1; j <= n_grid; ++j)
                best = std::max(best, std::fabs(v[j] - v[i]) / std::sqrt(dt * (j - i)));
    } else {
        // separations T 2^{-j}
        for (int lag = n_grid; lag >= 1; lag /= 2) {
            const double root = std::sqrt(dt * lag);
            for (int i = 0; i + lag <= n_grid; ++i)
                best = std::max(best, std::fabs(v[i + lag] - v[i]) / root);
        }
    }
    return NormReport{best, n_grid, scheme};
}

NormReport holder_norm(const DrivingFunction& lambda, int n, double alpha, int n_grid) {
    if (n != 0 && n != 1) throw std::invalid_argument("holder_norm: n must be 0 or 1");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("holder_norm: alpha must be in (0,1]");
    const double T = lambda.horizon();

    double total = 0.0;
    std::vector<double> top(n_grid + 1); // lambda^{(n)} samples
    for (int i = 0; i <= n_grid; ++i) {
        const double t = T * i / n_grid;
        top[i] = (n == 0) ? lambda(t) : lambda.derivative_or_fd(t);
    }
    for (int k = 0; k <= n; ++k) {
        double sup = 0.0;
        for (int i = 0; i <= n_grid; ++i) {
            const double t = T * i / n_grid;
            const double x = (k == 0) ? lambda(t) : lambda.derivative_or_fd(t);
            sup = std::max(sup, std::fabs(x));
        }
        total += sup;
    }
    total += sampled_seminorm(top, T, alpha);
    return NormReport{total, n_grid, NormReport::PairScheme::AllPairs};
}

double omega(const DrivingFunction& lambda, double s, double u, double eps, int n_grid) {
    if (!(u > 0.0 && u <= s)) throw std::invalid_argument("omega: requires 0 < u <= s");
    if (!(eps > 0.0)) throw std::invalid_argument("omega: requires eps > 0");
    if (s + eps > lambda.horizon() * (1.0 + 1e-12))
        throw std::domain_error("omega: requires s + eps <= T");
    const double la = lambda(s + eps - u);
    const double lb = lambda(s - u);
    double sup = 0.0;
    for (int i = 0; i <= n_grid; ++i) {
        const double v = u * i / n_grid;
        sup = std::max(sup, std::fabs(lambda(s + eps - v) - la - lambda(s - v) + lb));
    }
    return sup;
}

} // namespace loewner
