#include "loewner/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "loewner/io.hpp"
#include "loewner/parallel.hpp"
#include "loewner/regularity.hpp"

namespace loewner {

namespace {

struct DriverOpts {
    std::string family = "constant";
    std::string file;
    double c = 0.0;
    double b = 1.0;
    double kappa = 2.0;
    double M = 1.0;
    double beta = 0.75;
    double sigma = 0.5;
    double T = 1.0;
    std::uint64_t seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--family", family,
                        "constant|linear|spiral|power|weierstrass|midpoint-random");
        cmd->add_option("--file", file, "tabulated driver CSV (columns t,lambda)");
        cmd->add_option("--c", c, "constant value");
        cmd->add_option("--b", b, "linear slope (also the linear term of power)");
        cmd->add_option("--kappa", kappa, "spiral parameter, 0 < kappa < 4");
        cmd->add_option("--M", M, "amplitude");
        cmd->add_option("--beta", beta, "Hoelder exponent");
        cmd->add_option("--sigma", sigma, "Lip(1/2) bound for midpoint-random");
        cmd->add_option("--T", T, "capacity horizon");
        cmd->add_option("--seed", seed, "random seed");
    }

    DrivingFunction build() const {
        if (!file.empty()) return driving_from_csv(file);
        switch (family_from_name(family)) {
            case Family::Constant: return DrivingFunction::constant(c, T);
            case Family::Linear: return DrivingFunction::linear(b, T);
            case Family::Spiral: return DrivingFunction::spiral(kappa, T);
            case Family::Power: return DrivingFunction::power(M, beta, T);
            case Family::Weierstrass: return DrivingFunction::weierstrass(M, beta, T, seed);
            case Family::MidpointRandom:
                return DrivingFunction::midpoint_random(sigma, T, seed);
            case Family::Tabulated:
                throw CLI::ValidationError("--family tabulated requires --file");
        }
        throw CLI::ValidationError("unknown family");
    }
};

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    const auto dots = spec.find("..");
    if (dots != std::string::npos) {
        const std::uint64_t lo = std::stoull(spec.substr(0, dots));
        const std::uint64_t hi = std::stoull(spec.substr(dots + 2));
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::size_t pos = 0;
    while (pos < spec.size()) {
        const auto comma = spec.find(',', pos);
        const std::string tok = spec.substr(pos, comma == std::string::npos ? spec.npos
                                                                            : comma - pos);
        if (!tok.empty()) seeds.push_back(std::stoull(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return seeds;
}

void emit(const std::string& out_path, const std::string& payload) {
    if (out_path.empty() || out_path == "-") {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    } else {
        write_text_file(out_path, payload);
    }
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"loewner-lab: numerical laboratory for chordal Loewner slits"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file");

    std::string out_path;
    std::string format = "csv";
    int threads = 0;
    app.add_option("--out", out_path, "output path ('-' or empty: stdout)")->capture_default_str();
    app.add_option("--format", format, "csv|json")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0: machine cores)")
        ->envname("LOEWNER_LAB_THREADS");

    // trace -------------------------------------------------------------
    auto* cmd_trace = app.add_subcommand("trace", "trace the slit generated by a driver");
    DriverOpts trace_driver;
    trace_driver.attach(cmd_trace);
    int trace_n = 4096;
    std::string trace_method = "composition";
    cmd_trace->add_option("--n", trace_n, "grid steps")->capture_default_str();
    cmd_trace->add_option("--method", trace_method, "composition|reverse-ode")
        ->capture_default_str();

    // derive ------------------------------------------------------------
    auto* cmd_derive = app.add_subcommand("derive", "tip derivatives: L, gamma', gamma'', Gamma");
    DriverOpts derive_driver;
    derive_driver.attach(cmd_derive);
    double derive_s = 0.0;
    int s_grid = 0;
    int n_quad = 2048;
    bool with_second = false;
    bool gamma2_at_0 = false;
    bool reparam = false;
    cmd_derive->add_option("--s", derive_s, "capacity-time for a single frame");
    cmd_derive->add_option("--s-grid", s_grid, "emit frames over an s-grid of this size");
    cmd_derive->add_option("--n-quad", n_quad, "quadrature nodes")->capture_default_str();
    cmd_derive->add_flag("--with-second", with_second, "include Q(s) and gamma''(s)");
    cmd_derive->add_flag("--gamma2-at-0", gamma2_at_0, "estimate Gamma''(0) and compare");
    cmd_derive->add_flag("--reparam", reparam, "emit Gamma(t) = gamma(t^2) frames");

    // verify ------------------------------------------------------------
    auto* cmd_verify = app.add_subcommand("verify", "run a verification experiment");
    std::string check;
    cmd_verify->add_option("check", check, "diam-e|lipschitz|diam-k|gain|gprime-limit|tip-identity")
        ->required();
    DriverOpts verify_driver;
    verify_driver.attach(cmd_verify);
    int samples = 50;
    int verify_n = 2048;
    double verify_s = 0.25;
    double verify_delta = 0.25;
    double verify_t = 1.0;
    int j_max = 8;
    int n_eps = 8;
    std::string seeds_spec = "1..10";
    double cap = 100.0;
    cmd_verify->add_option("--samples", samples)->capture_default_str();
    cmd_verify->add_option("--n", verify_n)->capture_default_str();
    cmd_verify->add_option("--s", verify_s)->capture_default_str();
    cmd_verify->add_option("--delta", verify_delta)->capture_default_str();
    cmd_verify->add_option("--t", verify_t)->capture_default_str();
    cmd_verify->add_option("--j-max", j_max)->capture_default_str();
    cmd_verify->add_option("--n-eps", n_eps)->capture_default_str();
    cmd_verify->add_option("--seeds", seeds_spec, "range 1..10 or comma list")
        ->capture_default_str();
    cmd_verify->add_option("--cap", cap)->capture_default_str();
    int verify_n_quad = 2048;
    cmd_verify->add_option("--n-quad", verify_n_quad)->capture_default_str();

    // holder ------------------------------------------------------------
    auto* cmd_holder = app.add_subcommand("holder", "log-log modulus fit of CSV samples");
    std::string holder_in;
    std::string holder_kind = "function";
    cmd_holder->add_option("--in", holder_in, "CSV with t,re,im columns")->required();
    cmd_holder->add_option("--kind", holder_kind, "function|derivative")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    set_max_threads(threads);

    try {
        if (*cmd_trace) {
            const DrivingFunction lam = trace_driver.build();
            const TraceMethod method = trace_method == "reverse-ode" ? TraceMethod::ReverseOde
                                                                     : TraceMethod::Composition;
            const TracedSlit slit = trace(lam, trace_n, method);
            for (const auto& w : slit.warnings) std::cerr << "warning: " << w << '\n';
            emit(out_path, format == "json" ? slit_to_json(slit).dump(2) : slit_to_csv(slit));
            return 0;
        }

        if (*cmd_derive) {
            const DrivingFunction lam = derive_driver.build();
            if (gamma2_at_0) {
                const GammaSecond0 g2 = gamma_second0(lam, 0.0, n_quad);
                json j;
                j["estimate"] = {{"re", g2.estimate.real()}, {"im", g2.estimate.imag()}};
                j["prediction"] = g2.prediction;
                j["spread"] = g2.spread;
                j["converged"] = g2.converged;
                emit(out_path, j.dump(2));
                if (!g2.converged)
                    std::cerr << "warning: extrapolation spread exceeds 10% of magnitude\n";
                return 0;
            }
            if (reparam) {
                const int N = s_grid > 0 ? s_grid : 64;
                const double t_max = std::sqrt(lam.horizon());
                std::string csv = "t,re_Gamma,im_Gamma,re_Gp,im_Gp\n";
                for (int k = 1; k <= N; ++k) {
                    const GammaFrame f = gamma_frame(lam, t_max * k / N, n_quad);
                    csv += format_g17(f.t) + ',' + format_g17(f.Gamma.real()) + ',' +
                           format_g17(f.Gamma.imag()) + ',' + format_g17(f.Gamma_prime.real()) +
                           ',' + format_g17(f.Gamma_prime.imag()) + '\n';
                }
                emit(out_path, csv);
                return 0;
            }
            if (s_grid > 0) {
                std::vector<TipFrame> frames;
                for (int k = 1; k <= s_grid; ++k)
                    frames.push_back(
                        tip_frame(lam, lam.horizon() * k / s_grid, n_quad, with_second));
                emit(out_path, format == "json"
                                   ? [&] {
                                         json arr = json::array();
                                         for (const auto& f : frames)
                                             arr.push_back(tip_frame_to_json(f));
                                         return arr.dump(2);
                                     }()
                                   : tip_frames_to_csv(frames));
                return 0;
            }
            const double s = derive_s > 0.0 ? derive_s : lam.horizon();
            const TipFrame f = tip_frame(lam, s, n_quad, with_second);
            for (const auto& w : f.warnings) std::cerr << "warning: " << w << '\n';
            emit(out_path, tip_frame_to_json(f).dump(2));
            return 0;
        }

        if (*cmd_verify) {
            VerificationReport rep;
            if (check == "diam-e") {
                rep = e_sigma_sample(verify_driver.sigma, samples, verify_n, verify_driver.seed);
            } else if (check == "lipschitz") {
                rep = lipschitz_experiment(verify_driver.sigma, samples, verify_n,
                                           verify_driver.seed, cap);
            } else if (check == "diam-k") {
                const auto base = DrivingFunction::constant(0.0, verify_driver.T);
                const HolderFit fit = common_past_divergence(base, verify_s, verify_delta,
                                                             n_eps, verify_n);
                rep.name = "diam-k";
                rep.samples = n_eps;
                rep.set_scalar("exponent", fit.exponent);
                rep.set_scalar("r_squared", fit.r_squared);
                rep.set_scalar("target", 1.0 + verify_delta);
                rep.margin = std::min(0.1 - std::fabs(fit.exponent - (1.0 + verify_delta)),
                                      fit.r_squared - 0.95);
                rep.pass = rep.margin >= 0.0;
            } else if (check == "gain") {
                rep = gain_experiment(verify_driver.beta, verify_driver.M,
                                      parse_seeds(seeds_spec), verify_n);
            } else if (check == "gprime-limit") {
                rep = gprime_limit_check(verify_driver.build(), verify_s, j_max);
            } else if (check == "tip-identity") {
                rep = tip_identity_check(verify_driver.build(), verify_t, verify_n_quad);
            } else {
                throw CLI::ValidationError("unknown check: " + check);
            }
            emit(out_path, report_to_json(rep).dump(2));
            std::cerr << rep.to_text();
            return rep.pass ? 0 : 1;
        }

        if (*cmd_holder) {
            std::ifstream f(holder_in);
            if (!f) throw std::runtime_error("cannot open: " + holder_in);
            std::string line;
            std::vector<double> ts;
            std::vector<Complex> vals;
            bool first = true;
            while (std::getline(f, line)) {
                if (line.empty()) continue;
                if (first) {
                    first = false;
                    if (line.find_first_not_of("0123456789+-.eE, \t") != std::string::npos)
                        continue;
                }
                double t, re, im = 0.0;
                if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &re, &im) >= 2) {
                    ts.push_back(t);
                    vals.push_back(Complex(re, im));
                }
            }
            const HolderFit fit = holder_fit(
                ts, vals, holder_kind == "derivative" ? FitKind::Derivative : FitKind::Function);
            emit(out_path, holder_fit_to_json(fit).dump(2));
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 2;
}

} // namespace loewner
