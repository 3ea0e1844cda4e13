#include "loewner/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace loewner {

std::string format_g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string slit_to_csv(const TracedSlit& slit) {
    std::string out = "t,re,im\n";
    for (std::size_t k = 0; k < slit.times.size(); ++k) {
        out += format_g17(slit.times[k]);
        out += ',';
        out += format_g17(slit.points[k].real());
        out += ',';
        out += format_g17(slit.points[k].imag());
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << contents;
    if (!f) throw std::runtime_error("write failed: " + path);
}

json slit_to_json(const TracedSlit& slit) {
    json j;
    j["times"] = slit.times;
    json re = json::array(), im = json::array();
    for (const Complex& p : slit.points) {
        re.push_back(p.real());
        im.push_back(p.imag());
    }
    j["re"] = re;
    j["im"] = im;
    j["method"] = slit.method == TraceMethod::Composition ? "composition" : "reverse-ode";
    j["driving_ref"] = slit.driving_ref;
    if (!slit.warnings.empty()) j["warnings"] = slit.warnings;
    return j;
}

json driving_to_json(const DrivingFunction& lambda) {
    if (lambda.is_derived())
        throw std::domain_error("derived driving functions do not serialize; "
                                "serialize the catalog parent instead");
    json j;
    j["family"] = family_name(lambda.family());
    j["params"] = lambda.params();
    j["T"] = lambda.horizon();
    if (lambda.seed()) j["seed"] = *lambda.seed();
    return j;
}

DrivingFunction driving_from_json(const json& j) {
    const Family fam = family_from_name(j.at("family").get<std::string>());
    const double T = j.at("T").get<double>();
    std::map<std::string, double> p;
    if (j.contains("params")) p = j["params"].get<std::map<std::string, double>>();
    const std::uint64_t seed = j.value("seed", 0ULL);
    switch (fam) {
        case Family::Constant:
            return DrivingFunction::constant(p.at("c"), T);
        case Family::Linear:
            return DrivingFunction::linear(p.at("b"), T);
        case Family::Spiral:
            return DrivingFunction::spiral(p.at("kappa"), T);
        case Family::Power:
            return DrivingFunction::power(p.at("M"), p.at("beta"), T,
                                          p.count("b") ? p.at("b") : 0.0);
        case Family::Weierstrass:
            return DrivingFunction::weierstrass(p.at("M"), p.at("beta"), T, seed);
        case Family::MidpointRandom:
            return DrivingFunction::midpoint_random(
                p.at("sigma"), T, seed,
                p.count("levels") ? static_cast<int>(p.at("levels")) : 12);
        case Family::Tabulated:
            throw std::domain_error("tabulated drivers load from CSV, not JSON");
    }
    throw std::domain_error("unreachable");
}

DrivingFunction driving_from_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open driver CSV: " + path);
    std::string line;
    std::vector<double> t, v;
    bool first = true;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            const bool header = std::any_of(line.begin(), line.end(),
                                            [](unsigned char c) { return std::isalpha(c); });
            if (header) continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("driver CSV: expected two columns t,lambda");
        t.push_back(std::stod(line.substr(0, comma)));
        v.push_back(std::stod(line.substr(comma + 1)));
    }
    return DrivingFunction::tabulated(std::move(t), std::move(v));
}

json flow_to_json(const DiscretizedFlow& flow) {
    json j;
    j["times"] = flow.times;
    j["driving_values"] = flow.driving;
    return j;
}

DiscretizedFlow flow_from_json(const json& j) {
    DiscretizedFlow flow;
    flow.times = j.at("times").get<std::vector<double>>();
    flow.driving = j.at("driving_values").get<std::vector<double>>();
    if (flow.times.size() != flow.driving.size() + 1)
        throw std::runtime_error("flow JSON: times must have one more entry than driving_values");
    flow.increments.resize(flow.driving.size());
    for (std::size_t k = 0; k < flow.driving.size(); ++k) {
        flow.increments[k] = flow.times[k + 1] - flow.times[k];
        if (flow.increments[k] <= 0.0)
            throw std::runtime_error("flow JSON: times must be strictly increasing");
    }
    return flow;
}

namespace {

json complex_to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

} // namespace

json tip_frame_to_json(const TipFrame& frame) {
    json j;
    j["s"] = frame.s;
    j["gamma"] = complex_to_json(frame.gamma);
    j["L"] = complex_to_json(frame.L);
    j["gamma_prime"] = complex_to_json(frame.gamma_prime);
    if (frame.Q) j["Q"] = complex_to_json(*frame.Q);
    if (frame.gamma_second) j["gamma_second"] = complex_to_json(*frame.gamma_second);
    j["quadrature"] = {{"n_quad", frame.quadrature.n_quad},
                       {"n_tip", frame.quadrature.n_tip},
                       {"delta_eff", frame.quadrature.delta_eff}};
    if (!frame.warnings.empty()) j["warnings"] = frame.warnings;
    return j;
}

json gamma_frame_to_json(const GammaFrame& frame) {
    json j;
    j["t"] = frame.t;
    j["Gamma"] = complex_to_json(frame.Gamma);
    j["Gamma_prime"] = complex_to_json(frame.Gamma_prime);
    if (frame.Gamma_second0) j["Gamma_second0"] = complex_to_json(*frame.Gamma_second0);
    return j;
}

std::string tip_frames_to_csv(const std::vector<TipFrame>& frames) {
    const bool with_second =
        !frames.empty() && frames.front().gamma_second.has_value();
    std::string out = "s,re_gamma,im_gamma,re_L,im_L,re_gp,im_gp";
    if (with_second) out += ",re_gpp,im_gpp";
    out += '\n';
    for (const TipFrame& f : frames) {
        out += format_g17(f.s);
        for (double x : {f.gamma.real(), f.gamma.imag(), f.L.real(), f.L.imag(),
                         f.gamma_prime.real(), f.gamma_prime.imag()}) {
            out += ',';
            out += format_g17(x);
        }
        if (with_second) {
            const Complex gpp = f.gamma_second.value_or(Complex{});
            out += ',';
            out += format_g17(gpp.real());
            out += ',';
            out += format_g17(gpp.imag());
        }
        out += '\n';
    }
    return out;
}

json report_to_json(const VerificationReport& rep) {
    json j;
    j["name"] = rep.name;
    j["pass"] = rep.pass;
    j["margin"] = rep.margin;
    j["samples"] = rep.samples;
    j["seed"] = rep.seed;
    if (!rep.scalars.empty()) j["scalars"] = rep.scalars;
    if (!rep.columns.empty()) {
        j["columns"] = rep.columns;
        j["rows"] = rep.rows;
    }
    if (!rep.notes.empty()) j["notes"] = rep.notes;
    return j;
}

json holder_fit_to_json(const HolderFit& fit) {
    json j;
    j["exponent"] = fit.exponent;
    j["constant"] = fit.constant;
    j["r_squared"] = fit.r_squared;
    j["scale_range"] = {fit.j_min, fit.j_max};
    j["n_pairs"] = fit.n_pairs;
    return j;
}

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    os << name << ": " << (pass ? "PASS" : "FAIL") << "  margin=" << margin
       << "  samples=" << samples << "  seed=" << seed << '\n';
    for (const auto& [k, v] : scalars) os << "  " << std::left << std::setw(20) << k << v << '\n';
    if (!columns.empty() && rows.size() <= 24) {
        os << "  ";
        for (const auto& c : columns) os << std::setw(16) << c;
        os << '\n';
        for (const auto& row : rows) {
            os << "  ";
            for (double x : row) os << std::setw(16) << std::setprecision(8) << x;
            os << '\n';
        }
    }
    for (const auto& nte : notes) os << "  note: " << nte << '\n';
    return os.str();
}

} // namespace loewner
