#pragma once

#include <map>
#include <string>
#include <vector>

namespace loewner {

// Result of a log-log modulus-of-continuity regression.
struct HolderFit {
    double exponent = 0.0;   // fitted slope
    double constant = 0.0;   // fitted prefactor (exp of intercept)
    double r_squared = 0.0;
    int j_min = 0;           // dyadic levels actually used
    int j_max = 0;
    int n_pairs = 0;         // sample pairs feeding the moduli
};

// Outcome of a single verification experiment. `margin` is the signed
// distance to the bound being checked; pass <=> margin >= 0.
struct VerificationReport {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    long samples = 0;
    std::uint64_t seed = 0;
    // free-form numeric table, row-major with named columns
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, double> scalars;
    std::vector<std::string> notes;

    void set_scalar(const std::string& k, double v) { scalars[k] = v; }
    // aligned-column text rendering for terminals/logs
    std::string to_text() const;
};

} // namespace loewner
