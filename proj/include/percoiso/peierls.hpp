#pragma once
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "percoiso/errors.hpp"

namespace perco {

// Closed-form threshold machinery. R_hat and P_hat are windowed estimates of
// the contour and wedge constants (upper bounds on the true infima), so every
// derived quantity is conditional on the estimation scale and labeled so by
// the callers.
struct PeierlsBundle {
    int delta = 0;
    double R_hat = 0;
    std::optional<double> P_hat;

    double r = 0;                      // (2 e delta^2)^(1/R_hat)
    std::optional<double> r_bar;       // e^(1/P_hat) (2 delta^2)^(1/R_hat)
    double pc_bound = 0;               // 1 - 1/(2r)
    std::optional<double> pc_bound_wedge;  // 1 - 1/(2 r_bar)
    double p_valid_exp = 0;            // p >= 4r/(4r+1), the exponential-decay regime
    std::optional<double> p_valid_bracket;         // p >= 4 r_bar/(1+4 r_bar), lambda <= 1/(4 r_bar)
    std::optional<double> p_valid_bracket_stated;  // 4 r_bar/(1+r_bar); exceeds 1 once r_bar >= 1/3,
                                                   // kept for reporting alongside the usable range

    double lambda_of(double p) const { return (1.0 - p) / p; }
    // decay exponents of the two-sided bracket in its validity range
    double alpha1(double p) const { return std::fabs(std::log((1.0 - p) * std::pow(p, 1.0 / R_hat))); }
    double alpha2(double p) const {
        if (!r_bar) throw DomainError("alpha2 needs the wedge constant");
        return std::fabs(std::log(*r_bar * (1.0 - p) / p));
    }
};

// p_c <= 1 - 1/(2r) once contour counts grow at most like r^n.
inline double peierls_bound(double r) {
    if (!(r >= 1.0)) throw DomainError("peierls_bound: need r >= 1");
    return 1.0 - 1.0 / (2.0 * r);
}

inline PeierlsBundle make_bundle(int delta, double R_hat, std::optional<double> P_hat = {}) {
    if (delta < 1) throw DomainError("bundle: max degree must be >= 1");
    if (!(R_hat > 0.0) || !(R_hat <= 1.0)) throw DomainError("bundle: need 0 < R_hat <= 1");
    if (P_hat && !(*P_hat > 0.0)) throw DomainError("bundle: need P_hat > 0");
    PeierlsBundle b;
    b.delta = delta;
    b.R_hat = R_hat;
    b.P_hat = P_hat;
    const double e = std::exp(1.0);
    const double d2 = 2.0 * delta * delta;
    b.r = std::pow(e * d2, 1.0 / R_hat);
    b.pc_bound = peierls_bound(b.r);
    b.p_valid_exp = 4.0 * b.r / (4.0 * b.r + 1.0);
    if (P_hat) {
        b.r_bar = std::exp(1.0 / *P_hat) * std::pow(d2, 1.0 / R_hat);
        b.pc_bound_wedge = peierls_bound(*b.r_bar);
        b.p_valid_bracket = 4.0 * *b.r_bar / (1.0 + 4.0 * *b.r_bar);
        b.p_valid_bracket_stated = 4.0 * *b.r_bar / (1.0 + *b.r_bar);
    }
    return b;
}

struct CertifiedCount {
    std::uint64_t count = 0;
    bool certified = false;
};

struct GrowthCheck {
    enum class Verdict { pass, fail, inconclusive } verdict = Verdict::pass;
    std::optional<std::uint64_t> first_violation;
    bool no_data = false;
};

// pass iff every certified count satisfies count <= r^n. Uncertified input is
// refused (lower bounds cannot support the claim either way).
inline GrowthCheck growth_check(const std::map<std::uint64_t, CertifiedCount>& counts, double r) {
    GrowthCheck g;
    if (counts.empty()) {
        g.no_data = true;
        return g;
    }
    for (const auto& [n, c] : counts) {
        if (!c.certified) {
            g.verdict = GrowthCheck::Verdict::inconclusive;
            g.first_violation = n;
            return g;
        }
    }
    for (const auto& [n, c] : counts) {
        if (c.count == 0) continue;
        // compare in logs to dodge overflow
        if (std::log(static_cast<double>(c.count)) > static_cast<double>(n) * std::log(r)) {
            g.verdict = GrowthCheck::Verdict::fail;
            g.first_violation = n;
            return g;
        }
    }
    return g;
}

}  // namespace perco
