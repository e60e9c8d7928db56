#pragma once
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "percoiso/errors.hpp"
#include "percoiso/peierls.hpp"

namespace perco {

struct DecayPoint {
    double d = 0;    // distance or curve index
    double phi = 0;  // measured connectivity
    double se = 0;   // standard error, 0 for exact values
};

struct DecayCurve {
    std::vector<DecayPoint> points;  // distances strictly increasing
    std::string family;
    double p = 0;
    std::string estimator;  // "exact" or "monte-carlo"
};

struct FitResult {
    double slope = 0;      // decay rate (exponential) or exponent (polynomial)
    double intercept = 0;  // ln of the prefactor
    double residual = 0;   // weighted RMS of ln-residuals
    std::uint32_t points_used = 0;
    std::uint32_t dropped_zero = 0;  // phi <= 0 points are dropped, not faked
};

namespace detail {

// weighted least squares of ln(phi) against a regressor; weights from the
// delta method (sigma_ln = se/phi), exact points weigh 1.
template <class Reg>
inline FitResult wls_log_fit(const DecayCurve& c, Reg&& reg) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    FitResult r;
    std::vector<std::pair<double, double>> pts;  // (x, lnphi)
    std::vector<double> wts;
    for (std::size_t i = 1; i < c.points.size(); ++i)
        if (!(c.points[i].d > c.points[i - 1].d))
            throw DomainError("decay curve distances must be strictly increasing");
    for (const auto& pt : c.points) {
        if (!(pt.phi > 0)) {
            ++r.dropped_zero;
            continue;
        }
        double x = reg(pt.d);
        double y = std::log(pt.phi);
        double w = 1.0;
        if (pt.se > 0) {
            double s = pt.se / pt.phi;
            w = 1.0 / (s * s);
        }
        pts.push_back({x, y});
        wts.push_back(w);
    }
    if (pts.size() < 4)
        throw InsufficientDataError("fit needs at least 4 positive points, have " +
                                    std::to_string(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        sw += wts[i];
        sx += wts[i] * pts[i].first;
        sy += wts[i] * pts[i].second;
        sxx += wts[i] * pts[i].first * pts[i].first;
        sxy += wts[i] * pts[i].first * pts[i].second;
    }
    double det = sw * sxx - sx * sx;
    if (std::fabs(det) < 1e-12 * sw * sxx + 1e-300)
        throw InsufficientDataError("degenerate regressor in decay fit");
    double b = (sw * sxy - sx * sy) / det;   // slope of ln(phi) vs x
    double a = (sy - b * sx) / sw;           // intercept
    double ss = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double resid = pts[i].second - (a + b * pts[i].first);
        ss += wts[i] * resid * resid;
    }
    r.slope = -b;  // report decay rates positive
    r.intercept = a;
    r.residual = std::sqrt(ss / sw);
    r.points_used = static_cast<std::uint32_t>(pts.size());
    return r;
}

}  // namespace detail

// ln(phi) = intercept - rate * d
inline FitResult fit_exponential(const DecayCurve& c) {
    return detail::wls_log_fit(c, [](double d) { return d; });
}

// ln(phi) = intercept - exponent * ln(1 + d)
inline FitResult fit_polynomial(const DecayCurve& c) {
    return detail::wls_log_fit(c, [](double d) { return std::log1p(d); });
}

struct Classification {
    std::string verdict;  // "exponential" | "polynomial" | "inconclusive"
    FitResult exponential, polynomial;
    double residual_ratio = 0;  // min/max
};

// Picks the model with the smaller weighted residual when the ratio is
// decisive (< threshold); ties and degenerate (both near-zero residual,
// e.g. flat curves) are inconclusive.
inline Classification classify_decay(const DecayCurve& c, double threshold = 0.8) {
    Classification out;
    out.exponential = fit_exponential(c);
    out.polynomial = fit_polynomial(c);
    double re = out.exponential.residual, rp = out.polynomial.residual;
    double lo = std::min(re, rp), hi = std::max(re, rp);
    out.residual_ratio = hi > 0 ? lo / hi : 1.0;
    if (hi < 1e-12) {
        out.verdict = "inconclusive";  // both fit perfectly: no signal to split
    } else if (out.residual_ratio < threshold) {
        out.verdict = re < rp ? "exponential" : "polynomial";
    } else {
        out.verdict = "inconclusive";
    }
    return out;
}

struct BracketPoint {
    double d = 0;
    std::uint64_t f = 0;
    double phi = 0, se = 0;
    double lower = 0, upper = 0;
    bool pass = false;
};

// Per-point comparison with the two-sided f-bracket, with a 3-standard-error
// statistical allowance. Refuses p outside the validity range rather than
// extrapolating the theorem.
inline std::vector<BracketPoint> bracket_compare(const DecayCurve& c, const PeierlsBundle& bundle,
                                                 const std::vector<std::uint64_t>& f_values) {
    if (f_values.empty()) throw InsufficientDataError("bracket_compare: no f values supplied");
    if (f_values.size() != c.points.size())
        throw InsufficientDataError("bracket_compare: f values misaligned with curve points");
    if (!bundle.r_bar) throw DomainError("bracket_compare: bundle lacks the wedge constant");
    const double lam = bundle.lambda_of(c.p);
    if (!(lam <= 1.0 / (4.0 * *bundle.r_bar)))
        throw DomainError("bracket_compare: p = " + std::to_string(c.p) +
                          " is outside the validity range lambda <= 1/(4 r_bar)");
    std::vector<BracketPoint> out;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        BracketPoint b;
        b.d = c.points[i].d;
        b.f = f_values[i];
        b.phi = c.points[i].phi;
        b.se = c.points[i].se;
        double f = static_cast<double>(b.f);
        b.lower = (1.0 / 3.0) * std::pow(lam * std::pow(c.p, 1.0 + 1.0 / bundle.R_hat), f);
        b.upper = (4.0 / 3.0) * std::pow(*bundle.r_bar * lam, f);
        b.pass = (b.phi + 3 * b.se >= b.lower) && (b.phi - 3 * b.se <= b.upper);
        out.push_back(b);
    }
    return out;
}

}  // namespace perco
