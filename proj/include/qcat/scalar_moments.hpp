#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qcat/pairings.hpp"
#include "qcat/polynomial.hpp"

namespace qcat {

// Open-arc dynamic program for S_k(p) = Σ_ω Π_{(l,m)∈ω} p^{m−l}.
//
// Sites 1..2k are visited left to right. At a site either a new arc opens
// (m → m+1) or an open arc closes (m → m−1, with multiplicity m for all
// pairings and 1 for non-crossing ones, where only the innermost arc may
// close). Between consecutive sites each open arc contributes one factor p,
// so values[m] is scaled by p^m. The answer is values[0] after site 2k.
// O(k²) time and O(k) memory. Only the geometric weight factorizes over gaps,
// so general kernels are served by enumeration instead.

enum class Backend { Exact, LogSpace };

struct ExactDpState {
    std::size_t site = 0;
    std::vector<Rational> values;
};

struct LogDpState {
    std::size_t site = 0;
    // log of values[m] minus log_offset; -inf marks an empty entry.
    std::vector<double> log_values;
    double log_offset = 0.0;
};

struct ExactOptions {
    // p > 1 is only meaningful algebraically; off by default.
    bool allow_p_above_one = false;
};

Rational arc_dp_exact(std::size_t k, const Rational& p, PairingClass cls, const ExactOptions& opts = {},
                      const std::function<void(const ExactDpState&)>& observe = {});

// Returns log S_k(p). Requires 0 < p ≤ 1.
double arc_dp_log(std::size_t k, double p, PairingClass cls,
                  const std::function<void(const LogDpState&)>& observe = {});

inline Rational scalar_moment_dp(std::size_t k, const Rational& p, const ExactOptions& opts = {})
{
    return arc_dp_exact(k, p, PairingClass::All, opts);
}
inline double scalar_moment_dp_log(std::size_t k, double p) { return arc_dp_log(k, p, PairingClass::All); }

inline Rational noncrossing_moment_dp(std::size_t k, const Rational& p, const ExactOptions& opts = {})
{
    return arc_dp_exact(k, p, PairingClass::NonCrossing, opts);
}
inline double noncrossing_moment_dp_log(std::size_t k, double p)
{
    return arc_dp_log(k, p, PairingClass::NonCrossing);
}

struct GrowthPoint {
    std::size_t k = 0;
    double p = 0.0;
    double log_moment = 0.0;
    double growth_rate = 0.0;  // log_moment / k
};

struct GrowthCurve {
    std::vector<GrowthPoint> points;
    // Intercept of a least-squares line of growth_rate against 1/k over the
    // upper half of the k grid (at least two points when available). This is
    // a finite-k estimate of the k → ∞ limit.
    double extrapolated = 0.0;
    std::size_t fit_points = 0;
};

// Growth rates of the all-pairings sum at the given ascending k values.
// Grid points are independent and may be evaluated on `workers` threads;
// the result does not depend on the worker count.
GrowthCurve growth_curve(const std::vector<std::size_t>& k_list, double p, std::size_t workers = 1);

struct PcBracket {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t k_probe = 0;
    std::vector<std::size_t> k_grid;
    std::size_t iterations = 0;
    std::string method;
};

// Probe grid used by pc_bracket: k_probe·j/8 for j = 1..8, deduplicated.
std::vector<std::size_t> pc_probe_grid(std::size_t k_probe);

// Bisection on p of the sign of the extrapolated growth rate at k_probe. The
// interval is a finite-k estimate of the critical weight, not an exact
// value. Throws NoSignChange unless the estimate is negative at p_lo and
// positive at p_hi.
PcBracket pc_bracket(double p_lo, double p_hi, std::size_t k_probe, double tol, std::size_t workers = 1);

}  // namespace qcat
