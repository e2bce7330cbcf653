#include "qcat/scalar_moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qcat/errors.hpp"
#include "qcat/parallel.hpp"

namespace qcat {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) with -inf as the additive identity.
double log_add(double a, double b)
{
    if (a < b) std::swap(a, b);
    if (b == kNegInf) return a;
    return a + std::log1p(std::exp(b - a));
}

// Open arcs possible after visiting `site` of 2k sites.
std::size_t band(std::size_t site, std::size_t k) { return std::min(site, 2 * k - site); }

}  // namespace

Rational arc_dp_exact(std::size_t k, const Rational& p, PairingClass cls, const ExactOptions& opts,
                      const std::function<void(const ExactDpState&)>& observe)
{
    if (p <= 0) throw InvalidWeight("weight p must be positive, got " + p.get_str());
    if (p > 1 && !opts.allow_p_above_one) {
        throw InvalidWeight("weight p must lie in (0,1], got " + p.get_str() +
                            " (p > 1 requires the explicit algebraic flag)");
    }

    // Gap factor per open-arc count: p^m.
    std::vector<Rational> gap(k + 1);
    gap[0] = 1;
    for (std::size_t m = 1; m <= k; ++m) gap[m] = gap[m - 1] * p;

    ExactDpState st;
    st.values.assign(k + 1, Rational(0));
    st.values[0] = 1;
    std::vector<Rational> next(k + 1);

    for (std::size_t site = 1; site <= 2 * k; ++site) {
        const std::size_t prev_band = band(site - 1, k);
        const std::size_t cur_band = band(site, k);
        std::fill(next.begin(), next.end(), Rational(0));
        for (std::size_t m = 0; m <= prev_band; ++m) {
            const Rational& v = st.values[m];
            if (v == 0) continue;
            if (m + 1 <= cur_band) next[m + 1] += v;
            if (m >= 1) {
                if (cls == PairingClass::All) {
                    next[m - 1] += v * Rational(static_cast<unsigned long>(m));
                } else {
                    next[m - 1] += v;
                }
            }
        }
        if (site < 2 * k) {
            for (std::size_t m = 1; m <= cur_band; ++m) next[m] *= gap[m];
        }
        std::swap(st.values, next);
        st.site = site;
        if (observe) observe(st);
    }
    st.values[0].canonicalize();
    return st.values[0];
}

double arc_dp_log(std::size_t k, double p, PairingClass cls, const std::function<void(const LogDpState&)>& observe)
{
    if (!(p > 0.0 && p <= 1.0)) {
        throw InvalidWeight("log-space backend requires 0 < p <= 1, got " + std::to_string(p));
    }
    const double log_p = std::log(p);

    LogDpState st;
    st.log_values.assign(k + 1, kNegInf);
    st.log_values[0] = 0.0;
    std::vector<double> next(k + 1);

    for (std::size_t site = 1; site <= 2 * k; ++site) {
        const std::size_t prev_band = band(site - 1, k);
        const std::size_t cur_band = band(site, k);
        std::fill(next.begin(), next.end(), kNegInf);
        for (std::size_t m = 0; m <= prev_band; ++m) {
            const double v = st.log_values[m];
            if (v == kNegInf) continue;
            if (m + 1 <= cur_band) next[m + 1] = log_add(next[m + 1], v);
            if (m >= 1) {
                const double close = cls == PairingClass::All ? v + std::log(static_cast<double>(m)) : v;
                next[m - 1] = log_add(next[m - 1], close);
            }
        }
        if (site < 2 * k) {
            for (std::size_t m = 1; m <= cur_band; ++m) {
                if (next[m] != kNegInf) next[m] += static_cast<double>(m) * log_p;
            }
        }
        // Renormalize so the largest entry sits at zero.
        double top = kNegInf;
        for (std::size_t m = 0; m <= cur_band; ++m) top = std::max(top, next[m]);
        if (top != kNegInf) {
            for (std::size_t m = 0; m <= cur_band; ++m) {
                if (next[m] != kNegInf) next[m] -= top;
            }
            st.log_offset += top;
        }
        std::swap(st.log_values, next);
        st.site = site;
        if (observe) observe(st);
    }
    return st.log_values[0] + st.log_offset;
}

GrowthCurve growth_curve(const std::vector<std::size_t>& k_list, double p, std::size_t workers)
{
    if (k_list.empty()) throw InvalidConfig("growth_curve: empty k grid");
    for (std::size_t i = 0; i < k_list.size(); ++i) {
        if (k_list[i] == 0) throw InvalidConfig("growth_curve: k must be positive");
        if (i > 0 && k_list[i] <= k_list[i - 1]) throw InvalidConfig("growth_curve: k grid must be ascending");
    }
    if (!(p > 0.0 && p <= 1.0)) {
        throw InvalidWeight("growth_curve requires 0 < p <= 1, got " + std::to_string(p));
    }

    GrowthCurve curve;
    curve.points.resize(k_list.size());
    parallel_for(k_list.size(), workers, [&](std::size_t i) {
        const std::size_t k = k_list[i];
        const double lm = scalar_moment_dp_log(k, p);
        curve.points[i] = GrowthPoint{k, p, lm, lm / static_cast<double>(k)};
    });

    const std::size_t n = curve.points.size();
    const std::size_t used = n == 1 ? 1 : std::max<std::size_t>(2, (n + 1) / 2);
    curve.fit_points = used;
    if (used == 1) {
        curve.extrapolated = curve.points.back().growth_rate;
        return curve;
    }
    // Least squares of growth_rate against x = 1/k; report the intercept.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = n - used; i < n; ++i) {
        const double x = 1.0 / static_cast<double>(curve.points[i].k);
        const double y = curve.points[i].growth_rate;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(used);
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    curve.extrapolated = (sy - slope * sx) / m;
    return curve;
}

std::vector<std::size_t> pc_probe_grid(std::size_t k_probe)
{
    std::vector<std::size_t> grid;
    for (std::size_t j = 1; j <= 8; ++j) {
        const std::size_t k = k_probe * j / 8;
        if (k >= 1 && (grid.empty() || k > grid.back())) grid.push_back(k);
    }
    return grid;
}

PcBracket pc_bracket(double p_lo, double p_hi, std::size_t k_probe, double tol, std::size_t workers)
{
    if (k_probe == 0) throw InvalidConfig("pc_bracket: k_probe must be positive");
    if (!(tol > 0.0)) throw InvalidConfig("pc_bracket: tolerance must be positive");
    if (!(p_lo <= p_hi)) throw InvalidConfig("pc_bracket: p_lo must not exceed p_hi");

    PcBracket out;
    out.k_probe = k_probe;
    out.k_grid = pc_probe_grid(k_probe);
    out.method = "bisection on sign of growth rate extrapolated linearly in 1/k over the upper half of the probe grid";

    auto estimate = [&](double p) { return growth_curve(out.k_grid, p, workers).extrapolated; };

    const double g_lo = estimate(p_lo);
    const double g_hi = estimate(p_hi);
    if (!(g_lo < 0.0 && g_hi > 0.0)) {
        throw NoSignChange("pc_bracket: extrapolated growth is " + std::to_string(g_lo) + " at p_lo=" +
                           std::to_string(p_lo) + " and " + std::to_string(g_hi) + " at p_hi=" +
                           std::to_string(p_hi) + "; need negative then positive");
    }
    double lo = p_lo;
    double hi = p_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (estimate(mid) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
        ++out.iterations;
    }
    out.lo = lo;
    out.hi = hi;
    return out;
}

}  // namespace qcat
