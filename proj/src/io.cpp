#include "qcat/io.hpp"

#include <cctype>
#include <cmath>

#include "qcat/errors.hpp"

namespace qcat {

namespace {

nlohmann::json number_or_null(double x)
{
    if (std::isfinite(x)) return x;
    return nullptr;
}

const char* method_name(GeneratorMethod m) { return m == GeneratorMethod::Auto ? "auto" : "toeplitz"; }

}  // namespace

Rational parse_rational(std::string_view text)
{
    auto bad = [&] { return InvalidConfig("cannot parse '" + std::string(text) + "' as an exact number"); };
    if (text.empty()) throw bad();

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const std::string num(text.substr(0, slash));
        const std::string den(text.substr(slash + 1));
        BigInt n, d;
        if (n.set_str(num, 10) != 0 || d.set_str(den, 10) != 0) throw bad();
        if (d == 0) throw bad();
        Rational q(n, d);
        q.canonicalize();
        return q;
    }

    // sign digits [. digits] [e sign digits]
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
    std::string digits;
    long scale = 0;
    bool any = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i, any = true) digits += text[i];
    if (i < text.size() && text[i] == '.') {
        for (++i; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i, any = true) {
            digits += text[i];
            --scale;
        }
    }
    if (!any) throw bad();
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) exp_negative = text[i++] == '-';
        long e = 0;
        bool exp_any = false;
        for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i, exp_any = true) {
            e = e * 10 + (text[i] - '0');
            if (e > 100000) throw bad();
        }
        if (!exp_any) throw bad();
        scale += exp_negative ? -e : e;
    }
    if (i != text.size()) throw bad();

    BigInt mantissa(digits, 10);
    BigInt power;
    mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    Rational q = scale < 0 ? Rational(mantissa, power) : Rational(mantissa * power);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

std::string format_double(double x)
{
    return nlohmann::json(x).dump();
}

nlohmann::json consistency_to_json(std::span<const ConsistencyRow> rows)
{
    auto out = nlohmann::json::array();
    for (const auto& r : rows) {
        out.push_back({{"k", r.k},
                       {"pass", r.pass},
                       {"first_mismatch", r.first_mismatch ? nlohmann::json(*r.first_mismatch) : nullptr}});
    }
    return out;
}

nlohmann::json table_to_json(const std::string& name, std::span<const WeightPoly> entries,
                             std::span<const ConsistencyRow> consistency)
{
    auto list = nlohmann::json::array();
    for (std::size_t k = 0; k < entries.size(); ++k) {
        auto e = to_json(entries[k]);
        list.push_back({{"k", k}, {"terms", e.at("terms")}});
    }
    return {{"table", name},
            {"k_max", entries.empty() ? 0 : entries.size() - 1},
            {"entries", list},
            {"consistency", consistency_to_json(consistency)}};
}

void write_table_csv(std::ostream& os, std::span<const WeightPoly> entries,
                     std::span<const ConsistencyRow> consistency)
{
    os << "k,exponent,coefficient\n";
    for (std::size_t k = 0; k < entries.size(); ++k) {
        for (const auto& [e, c] : entries[k].terms()) os << k << ',' << e << ',' << c.get_str() << '\n';
    }
    os << "\nk,consistent,first_mismatch\n";
    for (const auto& r : consistency) {
        os << r.k << ',' << (r.pass ? "true" : "false") << ',';
        if (r.first_mismatch) os << *r.first_mismatch;
        os << '\n';
    }
}

void write_growth_csv(std::ostream& os, std::span<const GrowthCurve> curves)
{
    os << kGrowthCsvHeader << '\n';
    for (const auto& c : curves) {
        for (const auto& g : c.points) {
            os << g.k << ',' << format_double(g.p) << ',' << format_double(g.log_moment) << ','
               << format_double(g.growth_rate) << '\n';
        }
    }
    for (const auto& c : curves) {
        if (c.points.empty()) continue;
        os << "# extrapolated_growth p=" << format_double(c.points.front().p)
           << " estimate=" << format_double(c.extrapolated) << " fit_points=" << c.fit_points << '\n';
    }
}

nlohmann::json growth_to_json(std::span<const GrowthCurve> curves)
{
    auto out = nlohmann::json::array();
    for (const auto& c : curves) {
        auto pts = nlohmann::json::array();
        for (const auto& g : c.points) {
            pts.push_back({{"k", g.k}, {"p", g.p}, {"log_moment", g.log_moment}, {"growth_rate", g.growth_rate}});
        }
        out.push_back({{"p", c.points.empty() ? 0.0 : c.points.front().p},
                       {"points", pts},
                       {"extrapolated_growth", {{"estimate", number_or_null(c.extrapolated)},
                                                {"fit_points", c.fit_points},
                                                {"method", "linear fit in 1/k over the upper half of the k grid"},
                                                {"label", "finite-k estimate"}}}});
    }
    return {{"curves", out}};
}

nlohmann::json pc_to_json(const PcBracket& b, double p_lo, double p_hi, double tol)
{
    return {{"bracket", {b.lo, b.hi}},
            {"width", b.hi - b.lo},
            {"input", {{"p_lo", p_lo}, {"p_hi", p_hi}, {"tol", tol}}},
            {"k_probe", b.k_probe},
            {"k_grid", b.k_grid},
            {"iterations", b.iterations},
            {"method", b.method},
            {"label", "finite-k estimate of the critical weight, not a proven value"}};
}

nlohmann::json config_to_json(const RmtConfig& cfg)
{
    nlohmann::json kernel;
    if (cfg.kernel.is_geometric()) {
        kernel = {{"type", "geometric"}, {"p", cfg.kernel.as_geometric().p}};
    } else {
        kernel = {{"type", "table"}, {"values", cfg.kernel.as_table().values}};
    }
    return {{"n", cfg.n},
            {"k", cfg.k},
            {"kernel", kernel},
            {"samples", cfg.samples},
            {"seed", cfg.seed},
            {"odd_probe", cfg.odd_probe},
            {"method", method_name(cfg.method)}};
}

nlohmann::json estimate_to_json(const MomentEstimate& est)
{
    auto config = config_to_json(est.config);
    config["factors"] = est.factors;
    config["offset"] = est.offset;

    const double ref = reference_limit(est.config.kernel, est.factors);
    nlohmann::json out = {{"config", config},
                          {"mean", est.mean},
                          {"stderr", est.std_error},
                          {"var_trace", est.sample_variance_of_trace},
                          {"samples", est.samples},
                          {"reference_Bk", number_or_null(ref)},
                          {"z_score", number_or_null((est.mean - ref) / est.std_error)}};
    if (est.config.n == 1) {
        const double scalar = reference_scalar(est.config.kernel, est.factors);
        out["reference_scalar"] = number_or_null(scalar);
        out["z_score_scalar"] = number_or_null((est.mean - scalar) / est.std_error);
    }
    return out;
}

void write_estimate_csv_row(std::ostream& os, const MomentEstimate& est)
{
    const double ref = reference_limit(est.config.kernel, est.factors);
    os << est.config.n << ',' << est.config.k << ',' << est.factors << ',' << est.samples << ','
       << format_double(est.mean) << ',' << format_double(est.std_error) << ','
       << format_double(est.sample_variance_of_trace) << ',' << format_double(ref) << ','
       << format_double((est.mean - ref) / est.std_error) << '\n';
}

}  // namespace qcat
