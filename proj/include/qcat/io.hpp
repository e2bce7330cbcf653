#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qcat/pairings.hpp"
#include "qcat/qcatalan.hpp"
#include "qcat/rmt_sim.hpp"
#include "qcat/scalar_moments.hpp"

namespace qcat {

// Polynomial tables: {"table": name, "k_max": n, "entries": [{"k": k,
// "terms": [[e, "c"], ...]}, ...], "consistency": [...]}.
nlohmann::json table_to_json(const std::string& name, std::span<const WeightPoly> entries,
                             std::span<const ConsistencyRow> consistency);

// CSV header "k,exponent,coefficient"; the consistency report follows after a
// blank line with header "k,consistent,first_mismatch".
void write_table_csv(std::ostream& os, std::span<const WeightPoly> entries,
                     std::span<const ConsistencyRow> consistency);

nlohmann::json consistency_to_json(std::span<const ConsistencyRow> rows);

// Header "k,p,log_moment,growth_rate".
inline constexpr const char* kGrowthCsvHeader = "k,p,log_moment,growth_rate";
void write_growth_csv(std::ostream& os, std::span<const GrowthCurve> curves);
nlohmann::json growth_to_json(std::span<const GrowthCurve> curves);

nlohmann::json pc_to_json(const PcBracket& b, double p_lo, double p_hi, double tol);

nlohmann::json config_to_json(const RmtConfig& cfg);

// {"config": {...}, "mean", "stderr", "var_trace", "samples", "reference_Bk",
// "z_score"}; for N = 1 also "reference_scalar" and "z_score_scalar".
nlohmann::json estimate_to_json(const MomentEstimate& est);

// Header "n,k,factors,samples,mean,stderr,var_trace,reference_Bk,z_score".
inline constexpr const char* kEstimateCsvHeader = "n,k,factors,samples,mean,stderr,var_trace,reference_Bk,z_score";
void write_estimate_csv_row(std::ostream& os, const MomentEstimate& est);

// Exact value of "3/7", "0.25", "1", "-2.5e-3". Throws InvalidConfig on
// malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

// Shortest round-trip decimal for a double, as nlohmann/json prints it.
std::string format_double(double x);

}  // namespace qcat
