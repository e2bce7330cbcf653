// qcat: weighted pairing moments, q-Catalan polynomials and correlated GOE
// trace products from the command line.
//
// Exit codes: 0 success, 2 usage or domain error, 3 numeric or kernel failure.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcat/errors.hpp"
#include "qcat/io.hpp"
#include "qcat/kernel.hpp"
#include "qcat/pairings.hpp"
#include "qcat/qcatalan.hpp"
#include "qcat/rmt_sim.hpp"
#include "qcat/scalar_moments.hpp"

using namespace qcat;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct Output {
    std::string format = "json";
    std::string path;

    bool csv() const { return format == "csv"; }
};

// Runs `write` against the requested sink. Output goes to a buffer first so a
// failed command never leaves a partial file behind.
void emit(const Output& out, const std::function<void(std::ostream&)>& write)
{
    std::ostringstream buffer;
    write(buffer);
    if (out.path.empty()) {
        std::cout << buffer.str();
        std::cout.flush();
        return;
    }
    std::ofstream file(out.path, std::ios::binary);
    if (!file) throw InvalidConfig("cannot open output file " + out.path);
    file << buffer.str();
}

// Writes straight to the sink; used where the output is too large to buffer.
void stream_to(const Output& out, const std::function<void(std::ostream&)>& write)
{
    if (out.path.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(out.path, std::ios::binary);
    if (!file) throw InvalidConfig("cannot open output file " + out.path);
    write(file);
}

void emit_json(const Output& out, const json& doc)
{
    emit(out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

void add_output_flags(CLI::App* cmd, Output& out)
{
    cmd->add_option("--format", out.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", out.path, "Output file (default: standard output)");
}

// ---------------------------------------------------------------------------

struct EnumerateArgs {
    std::size_t k = 0;
    std::string cls = "all";
    EnumerationCaps caps;
    Output out;
};

int cmd_enumerate(const EnumerateArgs& a)
{
    const auto cls = parse_pairing_class(a.cls);
    // Validates the cap before any output is produced.
    if (a.k > a.caps.for_class(cls)) (void)weighted_sum_poly(a.k, cls, a.caps);

    std::vector<std::uint64_t> counts(a.k * a.k + 1, 0);
    std::uint64_t count = 0;
    stream_to(a.out, [&](std::ostream& os) {
        if (a.out.csv()) {
            os << "index,pairs,weight_exponent\n";
        } else {
            os << "{\n  \"k\": " << a.k << ",\n  \"class\": \"" << to_string(cls) << "\",\n  \"pairings\": [";
        }
        enumerate(a.k, cls, [&](const Pairing& p) {
            const auto w = weight_exponent(p);
            ++counts[w];
            if (a.out.csv()) {
                os << count << ',';
                for (std::size_t i = 0; i < p.pairs.size(); ++i) {
                    os << (i ? " " : "") << p.pairs[i].first << '-' << p.pairs[i].second;
                }
                os << ',' << w << '\n';
            } else {
                os << (count ? ",\n    " : "\n    ") << "{\"pairs\": [";
                for (std::size_t i = 0; i < p.pairs.size(); ++i) {
                    os << (i ? ", " : "") << '[' << p.pairs[i].first << ", " << p.pairs[i].second << ']';
                }
                os << "], \"weight_exponent\": " << w << '}';
            }
            ++count;
        });
        WeightPoly poly;
        for (std::size_t e = 0; e < counts.size(); ++e) poly.add_term(e, BigInt(std::to_string(counts[e]), 10));
        if (a.out.csv()) {
            os << "# count=" << count << " total_at_p1=" << eval_exact(poly, 1, 1).get_str() << '\n';
        } else {
            os << "\n  ],\n  \"count\": " << count << ",\n  \"total_at_p1\": \"" << eval_exact(poly, 1, 1).get_str()
               << "\",\n  \"weight_poly\": " << to_json(poly).dump() << "\n}\n";
        }
    });
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct TableArgs {
    std::size_t k_max = 0;
    std::size_t cap = 400;
    Output out;
};

void check_table_cap(const TableArgs& a)
{
    if (a.k_max > a.cap) {
        throw CapExceeded("k_max=" + std::to_string(a.k_max) + " exceeds the cap " + std::to_string(a.cap) +
                          " (raise with --cap)");
    }
}

void emit_table(const TableArgs& a, const std::string& name, const std::vector<WeightPoly>& entries,
                const std::vector<ConsistencyRow>& consistency)
{
    if (a.out.csv()) {
        emit(a.out, [&](std::ostream& os) { write_table_csv(os, entries, consistency); });
    } else {
        emit_json(a.out, table_to_json(name, entries, consistency));
    }
}

int cmd_bk(const TableArgs& a)
{
    check_table_cap(a);
    const auto bk = bk_recurrence(a.k_max);
    const auto phi = phi_recurrence(a.k_max);
    emit_table(a, "B", bk.entries, bk_phi_consistency(bk, phi));
    return kExitOk;
}

int cmd_phi(const TableArgs& a)
{
    check_table_cap(a);
    const auto bk = bk_recurrence(a.k_max);
    const auto phi = phi_recurrence(a.k_max);
    emit_table(a, "phi", phi.entries, bk_phi_consistency(bk, phi));
    return kExitOk;
}

int cmd_qrev(const TableArgs& a)
{
    check_table_cap(a);
    const auto phi = phi_recurrence(a.k_max);
    std::vector<WeightPoly> rev;
    for (std::size_t k = 0; k <= a.k_max; ++k) rev.push_back(q_catalan_reversal(phi, k));
    emit_table(a, "qcatalan_reversed", rev, {});
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct MomentArgs {
    std::size_t k = 1;
    std::string p = "0.5";
    std::string cls = "all";
    std::string backend = "exact";
    bool allow_p_above_one = false;
    std::size_t cap = 100000;
    Output out;
};

int cmd_moment(const MomentArgs& a)
{
    const auto cls = parse_pairing_class(a.cls);
    if (a.k < 1) throw InvalidConfig("k must be at least 1");
    if (a.k > a.cap) {
        throw CapExceeded("k=" + std::to_string(a.k) + " exceeds the DP cap " + std::to_string(a.cap) +
                          " (raise with --cap)");
    }

    json doc = {{"k", a.k}, {"p", a.p}, {"class", to_string(cls)}, {"backend", a.backend}};
    std::string value_text;
    double log_value = 0.0;
    if (a.backend == "exact") {
        const Rational p = parse_rational(a.p);
        const Rational v = arc_dp_exact(a.k, p, cls, ExactOptions{a.allow_p_above_one});
        value_text = v.get_str();
        log_value = std::log(v.get_d());
        doc["value"] = value_text;
        doc["value_f64"] = v.get_d();
    } else {
        const double p = parse_rational(a.p).get_d();
        log_value = arc_dp_log(a.k, p, cls);
        const double v = std::exp(log_value);
        value_text = format_double(v);
        doc["value"] = std::isfinite(v) ? json(v) : json(nullptr);
        doc["value_f64"] = doc["value"];
    }
    doc["log_value"] = std::isfinite(log_value) ? json(log_value) : json(nullptr);

    if (a.out.csv()) {
        emit(a.out, [&](std::ostream& os) {
            os << "k,p,class,backend,value,log_value\n"
               << a.k << ',' << a.p << ',' << to_string(cls) << ',' << a.backend << ',' << value_text << ','
               << format_double(log_value) << '\n';
        });
    } else {
        emit_json(a.out, doc);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct GrowthArgs {
    std::vector<double> p_grid;
    std::vector<std::size_t> k_grid;
    std::size_t workers = 1;
    std::size_t cap = 100000;
    Output out;
};

int cmd_growth(const GrowthArgs& a)
{
    if (a.p_grid.empty() || a.k_grid.empty()) throw InvalidConfig("growth needs non-empty --p and --k grids");
    for (std::size_t i = 1; i < a.p_grid.size(); ++i) {
        if (a.p_grid[i] <= a.p_grid[i - 1]) throw InvalidConfig("--p grid must be ascending");
    }
    if (a.k_grid.back() > a.cap) throw CapExceeded("k grid exceeds the DP cap (raise with --cap)");
    std::vector<GrowthCurve> curves;
    for (double p : a.p_grid) curves.push_back(growth_curve(a.k_grid, p, a.workers));
    if (a.out.csv()) {
        emit(a.out, [&](std::ostream& os) { write_growth_csv(os, curves); });
    } else {
        emit_json(a.out, growth_to_json(curves));
    }
    return kExitOk;
}

struct PcArgs {
    double p_lo = 0.0;
    double p_hi = 0.0;
    std::size_t k_probe = 200;
    double tol = 1e-3;
    std::size_t workers = 1;
    std::size_t cap = 100000;
    Output out;
};

int cmd_pc(const PcArgs& a)
{
    if (a.k_probe > a.cap) throw CapExceeded("k_probe exceeds the DP cap (raise with --cap)");
    const auto b = pc_bracket(a.p_lo, a.p_hi, a.k_probe, a.tol, a.workers);
    const auto doc = pc_to_json(b, a.p_lo, a.p_hi, a.tol);
    if (a.out.csv()) {
        emit(a.out, [&](std::ostream& os) {
            os << "p_lo,p_hi,width,k_probe,iterations\n"
               << format_double(b.lo) << ',' << format_double(b.hi) << ',' << format_double(b.hi - b.lo) << ','
               << b.k_probe << ',' << b.iterations << '\n';
        });
    } else {
        emit_json(a.out, doc);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::size_t n = 1;
    std::size_t k = 1;
    std::optional<double> p;
    std::string kernel_file;
    std::size_t samples = 10000;
    std::optional<std::uint64_t> seed;
    std::string probe;
    std::vector<std::size_t> n_grid;
    std::string method = "auto";
    std::size_t workers = 1;
    std::size_t max_n = 1000;
    std::size_t max_samples = 100000000;
    Output out;
};

int cmd_simulate(const SimulateArgs& a)
{
    if (!a.seed) throw InvalidConfig("--seed is required for simulate");
    if (a.p.has_value() == !a.kernel_file.empty()) {
        throw InvalidConfig("give exactly one of --p and --kernel-file");
    }
    RmtConfig cfg;
    cfg.n = a.n;
    cfg.k = a.k;
    cfg.kernel = a.p ? KernelSpec::geometric(*a.p) : read_kernel_file(a.kernel_file);
    cfg.samples = a.samples;
    cfg.seed = *a.seed;
    cfg.odd_probe = a.probe == "odd";
    cfg.method = a.method == "toeplitz" ? GeneratorMethod::Toeplitz : GeneratorMethod::Auto;

    auto check_n = [&](std::size_t n) {
        if (n > a.max_n) {
            throw CapExceeded("N=" + std::to_string(n) + " exceeds the cap " + std::to_string(a.max_n) +
                              " (raise with --max-n)");
        }
    };
    check_n(cfg.n);
    if (cfg.samples > a.max_samples) throw CapExceeded("samples exceed the cap (raise with --max-samples)");

    if (a.probe == "variance") {
        for (std::size_t n : a.n_grid) check_n(n);
        const auto pts = variance_decay_probe(cfg, a.n_grid, a.workers);
        if (a.out.csv()) {
            emit(a.out, [&](std::ostream& os) {
                os << kEstimateCsvHeader << '\n';
                for (const auto& pt : pts) write_estimate_csv_row(os, pt.estimate);
            });
        } else {
            json rows = json::array();
            for (const auto& pt : pts) rows.push_back(estimate_to_json(pt.estimate));
            emit_json(a.out, {{"probe", "variance"}, {"points", rows}});
        }
        return kExitOk;
    }

    const auto even = estimate_moment(cfg, a.workers);
    std::optional<MomentEstimate> odd;
    if (cfg.odd_probe) odd = odd_moment_probe(cfg, a.workers);

    if (a.out.csv()) {
        emit(a.out, [&](std::ostream& os) {
            os << kEstimateCsvHeader << '\n';
            write_estimate_csv_row(os, even);
            if (odd) write_estimate_csv_row(os, *odd);
        });
    } else {
        json doc = estimate_to_json(even);
        if (odd) doc["odd_probe"] = estimate_to_json(*odd);
        emit_json(a.out, doc);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SelfcheckArgs {
    Output out{"table", ""};
};

int cmd_selfcheck(const SelfcheckArgs& a)
{
    struct Row {
        std::string name;
        bool pass;
    };
    std::vector<Row> rows;
    auto check = [&](std::string name, const std::function<bool()>& fn) { rows.push_back({std::move(name), fn()}); };

    check("enumeration counts k=1..8", [] {
        for (std::size_t k = 1; k <= 8; ++k) {
            for (auto cls : {PairingClass::All, PairingClass::NonCrossing}) {
                std::uint64_t n = 0;
                enumerate(k, cls, [&](const Pairing&) { ++n; });
                if (n != pairing_count(k, cls)) return false;
            }
        }
        return true;
    });
    check("B_k recurrence = non-crossing enumeration k<=10", [] {
        const auto bk = bk_recurrence(10);
        for (std::size_t k = 0; k <= 10; ++k) {
            if (bk.entries[k] != weighted_sum_poly(k, PairingClass::NonCrossing)) return false;
        }
        return true;
    });
    check("B_k = p^k phi_k(p^2) k<=40", [] {
        for (const auto& r : bk_phi_consistency(40)) {
            if (!r.pass) return false;
        }
        return true;
    });
    check("phi_k(1) = Catalan(k) k<=40", [] {
        const auto phi = phi_recurrence(40);
        for (std::size_t k = 0; k <= 40; ++k) {
            if (eval_exact(phi.entries[k], 1, 1) != Rational(catalan(k))) return false;
        }
        return true;
    });
    check("all-pairings DP = enumeration k<=7", [] {
        const Rational ps[] = {Rational(1, 3), Rational(5, 7), Rational(1)};
        for (std::size_t k = 1; k <= 7; ++k) {
            const auto poly = weighted_sum_poly(k, PairingClass::All);
            for (const auto& p : ps) {
                if (scalar_moment_dp(k, p) != eval_exact(poly, p)) return false;
            }
        }
        return true;
    });
    check("non-crossing DP = recurrence k<=12", [] {
        const auto bk = bk_recurrence(12);
        for (std::size_t k = 1; k <= 12; ++k) {
            if (noncrossing_moment_dp(k, Rational(3, 4)) != eval_exact(bk.entries[k], Rational(3, 4))) return false;
        }
        return true;
    });
    check("log-space DP = exact DP k<=30", [] {
        for (std::size_t k = 1; k <= 30; ++k) {
            const double exact = std::log(scalar_moment_dp(k, Rational(1, 2)).get_d());
            if (std::abs(exact - scalar_moment_dp_log(k, 0.5)) > 1e-9) return false;
        }
        return true;
    });

    bool all = true;
    for (const auto& r : rows) all = all && r.pass;
    if (a.out.csv()) {
        emit(a.out, [&](std::ostream& os) {
            os << "check,result\n";
            for (const auto& r : rows) os << '"' << r.name << "\"," << (r.pass ? "pass" : "FAIL") << '\n';
        });
    } else if (a.out.format == "json") {
        json doc = json::array();
        for (const auto& r : rows) doc.push_back({{"check", r.name}, {"pass", r.pass}});
        emit_json(a.out, {{"checks", doc}, {"all_pass", all}});
    } else {
        emit(a.out, [&](std::ostream& os) {
            for (const auto& r : rows) os << (r.pass ? "PASS  " : "FAIL  ") << r.name << '\n';
        });
    }
    return all ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"qcat: weighted pairing moments, q-Catalan polynomials and correlated GOE trace products"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    EnumerateArgs en;
    auto* c_en = app.add_subcommand("enumerate", "Stream pairings of {1..2k} with weight exponents");
    c_en->add_option("--k", en.k, "Number of pairs")->required();
    c_en->add_option("--class", en.cls, "all | nc")->check(CLI::IsMember({"all", "nc", "noncrossing", "non-crossing"}));
    c_en->add_option("--cap-all", en.caps.all, "Enumeration cap on k for all pairings");
    c_en->add_option("--cap-nc", en.caps.non_crossing, "Enumeration cap on k for non-crossing pairings");
    add_output_flags(c_en, en.out);

    TableArgs bk, phi, qrev;
    auto* c_bk = app.add_subcommand("bk", "B_k(p) table from the recurrence, with the phi consistency report");
    auto* c_phi = app.add_subcommand("phi", "phi_k(x) table, with the B_k consistency report");
    auto* c_qrev = app.add_subcommand("qrev", "Coefficient-reversed phi_k (q = 1/p form)");
    for (auto [cmd, args] : {std::pair{c_bk, &bk}, std::pair{c_phi, &phi}, std::pair{c_qrev, &qrev}}) {
        cmd->add_option("--k-max", args->k_max, "Largest k")->required();
        cmd->add_option("--cap", args->cap, "Cap on k_max");
        add_output_flags(cmd, args->out);
    }

    MomentArgs mo;
    auto* c_mo = app.add_subcommand("moment", "Weighted pairing sum S_k(p) or B_k(p) by the open-arc DP");
    c_mo->add_option("--k", mo.k, "Number of pairs")->required();
    c_mo->add_option("--p", mo.p, "Weight: decimal or fraction like 3/7")->required();
    c_mo->add_option("--class", mo.cls, "all | nc")->check(CLI::IsMember({"all", "nc", "noncrossing", "non-crossing"}));
    c_mo->add_option("--backend", mo.backend, "exact | log")->check(CLI::IsMember({"exact", "log"}));
    c_mo->add_flag("--allow-p-above-one", mo.allow_p_above_one, "Permit p > 1 with the exact backend");
    c_mo->add_option("--cap", mo.cap, "Cap on k");
    add_output_flags(c_mo, mo.out);

    GrowthArgs gr;
    auto* c_gr = app.add_subcommand("growth", "Growth rates (1/k) log S_k(p) on a grid");
    c_gr->add_option("--p", gr.p_grid, "Ascending weights, comma separated")->required()->delimiter(',');
    c_gr->add_option("--k", gr.k_grid, "Ascending k values, comma separated")->required()->delimiter(',');
    c_gr->add_option("--workers", gr.workers, "Threads for independent grid points");
    c_gr->add_option("--cap", gr.cap, "Cap on k");
    add_output_flags(c_gr, gr.out);

    PcArgs pc;
    auto* c_pc = app.add_subcommand("pc", "Bracket the weight where the extrapolated growth rate changes sign");
    c_pc->add_option("--p-lo", pc.p_lo, "Lower weight (growth must be negative)")->required();
    c_pc->add_option("--p-hi", pc.p_hi, "Upper weight (growth must be positive)")->required();
    c_pc->add_option("--k-probe", pc.k_probe, "Largest k of the probe grid");
    c_pc->add_option("--tol", pc.tol, "Bracket width");
    c_pc->add_option("--workers", pc.workers, "Threads for independent grid points");
    c_pc->add_option("--cap", pc.cap, "Cap on k_probe");
    add_output_flags(c_pc, pc.out);

    SimulateArgs si;
    auto* c_si = app.add_subcommand("simulate", "Monte Carlo estimate of E (1/N) Tr(A1 ... A2k)");
    c_si->add_option("--n", si.n, "Matrix dimension N");
    c_si->add_option("--k", si.k, "Half the number of factors");
    c_si->add_option("--p", si.p, "Geometric kernel weight, 0 < p < 1");
    c_si->add_option("--kernel-file", si.kernel_file, "Tabulated kernel, one 'lag value' per line");
    c_si->add_option("--samples", si.samples, "Number of independent families");
    c_si->add_option("--seed", si.seed, "Random seed (required)");
    c_si->add_option("--probe", si.probe, "odd | variance")->check(CLI::IsMember({"odd", "variance"}));
    c_si->add_option("--n-grid", si.n_grid, "N values for the variance probe")->delimiter(',');
    c_si->add_option("--method", si.method, "auto | toeplitz")->check(CLI::IsMember({"auto", "toeplitz"}));
    c_si->add_option("--workers", si.workers, "Threads; results do not depend on this");
    c_si->add_option("--max-n", si.max_n, "Cap on N");
    c_si->add_option("--max-samples", si.max_samples, "Cap on samples");
    add_output_flags(c_si, si.out);

    SelfcheckArgs sc;
    auto* c_sc = app.add_subcommand("selfcheck", "Run the oracle-equivalence checks and print a table");
    c_sc->add_option("--format", sc.out.format, "table | json | csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    c_sc->add_option("--out", sc.out.path, "Output file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*c_en) return cmd_enumerate(en);
        if (*c_bk) return cmd_bk(bk);
        if (*c_phi) return cmd_phi(phi);
        if (*c_qrev) return cmd_qrev(qrev);
        if (*c_mo) return cmd_moment(mo);
        if (*c_gr) return cmd_growth(gr);
        if (*c_pc) return cmd_pc(pc);
        if (*c_si) {
            if (!si.seed) {
                std::cerr << "error: --seed is required for simulate\n\n" << c_si->help();
                return kExitUsage;
            }
            return cmd_simulate(si);
        }
        if (*c_sc) return cmd_selfcheck(sc);
    } catch (const KernelNotPSD& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitUsage;
}
