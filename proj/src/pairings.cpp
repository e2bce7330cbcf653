#include "qcat/pairings.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "qcat/errors.hpp"

namespace qcat {

std::string_view to_string(PairingClass c)
{
    return c == PairingClass::All ? "all" : "nc";
}

PairingClass parse_pairing_class(std::string_view s)
{
    if (s == "all") return PairingClass::All;
    if (s == "nc" || s == "noncrossing" || s == "non-crossing") return PairingClass::NonCrossing;
    throw InvalidConfig("unknown pairing class '" + std::string(s) + "' (expected all or nc)");
}

bool is_valid(const Pairing& p)
{
    const std::size_t n = 2 * p.k();
    std::vector<bool> seen(n + 1, false);
    std::uint32_t prev_first = 0;
    for (const auto& [l, m] : p.pairs) {
        if (l >= m || l <= prev_first || m > n) return false;
        if (seen[l] || seen[m]) return false;
        seen[l] = seen[m] = true;
        prev_first = l;
    }
    return true;
}

namespace {

class Enumerator {
  public:
    Enumerator(std::size_t k, PairingClass cls, const std::function<void(const Pairing&)>& visit)
        : n_(static_cast<std::uint32_t>(2 * k)), cls_(cls), visit_(visit), partner_(n_ + 2, 0)
    {
        current_.pairs.reserve(k);
    }

    void run() { recurse(1); }

  private:
    // `first` is the smallest point that may still be unmatched.
    void recurse(std::uint32_t first)
    {
        while (first <= n_ && partner_[first] != 0) ++first;
        if (first > n_) {
            visit_(current_);
            return;
        }
        // Non-crossing: the new arc must close before every arc still open
        // around `first`, and must enclose an even number of points.
        std::uint32_t limit = n_;
        if (cls_ == PairingClass::NonCrossing) {
            for (const auto& [l, m] : current_.pairs) {
                if (m > first) limit = std::min(limit, m - 1);
            }
        }
        for (std::uint32_t b = first + 1; b <= limit; ++b) {
            if (partner_[b] != 0) continue;
            if (cls_ == PairingClass::NonCrossing && (b - first - 1) % 2 != 0) continue;
            partner_[first] = b;
            partner_[b] = first;
            current_.pairs.emplace_back(first, b);
            recurse(first + 1);
            current_.pairs.pop_back();
            partner_[first] = 0;
            partner_[b] = 0;
        }
    }

    std::uint32_t n_;
    PairingClass cls_;
    const std::function<void(const Pairing&)>& visit_;
    std::vector<std::uint32_t> partner_;
    Pairing current_;
};

void check_cap(std::size_t k, PairingClass cls, const EnumerationCaps& caps)
{
    const std::size_t cap = caps.for_class(cls);
    if (k > cap) {
        const char* flag = cls == PairingClass::All ? "--cap-all" : "--cap-nc";
        throw CapExceeded("k=" + std::to_string(k) + " exceeds the enumeration cap " +
                          std::to_string(cap) + " for class " + std::string(to_string(cls)) +
                          " (raise with " + flag + ")");
    }
}

}  // namespace

void enumerate(std::size_t k, PairingClass cls, const std::function<void(const Pairing&)>& visit)
{
    Enumerator(k, cls, visit).run();
}

bool is_non_crossing(const Pairing& p)
{
    for (const auto& [a, b] : p.pairs) {
        for (const auto& [c, d] : p.pairs) {
            if (a < c && c < b && b < d) return false;
        }
    }
    return true;
}

std::uint64_t weight_exponent(const Pairing& p)
{
    std::uint64_t sum = 0;
    for (const auto& [l, m] : p.pairs) sum += m - l;
    return sum;
}

BigInt pairing_count_exact(std::size_t k, PairingClass cls)
{
    BigInt out;
    if (cls == PairingClass::All) {
        out = 1;
        for (std::size_t j = 1; j < 2 * k; j += 2) out *= static_cast<unsigned long>(j);
    } else {
        mpz_bin_uiui(out.get_mpz_t(), 2 * k, k);
        out /= static_cast<unsigned long>(k + 1);
    }
    return out;
}

std::uint64_t pairing_count(std::size_t k, PairingClass cls)
{
    BigInt c = pairing_count_exact(k, cls);
    if (c > BigInt(std::to_string(std::numeric_limits<std::uint64_t>::max()), 10)) {
        throw CountOverflow("pairing count for k=" + std::to_string(k) + " exceeds 64 bits");
    }
    return std::stoull(c.get_str());
}

WeightPoly weighted_sum_poly(std::size_t k, PairingClass cls, const EnumerationCaps& caps)
{
    check_cap(k, cls, caps);
    // Exponents lie in [k, k²]; count in machine words, then lift.
    std::vector<std::uint64_t> counts(k * k + 1, 0);
    enumerate(k, cls, [&](const Pairing& p) { ++counts[weight_exponent(p)]; });
    WeightPoly out;
    for (std::size_t e = 0; e < counts.size(); ++e) {
        if (counts[e] != 0) out.add_term(e, BigInt(std::to_string(counts[e]), 10));
    }
    return out;
}

double weighted_sum_general(std::size_t k, PairingClass cls, const KernelSpec& kernel,
                            const EnumerationCaps& caps)
{
    check_cap(k, cls, caps);
    if (k == 0) return 1.0;
    // Tabulate lags once; this also surfaces KernelDomain before enumerating.
    std::vector<double> lag(2 * k);
    for (std::size_t r = 1; r < 2 * k; ++r) lag[r] = kernel(static_cast<long>(r));

    double sum = 0.0;
    enumerate(k, cls, [&](const Pairing& p) {
        double w = 1.0;
        for (const auto& [l, m] : p.pairs) w *= lag[m - l];
        sum += w;
    });
    return sum;
}

}  // namespace qcat
