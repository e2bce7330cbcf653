#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "qcat/kernel.hpp"
#include "qcat/polynomial.hpp"

namespace qcat {

/// A perfect matching of {1, …, 2k}. Pairs are 1-based, l < m within each
/// pair, and sorted by first element.
struct Pairing {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;

    std::size_t k() const { return pairs.size(); }
    friend bool operator==(const Pairing&, const Pairing&) = default;
    friend auto operator<=>(const Pairing&, const Pairing&) = default;
};

enum class PairingClass { All, NonCrossing };

std::string_view to_string(PairingClass c);
// Accepts "all", "nc", "noncrossing", "non-crossing".
PairingClass parse_pairing_class(std::string_view s);

struct EnumerationCaps {
    std::size_t all = 9;
    std::size_t non_crossing = 14;

    std::size_t for_class(PairingClass c) const { return c == PairingClass::All ? all : non_crossing; }
};

// Checks the Pairing invariants; used by tests and by input validation.
bool is_valid(const Pairing& p);

// Streams every pairing of the class in lexicographic order of the pair list.
// The callback receives a reference to a buffer that is reused between calls.
// k = 0 yields the single empty pairing.
void enumerate(std::size_t k, PairingClass cls, const std::function<void(const Pairing&)>& visit);

bool is_non_crossing(const Pairing& p);

// Σ (m − l) over the pairs.
std::uint64_t weight_exponent(const Pairing& p);

// Closed-form class count: (2k−1)!! or the k-th Catalan number. Throws
// CountOverflow when the count does not fit in 64 bits.
std::uint64_t pairing_count(std::size_t k, PairingClass cls);
BigInt pairing_count_exact(std::size_t k, PairingClass cls);

// Σ_ω p^{weight_exponent(ω)} by enumeration. Throws CapExceeded above the cap.
WeightPoly weighted_sum_poly(std::size_t k, PairingClass cls, const EnumerationCaps& caps = {});

// Σ_ω Π V(m − l) by enumeration. Throws CapExceeded, or KernelDomain when the
// kernel lacks a lag up to 2k − 1.
double weighted_sum_general(std::size_t k, PairingClass cls, const KernelSpec& kernel,
                            const EnumerationCaps& caps = {});

}  // namespace qcat
