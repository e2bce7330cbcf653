#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qcat/polynomial.hpp"

namespace qcat {

/// B_0(p), …, B_kmax(p): weighted sums over non-crossing pairings, where a
/// pair (l, m) carries weight p^{m − l}.
struct BkTable {
    std::vector<WeightPoly> entries;
    std::size_t k_max() const { return entries.size() - 1; }
};

/// φ_0(x), …, φ_kmax(x), the Carlitz-type q-Catalan polynomials with
/// B_k(p) = p^k · φ_k(p²).
struct PhiTable {
    std::vector<WeightPoly> entries;
    std::size_t k_max() const { return entries.size() - 1; }
};

// B_k = Σ_{i=1..k} p^{2i−1} · B_{i−1} · B_{k−i}, B_0 = 1. Splitting on the
// partner 2i of point 1: that arc spans 2i − 1 gaps, the inside and the
// outside are independent non-crossing pairings.
BkTable bk_recurrence(std::size_t k_max);

// φ_k = Σ_{i=1..k} x^{i−1} · φ_{i−1} · φ_{k−i}, φ_0 = 1.
PhiTable phi_recurrence(std::size_t k_max);

// φ_k with its coefficients reversed about its degree k(k−1)/2, i.e. the
// q = 1/p form. k = 0 is accepted and gives 1.
WeightPoly q_catalan_reversal(std::size_t k);
WeightPoly q_catalan_reversal(const PhiTable& phi, std::size_t k);

struct ConsistencyRow {
    std::size_t k = 0;
    bool pass = false;
    // Lowest exponent at which B_k and p^k·φ_k(p²) differ.
    std::optional<Exponent> first_mismatch;
};

// Checks B_k(p) = p^k · φ_k(p²) for k = 0..k_max. Failures are reported, not
// thrown.
std::vector<ConsistencyRow> bk_phi_consistency(std::size_t k_max);
std::vector<ConsistencyRow> bk_phi_consistency(const BkTable& bk, const PhiTable& phi);

BigInt catalan(std::size_t k);

}  // namespace qcat
