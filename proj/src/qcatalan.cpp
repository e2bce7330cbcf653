#include "qcat/qcatalan.hpp"

#include <algorithm>

namespace qcat {

BkTable bk_recurrence(std::size_t k_max)
{
    BkTable t;
    t.entries.reserve(k_max + 1);
    t.entries.push_back(WeightPoly::constant(1));
    for (std::size_t k = 1; k <= k_max; ++k) {
        WeightPoly bk;
        for (std::size_t i = 1; i <= k; ++i) {
            bk += shift(mul(t.entries[i - 1], t.entries[k - i]), 2 * i - 1);
        }
        t.entries.push_back(std::move(bk));
    }
    return t;
}

PhiTable phi_recurrence(std::size_t k_max)
{
    PhiTable t;
    t.entries.reserve(k_max + 1);
    t.entries.push_back(WeightPoly::constant(1));
    for (std::size_t k = 1; k <= k_max; ++k) {
        WeightPoly phik;
        for (std::size_t i = 1; i <= k; ++i) {
            phik += shift(mul(t.entries[i - 1], t.entries[k - i]), i - 1);
        }
        t.entries.push_back(std::move(phik));
    }
    return t;
}

WeightPoly q_catalan_reversal(const PhiTable& phi, std::size_t k)
{
    return reverse(phi.entries.at(k), k == 0 ? 0 : k * (k - 1) / 2);
}

WeightPoly q_catalan_reversal(std::size_t k)
{
    return q_catalan_reversal(phi_recurrence(k), k);
}

std::vector<ConsistencyRow> bk_phi_consistency(const BkTable& bk, const PhiTable& phi)
{
    const std::size_t n = std::min(bk.entries.size(), phi.entries.size());
    std::vector<ConsistencyRow> rows;
    rows.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        ConsistencyRow row{k, true, std::nullopt};
        WeightPoly diff = bk.entries[k] - shift(substitute_square(phi.entries[k]), k);
        if (!diff.is_zero()) {
            row.pass = false;
            row.first_mismatch = diff.min_exponent();
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<ConsistencyRow> bk_phi_consistency(std::size_t k_max)
{
    return bk_phi_consistency(bk_recurrence(k_max), phi_recurrence(k_max));
}

BigInt catalan(std::size_t k)
{
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), 2 * k, k);
    out /= static_cast<unsigned long>(k + 1);
    return out;
}

}  // namespace qcat
