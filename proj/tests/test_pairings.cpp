#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "qcat/errors.hpp"
#include "qcat/pairings.hpp"

using namespace qcat;

namespace {

Pairing make(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> pairs)
{
    return Pairing{{pairs.begin(), pairs.end()}};
}

std::vector<Pairing> collect(std::size_t k, PairingClass cls)
{
    std::vector<Pairing> out;
    enumerate(k, cls, [&](const Pairing& p) { out.push_back(p); });
    return out;
}

// Independent oracle: every permutation of 1..2k read as consecutive pairs,
// canonicalized and deduplicated.
std::set<Pairing> matchings_by_permutation(std::size_t k)
{
    std::vector<std::uint32_t> perm(2 * k);
    std::iota(perm.begin(), perm.end(), 1u);
    std::set<Pairing> out;
    do {
        Pairing p;
        for (std::size_t i = 0; i < k; ++i) {
            auto a = perm[2 * i];
            auto b = perm[2 * i + 1];
            p.pairs.emplace_back(std::min(a, b), std::max(a, b));
        }
        std::sort(p.pairs.begin(), p.pairs.end());
        out.insert(p);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace

TEST_CASE("enumerate k=2")
{
    const auto all = collect(2, PairingClass::All);
    REQUIRE(all.size() == 3);
    CHECK(all[0] == make({{1, 2}, {3, 4}}));
    CHECK(all[1] == make({{1, 3}, {2, 4}}));
    CHECK(all[2] == make({{1, 4}, {2, 3}}));

    const auto nc = collect(2, PairingClass::NonCrossing);
    REQUIRE(nc.size() == 2);
    CHECK(nc[0] == make({{1, 2}, {3, 4}}));
    CHECK(nc[1] == make({{1, 4}, {2, 3}}));
}

TEST_CASE("k=0 is the single empty pairing")
{
    for (auto cls : {PairingClass::All, PairingClass::NonCrossing}) {
        const auto v = collect(0, cls);
        REQUIRE(v.size() == 1);
        CHECK(v[0].pairs.empty());
        CHECK(weighted_sum_poly(0, cls) == WeightPoly::constant(1));
        CHECK(pairing_count(0, cls) == 1);
    }
}

TEST_CASE("k=3 non-crossing has five pairings")
{
    CHECK(collect(3, PairingClass::NonCrossing).size() == 5);
}

TEST_CASE("streams match the permutation oracle")
{
    for (std::size_t k = 1; k <= 4; ++k) {
        const auto oracle = matchings_by_permutation(k);
        const auto all = collect(k, PairingClass::All);
        CHECK(std::set<Pairing>(all.begin(), all.end()) == oracle);
        CHECK(std::is_sorted(all.begin(), all.end()));
        CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());

        std::set<Pairing> oracle_nc;
        for (const auto& p : oracle) {
            bool crossing = false;
            for (auto [a, b] : p.pairs)
                for (auto [c, d] : p.pairs) crossing |= (a < c && c < b && b < d);
            if (!crossing) oracle_nc.insert(p);
        }
        const auto nc = collect(k, PairingClass::NonCrossing);
        CHECK(std::set<Pairing>(nc.begin(), nc.end()) == oracle_nc);
    }
}

TEST_CASE("counts and non-crossing filter for k <= 8")
{
    for (std::size_t k = 1; k <= 8; ++k) {
        std::uint64_t n_all = 0;
        std::uint64_t invalid = 0;
        std::vector<Pairing> filtered;
        enumerate(k, PairingClass::All, [&](const Pairing& p) {
            ++n_all;
            if (!is_valid(p)) ++invalid;
            if (is_non_crossing(p)) filtered.push_back(p);
        });
        CHECK(invalid == 0);
        CHECK(n_all == pairing_count(k, PairingClass::All));
        const auto nc = collect(k, PairingClass::NonCrossing);
        CHECK(nc.size() == pairing_count(k, PairingClass::NonCrossing));
        CHECK(nc == filtered);
    }
}

TEST_CASE("pairing_count closed forms and overflow")
{
    CHECK(pairing_count(3, PairingClass::All) == 15);
    CHECK(pairing_count(4, PairingClass::NonCrossing) == 14);
    CHECK(pairing_count(17, PairingClass::All) == 6332659870762850625ull);
    CHECK_THROWS_AS(pairing_count(18, PairingClass::All), CountOverflow);
    CHECK_THROWS_AS(pairing_count(40, PairingClass::All), CountOverflow);
    CHECK(pairing_count_exact(40, PairingClass::All) > 0);
}

TEST_CASE("is_non_crossing")
{
    CHECK_FALSE(is_non_crossing(make({{1, 3}, {2, 4}})));
    CHECK(is_non_crossing(make({{1, 4}, {2, 3}})));
    CHECK(is_non_crossing(make({{1, 2}, {3, 6}, {4, 5}})));
    CHECK_FALSE(is_non_crossing(make({{1, 5}, {2, 3}, {4, 6}})));
}

TEST_CASE("weight_exponent")
{
    CHECK(weight_exponent(make({{1, 2}, {3, 4}})) == 2);
    CHECK(weight_exponent(make({{1, 4}, {2, 3}})) == 4);
    CHECK(weight_exponent(make({{1, 6}, {2, 5}, {3, 4}})) == 9);

    for (std::size_t k = 1; k <= 7; ++k) {
        std::uint64_t bad = 0;
        enumerate(k, PairingClass::All, [&](const Pairing& p) {
            const auto w = weight_exponent(p);
            if (w < k || w > k * k || w % 2 != k % 2) ++bad;
        });
        CHECK_MESSAGE(bad == 0, "k=", k);
    }
}

TEST_CASE("weighted_sum_poly small cases")
{
    CHECK(weighted_sum_poly(1, PairingClass::All) == WeightPoly{{1, 1}});
    CHECK(weighted_sum_poly(2, PairingClass::All) == WeightPoly{{2, 1}, {4, 2}});
    CHECK(weighted_sum_poly(2, PairingClass::NonCrossing) == WeightPoly{{2, 1}, {4, 1}});
    CHECK(weighted_sum_poly(3, PairingClass::NonCrossing) == WeightPoly{{3, 1}, {5, 2}, {7, 1}, {9, 1}});
    CHECK(weighted_sum_poly(3, PairingClass::All) == WeightPoly{{3, 1}, {5, 4}, {7, 4}, {9, 6}});
    CHECK(weighted_sum_poly(4, PairingClass::All) ==
          WeightPoly{{4, 1}, {6, 6}, {8, 12}, {10, 20}, {12, 24}, {14, 18}, {16, 24}});
}

TEST_CASE("weighted_sum_poly properties")
{
    for (std::size_t k = 1; k <= 8; ++k) {
        for (auto cls : {PairingClass::All, PairingClass::NonCrossing}) {
            const auto poly = weighted_sum_poly(k, cls);
            CHECK(eval_exact(poly, 1, 1) == Rational(pairing_count_exact(k, cls)));
            if (cls == PairingClass::NonCrossing) {
                for (const auto& [e, c] : poly.terms()) {
                    CHECK(e >= k);
                    CHECK(e <= k * k);
                    CHECK(e % 2 == k % 2);
                }
            }
        }
    }
}

TEST_CASE("enumeration caps")
{
    CHECK_THROWS_AS(weighted_sum_poly(10, PairingClass::All), CapExceeded);
    CHECK_THROWS_AS(weighted_sum_poly(15, PairingClass::NonCrossing), CapExceeded);
    EnumerationCaps tight{3, 3};
    CHECK_THROWS_AS(weighted_sum_poly(4, PairingClass::All, tight), CapExceeded);
    CHECK_THROWS_AS(weighted_sum_general(4, PairingClass::NonCrossing, KernelSpec::geometric(0.5), tight),
                    CapExceeded);
    CHECK_NOTHROW(weighted_sum_poly(3, PairingClass::All, tight));
}

TEST_CASE("weighted_sum_general")
{
    // p² + 2p⁴ at p = 1/2.
    CHECK(weighted_sum_general(2, PairingClass::All, KernelSpec::geometric(0.5)) == doctest::Approx(0.375));
    CHECK(weighted_sum_general(1, PairingClass::All, KernelSpec::table({2.0, 0.3})) == doctest::Approx(0.3));
    CHECK(weighted_sum_general(2, PairingClass::All, KernelSpec::table({1, 1, 1, 1})) == 3.0);
    CHECK_THROWS_AS(weighted_sum_general(2, PairingClass::All, KernelSpec::table({1, 0.5})), KernelDomain);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    for (std::size_t k = 1; k <= 7; ++k) {
        for (auto cls : {PairingClass::All, PairingClass::NonCrossing}) {
            const double p = unit(rng);
            const double direct = weighted_sum_general(k, cls, KernelSpec::geometric(p));
            const double via_poly = eval_f64(weighted_sum_poly(k, cls), p);
            CHECK(std::abs(direct - via_poly) <= 1e-12 * std::abs(via_poly));
        }
    }
}

TEST_CASE("parse_pairing_class")
{
    CHECK(parse_pairing_class("all") == PairingClass::All);
    CHECK(parse_pairing_class("nc") == PairingClass::NonCrossing);
    CHECK(parse_pairing_class("non-crossing") == PairingClass::NonCrossing);
    CHECK_THROWS_AS(parse_pairing_class("some"), InvalidConfig);
}
