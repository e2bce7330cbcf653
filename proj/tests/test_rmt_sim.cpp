#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "qcat/errors.hpp"
#include "qcat/random.hpp"
#include "qcat/rmt_sim.hpp"

using namespace qcat;

namespace {

struct Moments {
    double mean = 0, var = 0;
    std::size_t n = 0;
};

Moments moments(const std::vector<double>& xs)
{
    Moments m;
    m.n = xs.size();
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(m.n);
    for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
    m.var /= static_cast<double>(m.n - 1);
    return m;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b)
{
    const auto ma = moments(a), mb = moments(b);
    double c = 0;
    for (std::size_t i = 0; i < a.size(); ++i) c += (a[i] - ma.mean) * (b[i] - mb.mean);
    c /= static_cast<double>(a.size() - 1);
    return c / std::sqrt(ma.var * mb.var);
}

RmtConfig config(std::size_t n, std::size_t k, KernelSpec kernel, std::size_t samples, std::uint64_t seed)
{
    RmtConfig c;
    c.n = n;
    c.k = k;
    c.kernel = std::move(kernel);
    c.samples = samples;
    c.seed = seed;
    return c;
}

// Entry processes √N·a_ij^(r) collected over many samples.
struct EntryDraws {
    std::vector<std::vector<double>> off;   // [r] -> draws
    std::vector<std::vector<double>> diag;  // [r] -> draws
};

EntryDraws collect(const RmtConfig& cfg, std::size_t factors, std::size_t samples)
{
    EntryDraws d{std::vector<std::vector<double>>(factors), std::vector<std::vector<double>>(factors)};
    const double root_n = std::sqrt(static_cast<double>(cfg.n));
    for (std::size_t s = 0; s < samples; ++s) {
        const auto fam = generate_family(cfg, s, factors);
        for (std::size_t r = 0; r < factors; ++r) {
            for (Eigen::Index i = 0; i < fam[r].rows(); ++i) {
                d.diag[r].push_back(root_n * fam[r](i, i));
                for (Eigen::Index j = i + 1; j < fam[r].cols(); ++j) d.off[r].push_back(root_n * fam[r](i, j));
            }
        }
    }
    return d;
}

// |x − target| ≤ 3σ.
void check_within(double x, double target, double sigma)
{
    CHECK_MESSAGE(std::abs(x - target) <= 3.0 * sigma, "value ", x, " target ", target, " sigma ", sigma);
}

}  // namespace

TEST_CASE("Philox known-answer vectors")
{
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::apply(C{0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::apply(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::apply(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("normal stream is standard and addressable")
{
    NormalStream a(1, 2, 3), b(1, 2, 3), c(1, 2, 4);
    std::vector<double> xs;
    bool same = true, differs = false;
    for (int i = 0; i < 100000; ++i) {
        const double x = a();
        same &= (x == b());
        differs |= (x != c());
        xs.push_back(x);
    }
    CHECK(same);
    CHECK(differs);
    const auto m = moments(xs);
    check_within(m.mean, 0.0, 1.0 / std::sqrt(1e5));
    check_within(m.var, 1.0, std::sqrt(2.0 / 1e5));
}

TEST_CASE("matrices are exactly symmetric")
{
    const auto fam = generate_family(config(17, 2, KernelSpec::geometric(0.7), 2, 9), 3);
    REQUIRE(fam.size() == 4);
    for (const auto& m : fam) CHECK(m == m.transpose());
}

TEST_CASE("marginal variances: off-diagonal V(0), diagonal 2V(0)")
{
    const auto cfg = config(40, 1, KernelSpec::geometric(0.5), 2, 101);
    const auto d = collect(cfg, 2, 130);  // ~1e5 off-diagonal draws per factor
    for (std::size_t r = 0; r < 2; ++r) {
        const auto off = moments(d.off[r]);
        const auto diag = moments(d.diag[r]);
        REQUIRE(off.n >= 100000);
        check_within(off.mean, 0.0, std::sqrt(1.0 / off.n));
        check_within(off.var, 1.0, std::sqrt(2.0 / off.n));
        check_within(diag.var, 2.0, 2.0 * std::sqrt(2.0 / diag.n));
    }
}

TEST_CASE("lag correlation follows p^r")
{
    const double p = 0.9;
    const auto cfg = config(30, 3, KernelSpec::geometric(p), 2, 77);
    const auto d = collect(cfg, 5, 250);
    for (std::size_t r = 1; r <= 4; ++r) {
        const double rho = correlation(d.off[0], d.off[r]);
        const double target = std::pow(p, static_cast<double>(r));
        check_within(rho, target, (1 - target * target) / std::sqrt(static_cast<double>(d.off[0].size())));
    }
}

TEST_CASE("Toeplitz path agrees in law with the AR(1) path")
{
    auto cfg = config(30, 2, KernelSpec::geometric(0.8), 2, 5);
    cfg.method = GeneratorMethod::Toeplitz;
    const auto d = collect(cfg, 4, 200);
    const auto off = moments(d.off[3]);
    check_within(off.var, 1.0, std::sqrt(2.0 / off.n));
    check_within(correlation(d.off[0], d.off[2]), 0.64, (1 - 0.64 * 0.64) / std::sqrt(static_cast<double>(off.n)));
    check_within(moments(d.diag[1]).var, 2.0, 2.0 * std::sqrt(2.0 / d.diag[1].size()));

    // Second moment of the trace product through both generators.
    auto ar = config(20, 2, KernelSpec::geometric(0.8), 4000, 21);
    auto tp = ar;
    tp.method = GeneratorMethod::Toeplitz;
    tp.seed = 22;
    const auto ea = estimate_moment(ar);
    const auto et = estimate_moment(tp);
    check_within(ea.mean - et.mean, 0.0, std::hypot(ea.std_error, et.std_error));
}

TEST_CASE("delta kernel gives independent factors")
{
    const auto cfg = config(30, 2, KernelSpec::table({1, 0, 0, 0}), 2, 8);
    const auto d = collect(cfg, 4, 150);
    const double n = static_cast<double>(d.off[0].size());
    for (std::size_t r = 1; r < 4; ++r) check_within(correlation(d.off[0], d.off[r]), 0.0, 1.0 / std::sqrt(n));

    auto big = config(100, 2, KernelSpec::table({1, 0, 0, 0}), 2000, 8);
    const auto e = estimate_moment(big);
    check_within(e.mean, 0.0, e.std_error);
    CHECK(reference_limit(big.kernel, 4) == 0.0);
}

TEST_CASE("N = 1 is the scalar process")
{
    const auto cfg = config(1, 1, KernelSpec::geometric(0.5), 2, 3);
    const auto d = collect(cfg, 2, 100000);
    check_within(moments(d.diag[0]).var, 1.0, std::sqrt(2.0 / 1e5));

    auto c = config(1, 2, KernelSpec::geometric(0.5), 100000, 7);
    const auto e = estimate_moment(c);
    check_within(e.mean, 0.375, e.std_error);  // p² + 2p⁴
}

TEST_CASE("trace of products")
{
    std::vector<Matrix> ids(4, Matrix::Identity(5, 5));
    CHECK(trace_product_sample(ids) == 1.0);
    std::vector<Matrix> one{Matrix::Identity(3, 3) * 2.0};
    CHECK(trace_product_sample(one) == 2.0);

    // Against the explicit full product on random matrices.
    const auto fam = generate_family(config(9, 3, KernelSpec::geometric(0.4), 2, 1), 0, 5);
    Matrix full = fam[0];
    for (std::size_t s = 1; s < fam.size(); ++s) full = full * fam[s];
    CHECK(trace_product_sample(fam) == doctest::Approx(full.trace() / 9.0).epsilon(1e-12));

    std::vector<Matrix> bad{Matrix::Identity(3, 3), Matrix::Identity(4, 4)};
    CHECK_THROWS_AS(trace_product_sample(bad), DimensionMismatch);
    CHECK_THROWS_AS(trace_product_sample(std::vector<Matrix>{}), DimensionMismatch);
    std::vector<Matrix> rect{Matrix::Zero(2, 3)};
    CHECK_THROWS_AS(trace_product_sample(rect), DimensionMismatch);
}

TEST_CASE("two-factor mean is V(1)(N+1)/N")
{
    const auto e = estimate_moment(config(50, 1, KernelSpec::geometric(0.5), 20000, 12));
    check_within(e.mean, 0.5 * 51.0 / 50.0, e.std_error);
}

TEST_CASE("odd products have zero mean")
{
    auto c = config(1, 0, KernelSpec::geometric(0.5), 100000, 4);
    const auto one = odd_moment_probe(c);
    CHECK(one.factors == 1);
    check_within(one.mean, 0.0, one.std_error);

    auto c3 = config(30, 1, KernelSpec::geometric(0.9), 5000, 4);
    const auto three = odd_moment_probe(c3);
    CHECK(three.factors == 3);
    check_within(three.mean, 0.0, three.std_error);
}

TEST_CASE("shift invariance of the family")
{
    const auto c = config(20, 1, KernelSpec::geometric(0.7), 10000, 31);
    const auto base = estimate_trace_product(c, 2, 0);
    for (std::size_t m : {1, 2}) {
        const auto shifted = estimate_trace_product(c, 2, m);
        CHECK(shifted.offset == m);
        // Same samples, so the difference of means is compared with a
        // conservative bound.
        check_within(shifted.mean - base.mean, 0.0, base.std_error + shifted.std_error);
    }
    // The shifted family is literally the tail of the longer one.
    const auto longer = generate_family(c, 5, 4, 0);
    const auto tail = generate_family(c, 5, 2, 2);
    CHECK(tail[0] == longer[2]);
    CHECK(tail[1] == longer[3]);
}

TEST_CASE("variance decays with N")
{
    const auto c = config(1, 2, KernelSpec::geometric(0.5), 2000, 9);
    const auto pts = variance_decay_probe(c, {1, 10, 40});
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].estimate.sample_variance_of_trace > pts[1].estimate.sample_variance_of_trace);
    CHECK(pts[1].estimate.sample_variance_of_trace > pts[2].estimate.sample_variance_of_trace);
    CHECK_THROWS_AS(variance_decay_probe(c, {50}), InsufficientGrid);
}

TEST_CASE("determinism across worker counts")
{
    const auto c = config(12, 2, KernelSpec::geometric(0.6), 301, 99);
    const auto a = estimate_moment(c, 1);
    const auto b = estimate_moment(c, 4);
    const auto d = estimate_moment(c, 7);
    CHECK(a.mean == b.mean);
    CHECK(a.mean == d.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.sample_variance_of_trace == d.sample_variance_of_trace);
    auto other = c;
    other.seed = 100;
    CHECK(estimate_moment(other).mean != a.mean);
}

TEST_CASE("configuration and kernel errors")
{
    CHECK_THROWS_AS(estimate_moment(config(0, 1, KernelSpec::geometric(0.5), 10, 1)), InvalidConfig);
    CHECK_THROWS_AS(estimate_moment(config(5, 1, KernelSpec::geometric(0.5), 1, 1)), InvalidConfig);
    CHECK_THROWS_AS(estimate_moment(config(5, 0, KernelSpec::geometric(0.5), 10, 1)), InvalidConfig);
    CHECK_THROWS_AS(estimate_moment(config(5, 1, KernelSpec::table({1.0, 2.0}), 10, 1)), KernelNotPSD);
    CHECK_THROWS_AS(estimate_moment(config(5, 2, KernelSpec::table({1.0, 0.5}), 10, 1)), KernelDomain);
    CHECK_THROWS_AS(KernelSpec::geometric(1.0), InvalidWeight);
    CHECK_THROWS_AS(KernelSpec::table({0.0, 0.1}), InvalidConfig);
}

TEST_CASE("reference values")
{
    CHECK(reference_limit(KernelSpec::geometric(0.5), 4) == doctest::Approx(0.3125));
    CHECK(reference_limit(KernelSpec::geometric(0.9), 6) == doctest::Approx(2.775697389));
    CHECK(reference_limit(KernelSpec::geometric(0.9), 5) == 0.0);
    CHECK(reference_scalar(KernelSpec::geometric(0.5), 4) == doctest::Approx(0.375));
    CHECK(reference_limit(KernelSpec::table({1, 0.5, 0.25, 0.125}), 4) == doctest::Approx(0.3125));
}
