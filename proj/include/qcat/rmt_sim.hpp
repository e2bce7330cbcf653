#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qcat/kernel.hpp"

namespace qcat {

enum class GeneratorMethod {
    Auto,      // AR(1) for geometric kernels, Toeplitz factor otherwise
    Toeplitz,  // always factor the Toeplitz covariance
};

/// One Monte Carlo experiment on the correlated matrix family
/// A^(1), A^(2), … with E a_ij^(r) a_i'j'^(r') = V(r − r′)(δ_ii′δ_jj′ + δ_ij′δ_i′j).
struct RmtConfig {
    std::size_t n = 1;  // matrix dimension
    std::size_t k = 1;  // the even product has 2k factors
    KernelSpec kernel = KernelSpec::geometric(0.5);
    std::size_t samples = 2;
    std::uint64_t seed = 0;
    bool odd_probe = false;
    GeneratorMethod method = GeneratorMethod::Auto;
};

struct MomentEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double sample_variance_of_trace = 0.0;
    std::size_t samples = 0;
    std::size_t factors = 0;  // product length
    std::size_t offset = 0;   // factors used are A^(offset+1) … A^(offset+factors)
    RmtConfig config;
};

using Matrix = Eigen::MatrixXd;

// Generates A^(offset+1) … A^(offset+factors) for one sample. Entries are
// a_ij/√N; off-diagonal a_ij has variance V(0) and diagonal a_ii variance
// 2·V(0). For N = 1 the single entry is the scalar Gaussian process with
// variance V(0). Each entry process is drawn from its own counter stream
// keyed by (seed, sample_index, entry), so the output is independent of
// scheduling.
std::vector<Matrix> generate_family(const RmtConfig& cfg, std::uint64_t sample_index, std::size_t factors,
                                    std::size_t offset = 0);

// The 2k-factor family of the config.
inline std::vector<Matrix> generate_family(const RmtConfig& cfg, std::uint64_t sample_index)
{
    return generate_family(cfg, sample_index, 2 * cfg.k);
}

// (1/N) Tr(A^(1) ⋯ A^(n)). The left half and right half are multiplied left
// to right, and the trace of their product is taken as Σ_ij L_ij R_ji, which
// saves one matrix product. Throws DimensionMismatch.
double trace_product_sample(std::span<const Matrix> family);

// Mean, standard error and sample variance of the normalized trace over
// cfg.samples independent families. Per-sample values are reduced in sample
// order, so the result is bit-identical for any worker count.
MomentEstimate estimate_trace_product(const RmtConfig& cfg, std::size_t factors, std::size_t offset = 0,
                                      std::size_t workers = 1);

MomentEstimate estimate_moment(const RmtConfig& cfg, std::size_t workers = 1);

// Uses 2k + 1 factors; k = 0 (a single factor) is allowed here.
MomentEstimate odd_moment_probe(const RmtConfig& cfg, std::size_t workers = 1);

struct VariancePoint {
    std::size_t n = 0;
    MomentEstimate estimate;
};

// Repeats estimate_moment for each N in the grid. Throws InsufficientGrid for
// fewer than two grid points.
std::vector<VariancePoint> variance_decay_probe(const RmtConfig& cfg, const std::vector<std::size_t>& n_grid,
                                                std::size_t workers = 1);

// Large-N limit of E(1/N)Tr of an even product with `factors` factors: the
// weighted non-crossing sum (B_k(p) for the geometric kernel); 0 for odd
// products. NaN when a tabulated kernel is beyond the enumeration cap.
double reference_limit(const KernelSpec& kernel, std::size_t factors);

// Exact N = 1 value: the weighted sum over all pairings.
double reference_scalar(const KernelSpec& kernel, std::size_t factors);

}  // namespace qcat
