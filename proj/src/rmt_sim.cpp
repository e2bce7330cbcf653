#include "qcat/rmt_sim.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qcat/errors.hpp"
#include "qcat/pairings.hpp"
#include "qcat/parallel.hpp"
#include "qcat/qcatalan.hpp"
#include "qcat/random.hpp"
#include "qcat/scalar_moments.hpp"

namespace qcat {

namespace {

constexpr std::size_t kMaxDimension = 65535;  // entry index i·N + j fits in 32 bits

void validate(const RmtConfig& cfg, std::size_t factors)
{
    if (cfg.n < 1) throw InvalidConfig("matrix dimension N must be at least 1");
    if (cfg.n > kMaxDimension) throw InvalidConfig("matrix dimension N exceeds " + std::to_string(kMaxDimension));
    if (factors < 1) throw InvalidConfig("product needs at least one factor");
    if (cfg.samples < 2) throw InvalidConfig("at least 2 samples are needed for a standard error");
}

// Draws the stationary Gaussian sequences for every entry (i ≤ j) and writes
// them, scaled, into the matrices.
class FamilyGenerator {
  public:
    FamilyGenerator(const RmtConfig& cfg, std::size_t length)
        : cfg_(cfg), length_(length), inv_sqrt_n_(1.0 / std::sqrt(static_cast<double>(cfg.n)))
    {
        ar1_ = cfg.kernel.is_geometric() && cfg.method == GeneratorMethod::Auto;
        if (ar1_) {
            p_ = cfg.kernel.as_geometric().p;
            innovation_ = std::sqrt(1.0 - p_ * p_);
        } else {
            factor_ = cfg.kernel.toeplitz_factor(length);
        }
        path_.resize(static_cast<Eigen::Index>(length));
        noise_.resize(static_cast<Eigen::Index>(length));
    }

    std::vector<Matrix> operator()(std::uint64_t sample, std::size_t offset)
    {
        const std::size_t n = cfg_.n;
        const auto ni = static_cast<Eigen::Index>(n);
        std::vector<Matrix> out(length_ - offset, Matrix(ni, ni));
        // The doubled diagonal variance is carried as √2 on the whole path;
        // N = 1 is the plain scalar process.
        const double diag_scale = n == 1 ? 1.0 : std::sqrt(2.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                const auto entry = static_cast<std::uint32_t>(i * n + j);
                draw_path(NormalStream(cfg_.seed, sample, entry));
                const double scale = (i == j ? diag_scale : 1.0) * inv_sqrt_n_;
                const auto ii = static_cast<Eigen::Index>(i);
                const auto jj = static_cast<Eigen::Index>(j);
                for (std::size_t r = offset; r < length_; ++r) {
                    const double v = scale * path_[static_cast<Eigen::Index>(r)];
                    out[r - offset](ii, jj) = v;
                    out[r - offset](jj, ii) = v;
                }
            }
        }
        return out;
    }

  private:
    // One unit-V(0) sequence with autocovariance V(r − r′) into path_.
    void draw_path(NormalStream normals)
    {
        const auto len = static_cast<Eigen::Index>(length_);
        if (ar1_) {
            // Stationary start, then x_{r+1} = p·x_r + √(1−p²)·ξ_r.
            path_[0] = normals();
            for (Eigen::Index r = 1; r < len; ++r) path_[r] = p_ * path_[r - 1] + innovation_ * normals();
            return;
        }
        for (Eigen::Index r = 0; r < len; ++r) noise_[r] = normals();
        path_.noalias() = factor_.triangularView<Eigen::Lower>() * noise_;
    }

    const RmtConfig& cfg_;
    std::size_t length_;
    double inv_sqrt_n_;
    bool ar1_ = false;
    double p_ = 0.0;
    double innovation_ = 0.0;
    Matrix factor_;
    Eigen::VectorXd path_;
    Eigen::VectorXd noise_;
};

Matrix chain_product(std::span<const Matrix> factors)
{
    Matrix acc = factors.front();
    for (std::size_t s = 1; s < factors.size(); ++s) acc = acc * factors[s];
    return acc;
}

}  // namespace

std::vector<Matrix> generate_family(const RmtConfig& cfg, std::uint64_t sample_index, std::size_t factors,
                                    std::size_t offset)
{
    validate(cfg, factors);
    FamilyGenerator gen(cfg, offset + factors);
    return gen(sample_index, offset);
}

double trace_product_sample(std::span<const Matrix> family)
{
    if (family.empty()) throw DimensionMismatch("trace_product_sample: empty family");
    const Eigen::Index n = family.front().rows();
    for (const auto& m : family) {
        if (m.rows() != n || m.cols() != n) {
            throw DimensionMismatch("trace_product_sample: factors must be square of equal size");
        }
    }
    if (n == 0) throw DimensionMismatch("trace_product_sample: zero-sized factors");
    const double inv_n = 1.0 / static_cast<double>(n);
    if (family.size() == 1) return family.front().trace() * inv_n;

    const std::size_t half = family.size() / 2;
    const Matrix left = chain_product(family.first(half));
    const Matrix right = chain_product(family.subspan(half));
    return left.cwiseProduct(right.transpose()).sum() * inv_n;
}

MomentEstimate estimate_trace_product(const RmtConfig& cfg, std::size_t factors, std::size_t offset,
                                      std::size_t workers)
{
    validate(cfg, factors);
    // Factor the kernel once up front so KernelNotPSD surfaces before any work.
    if (!(cfg.kernel.is_geometric() && cfg.method == GeneratorMethod::Auto)) {
        (void)cfg.kernel.toeplitz_factor(offset + factors);
    }

    std::vector<double> traces(cfg.samples);
    const std::size_t threads = std::max<std::size_t>(1, std::min(workers, cfg.samples));
    parallel_for(threads, threads, [&](std::size_t w) {
        FamilyGenerator gen(cfg, offset + factors);
        for (std::size_t s = w; s < cfg.samples; s += threads) {
            const auto family = gen(s, offset);
            traces[s] = trace_product_sample(family);
        }
    });

    // Two-pass mean and variance in sample order.
    double sum = 0.0;
    for (double t : traces) sum += t;
    const double count = static_cast<double>(cfg.samples);
    const double mean = sum / count;
    double ss = 0.0;
    for (double t : traces) ss += (t - mean) * (t - mean);
    const double var = ss / (count - 1.0);

    MomentEstimate est;
    est.mean = mean;
    est.sample_variance_of_trace = var;
    est.std_error = std::sqrt(var / count);
    est.samples = cfg.samples;
    est.factors = factors;
    est.offset = offset;
    est.config = cfg;
    return est;
}

MomentEstimate estimate_moment(const RmtConfig& cfg, std::size_t workers)
{
    if (cfg.k < 1) throw InvalidConfig("even product needs k >= 1");
    return estimate_trace_product(cfg, 2 * cfg.k, 0, workers);
}

MomentEstimate odd_moment_probe(const RmtConfig& cfg, std::size_t workers)
{
    return estimate_trace_product(cfg, 2 * cfg.k + 1, 0, workers);
}

std::vector<VariancePoint> variance_decay_probe(const RmtConfig& cfg, const std::vector<std::size_t>& n_grid,
                                                std::size_t workers)
{
    if (n_grid.size() < 2) throw InsufficientGrid("variance probe needs at least two values of N");
    std::vector<VariancePoint> out;
    out.reserve(n_grid.size());
    for (std::size_t n : n_grid) {
        RmtConfig c = cfg;
        c.n = n;
        out.push_back({n, estimate_moment(c, workers)});
    }
    return out;
}

double reference_limit(const KernelSpec& kernel, std::size_t factors)
{
    if (factors % 2 == 1) return 0.0;
    const std::size_t k = factors / 2;
    if (kernel.is_geometric()) return std::exp(noncrossing_moment_dp_log(k, kernel.as_geometric().p));
    try {
        return weighted_sum_general(k, PairingClass::NonCrossing, kernel);
    } catch (const CapExceeded&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

double reference_scalar(const KernelSpec& kernel, std::size_t factors)
{
    if (factors % 2 == 1) return 0.0;
    const std::size_t k = factors / 2;
    if (kernel.is_geometric()) return std::exp(scalar_moment_dp_log(k, kernel.as_geometric().p));
    try {
        return weighted_sum_general(k, PairingClass::All, kernel);
    } catch (const CapExceeded&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace qcat
