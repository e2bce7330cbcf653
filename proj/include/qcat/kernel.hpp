#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace qcat {

/// Covariance V(r − r′) between the matrices at positions r and r′.
///
/// The geometric kernel p^|r| is the fast path; a tabulated kernel lists
/// V(0), V(1), …, V(r_max) and is implicitly even. Lags beyond the table are
/// not defined and raise KernelDomain.
class KernelSpec {
  public:
    struct Geometric {
        double p;
    };
    struct Table {
        std::vector<double> values;
    };

    static KernelSpec geometric(double p);
    static KernelSpec table(std::vector<double> values);

    bool is_geometric() const { return std::holds_alternative<Geometric>(variant_); }
    const Geometric& as_geometric() const { return std::get<Geometric>(variant_); }
    const Table& as_table() const { return std::get<Table>(variant_); }

    // V(lag); symmetric in the sign of lag.
    double operator()(long lag) const;

    // Largest lag for which the kernel is defined (unbounded for geometric).
    std::size_t max_lag() const;

    // Lower Cholesky factor L of the Toeplitz covariance [V(r − r′)] over
    // `length` consecutive positions, so that L·z has that covariance for
    // standard normal z. Semi-definite kernels are accepted: pivots within
    // 1e-10 of zero get a zero column. Throws KernelNotPSD otherwise.
    Eigen::MatrixXd toeplitz_factor(std::size_t length) const;

    std::string describe() const;

  private:
    explicit KernelSpec(std::variant<Geometric, Table> v) : variant_(std::move(v)) {}
    std::variant<Geometric, Table> variant_;
};

inline constexpr double kPsdTolerance = 1e-10;

// Kernel file: one "lag value" pair per line, lags 0, 1, 2, … in order.
// Blank lines and lines starting with '#' are skipped. The kernel is
// validated (V(0) > 0, PSD over the full table) before it is returned.
KernelSpec read_kernel(std::istream& in);
KernelSpec read_kernel_file(const std::filesystem::path& path);

}  // namespace qcat
