#include "qcat/kernel.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qcat/errors.hpp"

namespace qcat {

KernelSpec KernelSpec::geometric(double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidWeight("geometric kernel requires 0 < p < 1, got " + std::to_string(p));
    }
    return KernelSpec(Geometric{p});
}

KernelSpec KernelSpec::table(std::vector<double> values)
{
    if (values.empty() || !(values.front() > 0.0)) {
        throw InvalidConfig("tabulated kernel requires V(0) > 0");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidConfig("tabulated kernel has a non-finite value");
    }
    return KernelSpec(Table{std::move(values)});
}

double KernelSpec::operator()(long lag) const
{
    const auto r = static_cast<std::size_t>(lag < 0 ? -lag : lag);
    if (const auto* g = std::get_if<Geometric>(&variant_)) {
        return std::pow(g->p, static_cast<double>(r));
    }
    const auto& t = std::get<Table>(variant_).values;
    if (r >= t.size()) {
        throw KernelDomain("kernel table has no value for lag " + std::to_string(r) +
                           " (max lag " + std::to_string(t.size() - 1) + ")");
    }
    return t[r];
}

std::size_t KernelSpec::max_lag() const
{
    if (is_geometric()) return std::numeric_limits<std::size_t>::max();
    return as_table().values.size() - 1;
}

Eigen::MatrixXd KernelSpec::toeplitz_factor(std::size_t length) const
{
    const auto n = static_cast<Eigen::Index>(length);
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) cov(i, j) = (*this)(static_cast<long>(i - j));
    }

    // Plain Cholesky that tolerates rank deficiency.
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = cov(j, j) - L.row(j).head(j).squaredNorm();
        if (d < -kPsdTolerance) {
            throw KernelNotPSD("Toeplitz covariance is not positive semi-definite (pivot " +
                               std::to_string(d) + " at lag row " + std::to_string(j) + ")");
        }
        if (d <= kPsdTolerance) {
            // Degenerate direction: the remaining entries of this column must
            // also vanish for the matrix to be PSD.
            for (Eigen::Index i = j + 1; i < n; ++i) {
                double off = cov(i, j) - L.row(i).head(j).dot(L.row(j).head(j));
                if (std::abs(off) > 1e-8) {
                    throw KernelNotPSD("Toeplitz covariance is not positive semi-definite");
                }
            }
            continue;
        }
        const double root = std::sqrt(d);
        L(j, j) = root;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            L(i, j) = (cov(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / root;
        }
    }
    return L;
}

std::string KernelSpec::describe() const
{
    std::ostringstream os;
    os.precision(17);
    if (is_geometric()) {
        os << "geometric(p=" << as_geometric().p << ")";
    } else {
        os << "table(";
        const auto& v = as_table().values;
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << ")";
    }
    return os.str();
}

KernelSpec read_kernel(std::istream& in)
{
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        long lag = 0;
        double value = 0.0;
        if (!(ls >> lag >> value)) {
            throw InvalidConfig("kernel file line " + std::to_string(line_no) +
                                ": expected 'lag value'");
        }
        std::string rest;
        if (ls >> rest) {
            throw InvalidConfig("kernel file line " + std::to_string(line_no) + ": trailing text");
        }
        if (lag != static_cast<long>(values.size())) {
            throw InvalidConfig("kernel file line " + std::to_string(line_no) + ": expected lag " +
                                std::to_string(values.size()) + ", got " + std::to_string(lag));
        }
        values.push_back(value);
    }
    auto kernel = KernelSpec::table(std::move(values));
    (void)kernel.toeplitz_factor(kernel.as_table().values.size());
    return kernel;
}

KernelSpec read_kernel_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open kernel file " + path.string());
    return read_kernel(in);
}

}  // namespace qcat
