#include "lubchain/tridiagonal.hpp"

#include <algorithm>
#include <cmath>

#include "lubchain/error.hpp"

namespace lubchain {

std::vector<double> TridiagonalMatrix::apply(std::span<double const> x) const
{
    std::size_t const n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        double v = diag[i] * x[i];
        if (i > 0)
            v += lower[i - 1] * x[i - 1];
        if (i + 1 < n)
            v += upper[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

bool TridiagonalMatrix::is_symmetric() const
{
    return lower == upper;
}

std::vector<double> solve_thomas(TridiagonalMatrix const& m, std::span<double const> rhs)
{
    std::size_t const n = m.size();
    if (rhs.size() != n)
        throw SolverError("solve_thomas: rhs size mismatch");
    std::vector<double> x(n);
    if (n == 0)
        return x;

    std::vector<double> c_prime(n);
    double pivot = m.diag[0];
    if (pivot == 0.0)
        throw SolverError("solve_thomas: zero pivot");
    c_prime[0] = n > 1 ? m.upper[0] / pivot : 0.0;
    x[0] = rhs[0] / pivot;

    // Forward sweep
    for (std::size_t i = 1; i < n; ++i)
    {
        pivot = m.diag[i] - m.lower[i - 1] * c_prime[i - 1];
        if (pivot == 0.0)
            throw SolverError("solve_thomas: zero pivot");
        double factor = 1.0 / pivot;
        c_prime[i] = i + 1 < n ? m.upper[i] * factor : 0.0;
        x[i] = (rhs[i] - m.lower[i - 1] * x[i - 1]) * factor;
    }

    // Back substitution
    for (std::size_t i = n - 1; i > 0; --i)
        x[i - 1] -= c_prime[i - 1] * x[i];
    return x;
}

std::vector<double> solve_chain_laplacian(std::span<double const> links,
                                          std::span<double const> rhs)
{
    std::size_t const n = rhs.size();
    if (links.size() != n + 1)
        throw SolverError("solve_chain_laplacian: need one more link than unknowns");
    std::vector<double> x(n);
    if (n == 0)
        return x;
    for (double c : links)
    {
        if (!(c > 0.0) || !std::isfinite(c))
            throw SolverError("solve_chain_laplacian: link conductances must be positive");
    }

    std::vector<double> ratio(n);
    double series = links[0];
    double carried = 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        if (k > 0)
            series = links[k] * series / (links[k] + series);
        double const pivot = links[k + 1] + series;
        ratio[k] = links[k + 1] / pivot;
        carried = (rhs[k] + links[k] * carried) / pivot;
        x[k] = carried;
    }
    for (std::size_t k = n - 1; k > 0; --k)
        x[k - 1] += ratio[k - 1] * x[k];
    return x;
}

double residual_max_norm(TridiagonalMatrix const& m, std::span<double const> x,
                         std::span<double const> rhs)
{
    auto y = m.apply(x);
    double r = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        r = std::max(r, std::abs(y[i] - rhs[i]));
    return r;
}

}  // namespace lubchain
