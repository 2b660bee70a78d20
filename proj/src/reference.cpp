#include "lubchain/reference.hpp"

#include <cmath>
#include <utility>

#include "lubchain/error.hpp"

namespace lubchain::reference {

DenseMatrix to_dense(TridiagonalMatrix const& m)
{
    std::size_t const n = m.size();
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
    {
        a(i, i) = m.diag[i];
        if (i + 1 < n)
        {
            a(i, i + 1) = m.upper[i];
            a(i + 1, i) = m.lower[i];
        }
    }
    return a;
}

std::vector<double> dense_solve(DenseMatrix a, std::vector<double> rhs)
{
    std::size_t const n = a.rows;
    if (a.cols != n || rhs.size() != n)
        throw SolverError("dense_solve: shape mismatch");
    for (std::size_t k = 0; k < n; ++k)
    {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i)
        {
            if (std::abs(a(i, k)) > std::abs(a(pivot, k)))
                pivot = i;
        }
        if (a(pivot, k) == 0.0)
            throw SolverError("dense_solve: singular matrix");
        if (pivot != k)
        {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(k, j), a(pivot, j));
            std::swap(rhs[k], rhs[pivot]);
        }
        for (std::size_t i = k + 1; i < n; ++i)
        {
            double const factor = a(i, k) / a(k, k);
            if (factor == 0.0)
                continue;
            for (std::size_t j = k; j < n; ++j)
                a(i, j) -= factor * a(k, j);
            rhs[i] -= factor * rhs[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;)
    {
        double s = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j)
            s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

std::vector<double> explicit_solution_serial(std::span<double const> gaps,
                                             std::span<double const> forces)
{
    std::size_t const big_n = gaps.size();
    std::size_t const n = big_n - 1;
    std::vector<double> vacuum(big_n);
    double acc = 0.0;
    for (std::size_t i = 0; i < big_n; ++i)
    {
        acc += gaps[i];
        vacuum[i] = acc;
    }
    double const total = vacuum.back();
    std::vector<double> u(n, 0.0);
    if (total == 0.0)
        return u;

    std::vector<double> below(n);
    acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        acc += vacuum[k] * forces[k];
        below[k] = acc;
    }
    std::vector<double> above(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;)
        above[k] = above[k + 1] + (total - vacuum[k]) * forces[k];
    for (std::size_t k = 0; k < n; ++k)
        u[k] = ((total - vacuum[k]) * below[k] + vacuum[k] * above[k + 1]) / total;
    return u;
}

std::vector<double> inclusive_scan_serial(std::span<double const> in)
{
    std::vector<double> out(in.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i)
    {
        acc += in[i];
        out[i] = acc;
    }
    return out;
}

std::vector<double> sample_forces_simpson(ParticleConfiguration const& config,
                                          ForceProfile const& f, int panels)
{
    double const eps = config.radius();
    auto q = config.centers();
    std::vector<double> out(config.num_intervals() - 1);
    int const m = 2 * panels;
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        double const a = q[i + 1] - eps;
        double const h = 2.0 * eps / m;
        double s = f(a) + f(a + 2.0 * eps);
        for (int k = 1; k < m; ++k)
            s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
        out[i] = s * h / 3.0 / (2.0 * eps);
    }
    return out;
}

}  // namespace lubchain::reference
