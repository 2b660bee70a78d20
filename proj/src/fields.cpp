#include "lubchain/fields.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "lubchain/error.hpp"

namespace lubchain {
namespace {

void require_increasing(std::span<double const> x, char const* what)
{
    for (std::size_t i = 1; i < x.size(); ++i)
    {
        if (!(x[i] > x[i - 1]))
        {
            throw InputError(std::string(what) + " must be strictly increasing");
        }
    }
}

}  // namespace

//---------------------------------------------------------------------------//
PiecewiseConstantField::PiecewiseConstantField(std::vector<double> breakpoints,
                                               std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values))
{
    if (breakpoints_.size() < 2 || values_.size() + 1 != breakpoints_.size())
    {
        throw InputError("piecewise-constant field needs m+1 breakpoints for m values");
    }
    require_increasing(breakpoints_, "breakpoints");
}

PiecewiseConstantField
PiecewiseConstantField::constant(double value, double left, double right)
{
    return PiecewiseConstantField({left, right}, {value});
}

std::size_t PiecewiseConstantField::locate(double x) const
{
    // Right-continuous: the piece whose left breakpoint is the last <= x.
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    auto idx = static_cast<std::ptrdiff_t>(std::distance(breakpoints_.begin(), it)) - 1;
    idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(values_.size()) - 1);
    return static_cast<std::size_t>(idx);
}

double PiecewiseConstantField::operator()(double x) const
{
    return values_[locate(x)];
}

double PiecewiseConstantField::integral() const
{
    double sum = 0;
    for (std::size_t j = 0; j < values_.size(); ++j)
    {
        sum += values_[j] * (breakpoints_[j + 1] - breakpoints_[j]);
    }
    return sum;
}

double PiecewiseConstantField::integral(double a, double b) const
{
    if (b < a)
    {
        return -integral(b, a);
    }
    a = std::max(a, left());
    b = std::min(b, right());
    if (!(b > a))
    {
        return 0;
    }
    double sum = 0;
    for (std::size_t j = locate(a); j < values_.size() && breakpoints_[j] < b; ++j)
    {
        double lo = std::max(a, breakpoints_[j]);
        double hi = std::min(b, breakpoints_[j + 1]);
        if (hi > lo)
        {
            sum += values_[j] * (hi - lo);
        }
    }
    return sum;
}

double PiecewiseConstantField::integrate_against(
    std::function<double(double)> const& antiderivative) const
{
    double sum = 0;
    double prev = antiderivative(breakpoints_.front());
    for (std::size_t j = 0; j < values_.size(); ++j)
    {
        double next = antiderivative(breakpoints_[j + 1]);
        sum += values_[j] * (next - prev);
        prev = next;
    }
    return sum;
}

double PiecewiseConstantField::sup_norm() const
{
    double m = 0;
    for (double v : values_)
    {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double PiecewiseConstantField::total_variation() const
{
    double var = 0;
    for (std::size_t j = 1; j < values_.size(); ++j)
    {
        var += std::abs(values_[j] - values_[j - 1]);
    }
    return var;
}

PiecewiseConstantField PiecewiseConstantField::simplified() const
{
    std::vector<double> bp{breakpoints_.front()};
    std::vector<double> vals{values_.front()};
    for (std::size_t j = 1; j < values_.size(); ++j)
    {
        if (values_[j] != vals.back())
        {
            bp.push_back(breakpoints_[j]);
            vals.push_back(values_[j]);
        }
    }
    bp.push_back(breakpoints_.back());
    return PiecewiseConstantField(std::move(bp), std::move(vals));
}

//---------------------------------------------------------------------------//
PiecewiseAffineField::PiecewiseAffineField(std::vector<double> nodes,
                                           std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values))
{
    if (nodes_.size() < 2 || nodes_.size() != values_.size())
    {
        throw InputError("piecewise-affine field needs >= 2 nodes with one value each");
    }
    require_increasing(nodes_, "nodes");
}

double PiecewiseAffineField::operator()(double x) const
{
    if (x <= nodes_.front())
    {
        return values_.front();
    }
    if (x >= nodes_.back())
    {
        return values_.back();
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    auto j = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
    double t = (x - nodes_[j - 1]) / (nodes_[j] - nodes_[j - 1]);
    return values_[j - 1] + t * (values_[j] - values_[j - 1]);
}

PiecewiseConstantField PiecewiseAffineField::derivative() const
{
    std::vector<double> slopes(nodes_.size() - 1);
    for (std::size_t j = 0; j + 1 < nodes_.size(); ++j)
    {
        slopes[j] = (values_[j + 1] - values_[j]) / (nodes_[j + 1] - nodes_[j]);
    }
    return PiecewiseConstantField(nodes_, std::move(slopes));
}

double PiecewiseAffineField::h1_seminorm_squared() const
{
    double sum = 0;
    for (std::size_t j = 0; j + 1 < nodes_.size(); ++j)
    {
        double du = values_[j + 1] - values_[j];
        sum += du * du / (nodes_[j + 1] - nodes_[j]);
    }
    return sum;
}

double PiecewiseAffineField::sup_norm() const
{
    double m = 0;
    for (double v : values_)
    {
        m = std::max(m, std::abs(v));
    }
    return m;
}

//---------------------------------------------------------------------------//
std::vector<double> merge_breakpoints(std::span<double const> a,
                                      std::span<double const> b)
{
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

PiecewiseConstantField difference(PiecewiseConstantField const& a,
                                  PiecewiseConstantField const& b)
{
    if (a.left() != b.left() || a.right() != b.right())
    {
        throw InputError("difference: fields live on different intervals");
    }
    auto bp = merge_breakpoints(a.breakpoints(), b.breakpoints());
    std::vector<double> vals(bp.size() - 1);
    for (std::size_t j = 0; j < vals.size(); ++j)
    {
        double mid = 0.5 * (bp[j] + bp[j + 1]);
        vals[j] = a(mid) - b(mid);
    }
    return PiecewiseConstantField(std::move(bp), std::move(vals));
}

double integrate_product(PiecewiseConstantField const& a,
                         PiecewiseConstantField const& b)
{
    auto bp = merge_breakpoints(a.breakpoints(), b.breakpoints());
    double lo = std::max(a.left(), b.left());
    double hi = std::min(a.right(), b.right());
    double sum = 0;
    for (std::size_t j = 0; j + 1 < bp.size(); ++j)
    {
        double x0 = bp[j];
        double x1 = bp[j + 1];
        if (x0 < lo || x1 > hi)
        {
            continue;
        }
        double mid = 0.5 * (x0 + x1);
        sum += a(mid) * b(mid) * (x1 - x0);
    }
    return sum;
}

double l2_distance(PiecewiseAffineField const& a, PiecewiseAffineField const& b)
{
    if (a.nodes().front() != b.nodes().front() || a.nodes().back() != b.nodes().back())
    {
        throw InputError("l2_distance: fields live on different intervals");
    }
    auto bp = merge_breakpoints(a.nodes(), b.nodes());
    double sum = 0;
    double e0 = a(bp[0]) - b(bp[0]);
    for (std::size_t j = 0; j + 1 < bp.size(); ++j)
    {
        double e1 = a(bp[j + 1]) - b(bp[j + 1]);
        // Exact for the affine difference on the piece.
        sum += (bp[j + 1] - bp[j]) * (e0 * e0 + e0 * e1 + e1 * e1) / 3.0;
        e0 = e1;
    }
    return std::sqrt(sum);
}

}  // namespace lubchain
