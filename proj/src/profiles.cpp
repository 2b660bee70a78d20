#include "lubchain/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <regex>

#include <boost/math/quadrature/gauss.hpp>

#include "lubchain/error.hpp"

namespace lubchain {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

template<class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};
template<class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_fraction(double v, char const* what)
{
    if (!(v >= 0.0 && v <= 1.0))
    {
        throw InputError(std::string(what) + " must lie in [0, 1]");
    }
}

PiecewiseConstantField
step_field(double background, std::vector<DensityProfile::StepPiece> pieces)
{
    std::sort(pieces.begin(), pieces.end(),
              [](auto const& a, auto const& b) { return a.from < b.from; });
    std::vector<double> bp{0.0};
    std::vector<double> vals;
    double cursor = 0.0;
    for (auto const& p : pieces)
    {
        if (!(p.from >= 0.0 && p.to <= 1.0 && p.from < p.to))
        {
            throw InputError("step piece must satisfy 0 <= from < to <= 1");
        }
        if (p.from < cursor)
        {
            throw InputError("step pieces overlap");
        }
        if (p.from > cursor)
        {
            vals.push_back(background);
            bp.push_back(p.from);
        }
        vals.push_back(p.value);
        bp.push_back(p.to);
        cursor = p.to;
    }
    if (cursor < 1.0)
    {
        vals.push_back(background);
        bp.push_back(1.0);
    }
    return PiecewiseConstantField(std::move(bp), std::move(vals)).simplified();
}

void require_unit_domain(PiecewiseConstantField const& field)
{
    if (field.left() != 0.0 || field.right() != 1.0)
    {
        throw InputError("tabulated profile must cover exactly [0, 1]");
    }
}

/// Average of x^k over [m - h, m + h].
double monomial_average(int k, double m, double h)
{
    // sum over even j of C(k, j) m^{k-j} h^j / (j + 1)
    double sum = 0;
    double binom = 1;
    for (int j = 0; j <= k; ++j)
    {
        if (j % 2 == 0)
        {
            sum += binom * std::pow(m, k - j) * std::pow(h, j) / (j + 1);
        }
        binom = binom * (k - j) / (j + 1);
    }
    return sum;
}

double poly_eval(std::vector<double> const& c, double x)
{
    double v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
    {
        v = v * x + *it;
    }
    return v;
}

}  // namespace

//---------------------------------------------------------------------------//
// TestFunction
//---------------------------------------------------------------------------//
TestFunction TestFunction::monomial(int power)
{
    if (power < 0)
    {
        throw InputError("monomial power must be >= 0");
    }
    return TestFunction(Kind::monomial, power);
}

TestFunction TestFunction::sine(int k)
{
    if (k < 1)
    {
        throw InputError("sine frequency must be >= 1");
    }
    return TestFunction(Kind::sine, k);
}

TestFunction TestFunction::parse(std::string const& name)
{
    static std::regex const mono(R"(x(\^(\d+))?)");
    static std::regex const sin_re(R"(sin\((\d*)pi x\))");
    std::smatch m;
    if (name == "1")
    {
        return monomial(0);
    }
    if (std::regex_match(name, m, mono))
    {
        return monomial(m[2].matched ? std::stoi(m[2]) : 1);
    }
    if (std::regex_match(name, m, sin_re))
    {
        return sine(m[1].length() ? std::stoi(m[1]) : 1);
    }
    throw InputError("unknown test function '" + name + "'");
}

std::string TestFunction::name() const
{
    if (kind_ == Kind::monomial)
    {
        if (index_ == 0)
            return "1";
        if (index_ == 1)
            return "x";
        return "x^" + std::to_string(index_);
    }
    return index_ == 1 ? "sin(pi x)" : "sin(" + std::to_string(index_) + "pi x)";
}

double TestFunction::operator()(double x) const
{
    if (kind_ == Kind::monomial)
        return std::pow(x, index_);
    return std::sin(index_ * pi * x);
}

double TestFunction::derivative(double x) const
{
    if (kind_ == Kind::monomial)
        return index_ == 0 ? 0.0 : index_ * std::pow(x, index_ - 1);
    return index_ * pi * std::cos(index_ * pi * x);
}

double TestFunction::antiderivative(double x) const
{
    if (kind_ == Kind::monomial)
        return std::pow(x, index_ + 1) / (index_ + 1);
    return -std::cos(index_ * pi * x) / (index_ * pi);
}

double TestFunction::pair(PiecewiseConstantField const& field) const
{
    return field.integrate_against([this](double x) { return antiderivative(x); });
}

std::vector<TestFunction> default_test_family()
{
    std::vector<TestFunction> family;
    for (int p = 0; p <= 3; ++p)
        family.push_back(TestFunction::monomial(p));
    for (int k = 1; k <= 5; ++k)
        family.push_back(TestFunction::sine(k));
    return family;
}

//---------------------------------------------------------------------------//
double integrate_smooth(std::function<double(double)> const& f, double a, double b,
                        int subintervals)
{
    using Rule = boost::math::quadrature::gauss<double, 10>;
    double h = (b - a) / subintervals;
    double sum = 0;
    for (int s = 0; s < subintervals; ++s)
    {
        double lo = a + s * h;
        double hi = (s + 1 == subintervals) ? b : lo + h;
        sum += Rule::integrate(f, lo, hi);
    }
    return sum;
}

//---------------------------------------------------------------------------//
// DensityProfile
//---------------------------------------------------------------------------//
DensityProfile::DensityProfile(std::variant<Constant, Piecewise, Bump> data)
    : data_(std::move(data))
{
}

DensityProfile DensityProfile::constant(double value)
{
    require_fraction(value, "constant density");
    return DensityProfile(Constant{value});
}

DensityProfile DensityProfile::step(double background, std::vector<StepPiece> const& pieces)
{
    require_fraction(background, "step background");
    for (auto const& p : pieces)
        require_fraction(p.value, "step value");
    return DensityProfile(Piecewise{step_field(background, pieces), false});
}

DensityProfile DensityProfile::tabulated(PiecewiseConstantField field)
{
    require_unit_domain(field);
    for (double v : field.values())
        require_fraction(v, "tabulated density");
    return DensityProfile(Piecewise{std::move(field), true});
}

DensityProfile DensityProfile::bump(double center, double width, double peak, double base)
{
    require_fraction(peak, "bump peak");
    require_fraction(base, "bump base");
    if (!(width > 0.0))
        throw InputError("bump width must be positive");
    return DensityProfile(Bump{center, width, peak, base});
}

std::string DensityProfile::kind() const
{
    return std::visit(Overloaded{[](Constant const&) { return std::string("constant"); },
                                 [](Piecewise const& p) {
                                     return std::string(p.tabulated ? "tabulated" : "step");
                                 },
                                 [](Bump const&) { return std::string("bump"); }},
                      data_);
}

bool DensityProfile::is_piecewise_constant() const
{
    return !std::holds_alternative<Bump>(data_);
}

double DensityProfile::operator()(double x) const
{
    return std::visit(Overloaded{[](Constant const& c) { return c.value; },
                                 [x](Piecewise const& p) { return p.field(x); },
                                 [x](Bump const& b) {
                                     double t = (x - b.center) / b.width;
                                     if (std::abs(t) >= 0.5)
                                         return b.base;
                                     double c = std::cos(pi * t);
                                     return b.base + (b.peak - b.base) * c * c;
                                 }},
                      data_);
}

double DensityProfile::cumulative(double x) const
{
    x = std::clamp(x, 0.0, 1.0);
    return std::visit(
        Overloaded{[x](Constant const& c) { return c.value * x; },
                   [x](Piecewise const& p) { return p.field.integral(0.0, x); },
                   [x](Bump const& b) {
                       // integral of cos^2(pi (t - c) / w) = (t - c)/2 + w/(4 pi) sin(2 pi (t - c)/w)
                       auto prim = [&b](double t) {
                           double s = (t - b.center) / b.width;
                           return 0.5 * (t - b.center)
                                  + b.width / (4 * pi) * std::sin(2 * pi * s);
                       };
                       double lo = std::max(0.0, b.center - 0.5 * b.width);
                       double hi = std::min(x, b.center + 0.5 * b.width);
                       double bump_part = hi > lo ? prim(hi) - prim(lo) : 0.0;
                       return b.base * x + (b.peak - b.base) * bump_part;
                   }},
        data_);
}

double DensityProfile::inverse_cumulative(double s) const
{
    double total_mass = total();
    if (s <= 0.0)
        return 0.0;
    if (s >= total_mass)
        s = total_mass;
    if (auto const* c = std::get_if<Constant>(&data_))
    {
        return std::min(1.0, s / c->value);
    }
    if (auto const* p = std::get_if<Piecewise>(&data_))
    {
        auto bp = p->field.breakpoints();
        auto vals = p->field.values();
        double acc = 0.0;
        for (std::size_t j = 0; j < vals.size(); ++j)
        {
            double piece = vals[j] * (bp[j + 1] - bp[j]);
            if (acc + piece >= s && vals[j] > 0.0)
            {
                return std::min(bp[j + 1], bp[j] + (s - acc) / vals[j]);
            }
            acc += piece;
        }
        return 1.0;
    }
    // Leftmost preimage by bisection on the monotone cumulative.
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-14)
    {
        double mid = 0.5 * (lo + hi);
        if (cumulative(mid) >= s)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double DensityProfile::inverse_vacuum_integral(double a, double b) const
{
    if (!(b > a))
        return 0.0;
    return std::visit(
        Overloaded{
            [a, b](Constant const& c) { return c.value >= 1.0 ? inf : (b - a) / (1.0 - c.value); },
            [a, b](Piecewise const& p) {
                auto bp = p.field.breakpoints();
                auto vals = p.field.values();
                double sum = 0.0;
                for (std::size_t j = 0; j < vals.size(); ++j)
                {
                    double lo = std::max(a, bp[j]);
                    double hi = std::min(b, bp[j + 1]);
                    if (hi > lo)
                    {
                        if (vals[j] >= 1.0)
                            return inf;
                        sum += (hi - lo) / (1.0 - vals[j]);
                    }
                }
                return sum;
            },
            [a, b](Bump const& bm) {
                double s_lo = bm.center - 0.5 * bm.width;
                double s_hi = bm.center + 0.5 * bm.width;
                double outside = std::max(0.0, std::min(b, s_lo) - a)
                                 + std::max(0.0, b - std::max(a, s_hi));
                double sum = 0.0;
                if (outside > 0.0)
                {
                    if (bm.base >= 1.0)
                        return inf;
                    sum += outside / (1.0 - bm.base);
                }
                double lo = std::max(a, s_lo);
                double hi = std::min(b, s_hi);
                if (!(hi > lo))
                    return sum;
                double alpha = 1.0 - bm.base;
                double rest = 1.0 - bm.peak;  // alpha - amp
                auto theta = [&bm](double x) { return pi * (x - bm.center) / bm.width; };
                double scale = bm.width / pi;
                if (rest <= 0.0)
                {
                    // 1 - rho vanishes quadratically at the center.
                    if (lo <= bm.center && bm.center <= hi)
                        return inf;
                }
                if (alpha <= 0.0)
                {
                    // 1 - rho = rest * cos^2: integral of sec^2 diverges at the edges.
                    if (lo <= s_lo || hi >= s_hi)
                        return inf;
                    return sum + scale * (std::tan(theta(hi)) - std::tan(theta(lo))) / rest;
                }
                // integral of dtheta / (alpha - amp cos^2)
                //   = atan2(sqrt(alpha) sin, sqrt(rest) cos) / sqrt(alpha rest)
                auto prim = [&](double x) {
                    double t = theta(x);
                    return std::atan2(std::sqrt(alpha) * std::sin(t),
                                      std::sqrt(rest) * std::cos(t));
                };
                if (rest <= 0.0)
                {
                    // 1 - rho = alpha sin^2 away from the center
                    return sum
                           + scale * (1.0 / std::tan(theta(lo)) - 1.0 / std::tan(theta(hi)))
                                 / alpha;
                }
                return sum + scale * (prim(hi) - prim(lo)) / std::sqrt(alpha * rest);
            }},
        data_);
}

bool DensityProfile::rigid_on(double a, double b, double threshold) const
{
    double floor = 1.0 - threshold;
    return std::visit(Overloaded{[floor](Constant const& c) { return c.value >= floor; },
                                 [a, b, floor](Piecewise const& p) {
                                     auto bp = p.field.breakpoints();
                                     auto vals = p.field.values();
                                     for (std::size_t j = 0; j < vals.size(); ++j)
                                     {
                                         if (std::min(b, bp[j + 1]) > std::max(a, bp[j])
                                             && vals[j] < floor)
                                             return false;
                                     }
                                     return true;
                                 },
                                 [this, a, b, floor](Bump const& bm) {
                                     double lo = bm.center - 0.5 * bm.width;
                                     double hi = bm.center + 0.5 * bm.width;
                                     double m = std::min((*this)(a), (*this)(b));
                                     if (a < lo || b > hi)
                                         m = std::min(m, bm.base);
                                     if (bm.peak < bm.base && a <= bm.center && bm.center <= b)
                                         m = std::min(m, bm.peak);
                                     return m >= floor;
                                 }},
                      data_);
}

std::vector<double> DensityProfile::breakpoints() const
{
    std::vector<double> out;
    if (auto const* p = std::get_if<Piecewise>(&data_))
    {
        auto bp = p->field.breakpoints();
        out.assign(bp.begin() + 1, bp.end() - 1);
    }
    else if (auto const* bm = std::get_if<Bump>(&data_))
    {
        for (double x : {bm->center - 0.5 * bm->width, bm->center + 0.5 * bm->width})
        {
            if (x > 0.0 && x < 1.0)
                out.push_back(x);
        }
    }
    return out;
}

double DensityProfile::integrate_weighted(std::function<double(double)> const& g) const
{
    if (auto const* c = std::get_if<Constant>(&data_))
    {
        return c->value * integrate_smooth(g, 0.0, 1.0, 64);
    }
    if (auto const* p = std::get_if<Piecewise>(&data_))
    {
        auto bp = p->field.breakpoints();
        auto vals = p->field.values();
        double sum = 0.0;
        for (std::size_t j = 0; j < vals.size(); ++j)
        {
            if (vals[j] != 0.0)
            {
                int sub = std::max(1, static_cast<int>(std::ceil(64 * (bp[j + 1] - bp[j]))));
                sum += vals[j] * integrate_smooth(g, bp[j], bp[j + 1], sub);
            }
        }
        return sum;
    }
    auto pts = breakpoints();
    pts.insert(pts.begin(), 0.0);
    pts.push_back(1.0);
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < pts.size(); ++j)
    {
        sum += integrate_smooth([&](double x) { return (*this)(x) * g(x); }, pts[j],
                                pts[j + 1], 64);
    }
    return sum;
}

double DensityProfile::pair(TestFunction const& phi) const
{
    if (auto const* c = std::get_if<Constant>(&data_))
        return c->value * (phi.antiderivative(1.0) - phi.antiderivative(0.0));
    if (auto const* p = std::get_if<Piecewise>(&data_))
        return phi.pair(p->field);
    return integrate_weighted([&phi](double x) { return phi(x); });
}

//---------------------------------------------------------------------------//
// ForceProfile
//---------------------------------------------------------------------------//
ForceProfile::ForceProfile(std::variant<Constant, Polynomial, Sine, Piecewise> data)
    : data_(std::move(data))
{
}

ForceProfile ForceProfile::constant(double value)
{
    return ForceProfile(Constant{value});
}

ForceProfile ForceProfile::polynomial(std::vector<double> coefficients)
{
    if (coefficients.empty())
        throw InputError("polynomial force needs at least one coefficient");
    return ForceProfile(Polynomial{std::move(coefficients)});
}

ForceProfile ForceProfile::sine(double amplitude, int k)
{
    if (k < 1)
        throw InputError("sine force frequency must be >= 1");
    return ForceProfile(Sine{amplitude, k});
}

ForceProfile ForceProfile::step(double background,
                                std::vector<DensityProfile::StepPiece> const& pieces)
{
    return ForceProfile(Piecewise{step_field(background, pieces), false});
}

ForceProfile ForceProfile::tabulated(PiecewiseConstantField field)
{
    require_unit_domain(field);
    return ForceProfile(Piecewise{std::move(field), true});
}

std::string ForceProfile::kind() const
{
    return std::visit(Overloaded{[](Constant const&) { return std::string("constant"); },
                                 [](Polynomial const&) { return std::string("polynomial"); },
                                 [](Sine const&) { return std::string("sine"); },
                                 [](Piecewise const& p) {
                                     return std::string(p.tabulated ? "tabulated" : "step");
                                 }},
                      data_);
}

double ForceProfile::operator()(double x) const
{
    return std::visit(
        Overloaded{[](Constant const& c) { return c.value; },
                   [x](Polynomial const& p) { return poly_eval(p.coefficients, x); },
                   [x](Sine const& s) { return s.amplitude * std::sin(s.k * pi * x); },
                   [x](Piecewise const& p) { return p.field(x); }},
        data_);
}

double ForceProfile::antiderivative(double x) const
{
    return std::visit(Overloaded{[x](Constant const& c) { return c.value * x; },
                                 [x](Polynomial const& p) {
                                     double v = 0;
                                     auto const& c = p.coefficients;
                                     for (std::size_t k = c.size(); k-- > 0;)
                                         v = v * x + c[k] / static_cast<double>(k + 1);
                                     return v * x;
                                 },
                                 [x](Sine const& s) {
                                     double w = s.k * pi;
                                     return s.amplitude * (1.0 - std::cos(w * x)) / w;
                                 },
                                 [x](Piecewise const& p) { return p.field.integral(0.0, x); }},
                      data_);
}

double ForceProfile::second_antiderivative(double x) const
{
    return std::visit(
        Overloaded{[x](Constant const& c) { return 0.5 * c.value * x * x; },
                   [x](Polynomial const& p) {
                       double v = 0;
                       auto const& c = p.coefficients;
                       for (std::size_t k = c.size(); k-- > 0;)
                           v = v * x + c[k] / static_cast<double>((k + 1) * (k + 2));
                       return v * x * x;
                   },
                   [x](Sine const& s) {
                       double w = s.k * pi;
                       return s.amplitude * (x / w - std::sin(w * x) / (w * w));
                   },
                   [x](Piecewise const& p) {
                       auto bp = p.field.breakpoints();
                       auto vals = p.field.values();
                       double first = 0.0;
                       double second = 0.0;
                       for (std::size_t j = 0; j < vals.size() && bp[j] < x; ++j)
                       {
                           double h = std::min(x, bp[j + 1]) - bp[j];
                           second += first * h + 0.5 * vals[j] * h * h;
                           first += vals[j] * h;
                       }
                       return second;
                   }},
        data_);
}

double ForceProfile::average(double a, double b) const
{
    double m = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    return std::visit(Overloaded{[](Constant const& c) { return c.value; },
                                 [m, h](Polynomial const& p) {
                                     double v = 0;
                                     for (std::size_t k = 0; k < p.coefficients.size(); ++k)
                                         v += p.coefficients[k]
                                              * monomial_average(static_cast<int>(k), m, h);
                                     return v;
                                 },
                                 [m, h](Sine const& s) {
                                     double w = s.k * pi;
                                     // sin(w m) * sin(w h) / (w h)
                                     return s.amplitude * std::sin(w * m) * std::sin(w * h)
                                            / (w * h);
                                 },
                                 [a, b](Piecewise const& p) {
                                     return p.field.integral(a, b) / (b - a);
                                 }},
                      data_);
}

double ForceProfile::l1_norm() const
{
    return std::visit(
        Overloaded{[](Constant const& c) { return std::abs(c.value); },
                   [this](Polynomial const& p) {
                       // Integrate |f| between sign changes located by bisection.
                       constexpr int cells = 4096;
                       std::vector<double> cuts{0.0};
                       auto f = [&p](double x) { return poly_eval(p.coefficients, x); };
                       for (int c = 0; c < cells; ++c)
                       {
                           double lo = double(c) / cells;
                           double hi = double(c + 1) / cells;
                           double flo = f(lo);
                           double fhi = f(hi);
                           if (flo == 0.0 || (flo < 0) == (fhi < 0))
                               continue;
                           for (int it = 0; it < 80; ++it)
                           {
                               double mid = 0.5 * (lo + hi);
                               if ((f(mid) < 0) == (flo < 0))
                                   lo = mid;
                               else
                                   hi = mid;
                           }
                           cuts.push_back(0.5 * (lo + hi));
                       }
                       cuts.push_back(1.0);
                       double sum = 0.0;
                       for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
                           sum += std::abs(antiderivative(cuts[j + 1]) - antiderivative(cuts[j]));
                       return sum;
                   },
                   [](Sine const& s) { return std::abs(s.amplitude) * 2.0 / pi; },
                   [](Piecewise const& p) {
                       auto bp = p.field.breakpoints();
                       auto vals = p.field.values();
                       double sum = 0.0;
                       for (std::size_t j = 0; j < vals.size(); ++j)
                           sum += std::abs(vals[j]) * (bp[j + 1] - bp[j]);
                       return sum;
                   }},
        data_);
}

std::vector<double> ForceProfile::breakpoints() const
{
    if (auto const* p = std::get_if<Piecewise>(&data_))
    {
        auto bp = p->field.breakpoints();
        return {bp.begin() + 1, bp.end() - 1};
    }
    return {};
}

}  // namespace lubchain
