#include "heis/automorphy.hpp"

#include <cmath>

#include "heis/arith.hpp"

namespace heis::automorphy {

namespace {

double phase_arg(double c, double d, cplx z)
{
    if (c == 0.0)
        return d > 0 ? 0.0 : pi;
    return std::arg(c * z + d);
}

int sgn(double x) { return (x > 0) - (x < 0); }

}  // namespace

cplx j_factor(const RealMatrix& g, cplx z, double l)
{
    return std::polar(1.0, l * phase_arg(g.c, g.d, z));
}

cplx slash(const std::function<cplx(cplx)>& f, const RealMatrix& g, cplx z, double l)
{
    return f(g.apply(z)) / j_factor(g, z, l);
}

cplx r_direct(const RealMatrix& M, const RealMatrix& N, cplx z, double l)
{
    return j_factor(M, N.apply(z), l) * j_factor(N, z, l) / j_factor(M * N, z, l);
}

int cocycle_exponent(const RealMatrix& M, const RealMatrix& N)
{
    const double m1 = M.c, m2 = M.d, a = N.a, c = N.c;
    const double t1 = m1 * a, t2 = m2 * c;
    double m1p = t1 + t2;
    // Products of scaled entries can leave rounding residue where the exact value is 0.
    if (std::abs(m1p) <= 1e-12 * std::max({std::abs(t1), std::abs(t2), 1.0}))
        m1p = 0.0;
    const bool z1 = m1 == 0.0, zc = c == 0.0, z1p = m1p == 0.0;
    if (!z1 && !zc && !z1p)
        return sgn(m1) + sgn(c) - sgn(m1p) - sgn(m1) * sgn(c) * sgn(m1p);
    if (!z1 && !zc && z1p)
        return (sgn(c) - 1) * (1 - sgn(m1));
    if (z1 && !z1p && !zc)
        return (sgn(c) + 1) * (1 - sgn(m2));
    if (!z1 && !z1p && zc)
        return (1 - sgn(a)) * (1 + sgn(m1));
    return (1 - sgn(a)) * (1 - sgn(m2));
}

cplx r_closed(const RealMatrix& M, const RealMatrix& N, double l)
{
    return std::polar(1.0, 0.5 * pi * l * cocycle_exponent(M, N));
}

cplx theta_multiplier(const ModularMatrix& g)
{
    if (g.c % 4 != 0 || g.det() != 1)
        throw DomainError("theta multiplier: matrix " + g.str() + " is not in Gamma_0(4)");
    double k = arith::kronecker(g.c, g.d);
    return arith::mod(g.d, 4) == 1 ? cplx(k, 0.0) : cplx(0.0, -k);
}

ThetaValue theta_series_oracle(cplx z, int n_max)
{
    if (z.imag() <= 0)
        throw DomainError("theta series: Im z must be positive");
    const double y = z.imag();
    int need = static_cast<int>(std::ceil(std::sqrt(40.0 / (2 * pi * y)))) + 10;
    int n = std::max(n_max, need);
    long double re = 1, im = 0;
    const long double x = z.real();
    for (int k = n; k >= 1; --k) {
        long double k2 = static_cast<long double>(k) * k;
        long double ph = k2 * x;
        ph -= std::floor(ph);
        long double mag = 2.0L * std::exp(-2.0L * 3.14159265358979323846264338327950288L * k2 * y);
        re += mag * std::cos(2.0L * 3.14159265358979323846264338327950288L * ph);
        im += mag * std::sin(2.0L * 3.14159265358979323846264338327950288L * ph);
    }
    double n1 = n + 1.0;
    double tail = 2 * std::exp(-2 * pi * y * n1 * n1) / (1 - std::exp(-2 * pi * y * (2 * n1 + 1)));
    return {cplx(static_cast<double>(re), static_cast<double>(im)), tail, n};
}

MultiplierSystem::MultiplierSystem(i64 level, WeightClass l, Hook hook) : level_(level), l_(l), hook_(std::move(hook))
{
    if (level <= 0 || level % 4 != 0)
        throw DomainError("multiplier system: level must be a positive multiple of 4");
}

cplx MultiplierSystem::operator()(const ModularMatrix& g) const
{
    if (!g.in_gamma0(level_))
        throw DomainError("multiplier system: matrix " + g.str() + " is not in Gamma_0(" + std::to_string(level_) +
                          ")");
    cplx v = theta_multiplier(g);
    if (l_ == WeightClass::ThreeHalves)
        v = std::conj(v);
    if (hook_)
        v *= hook_(g);
    return v;
}

}  // namespace heis::automorphy
