#include "heis/specfun.hpp"

#include <array>
#include <cmath>

#include "heis/quadrature.hpp"

namespace heis::specfun {

namespace {

constexpr double lanczos_g = 7.0;
constexpr std::array<double, 9> lanczos_p = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_pole(cplx z)
{
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

cplx log_gamma_right(cplx z)
{
    z -= 1.0;
    cplx x = lanczos_p[0];
    for (int i = 1; i < 9; ++i)
        x += lanczos_p[i] / (z + static_cast<double>(i));
    cplx t = z + lanczos_g + 0.5;
    return 0.5 * std::log(2 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

double safe_arg(cplx v)
{
    if (v.imag() == 0.0)
        return v.real() < 0 ? pi : 0.0;
    return std::arg(v);
}

}  // namespace

cplx log_gamma(cplx z)
{
    if (is_pole(z))
        throw PoleError("gamma: pole at non-positive integer");
    if (z.real() < 0.5)
        return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma_right(1.0 - z);
    return log_gamma_right(z);
}

cplx gamma(cplx z)
{
    if (is_pole(z))
        throw PoleError("gamma: pole at non-positive integer");
    if (z.real() < 0.5)
        return pi / (std::sin(pi * z) * std::exp(log_gamma_right(1.0 - z)));
    return std::exp(log_gamma_right(z));
}

cplx rgamma(cplx z)
{
    if (is_pole(z))
        return 0.0;
    if (z.real() < 0.5)
        return std::sin(pi * z) * std::exp(log_gamma_right(1.0 - z)) / pi;
    return std::exp(-log_gamma_right(z));
}

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z, PrecisionBudget budget)
{
    if (is_pole(c))
        throw PoleError("hyp2f1: c is a non-positive integer");
    if (std::abs(z) > 0.8 + 1e-12)
        throw DomainError("hyp2f1: |z| > 0.8 is outside the supported domain");
    cplx sum = 1.0, term = 1.0;
    double biggest = 1.0;
    for (int k = 0; k < budget.max_terms; ++k) {
        double dk = k;
        term *= (a + dk) * (b + dk) / ((c + dk) * (dk + 1)) * z;
        sum += term;
        double at = std::abs(term);
        biggest = std::max(biggest, at);
        if (at == 0.0)
            return sum;
        double r = std::abs((a + dk + 1.0) * (b + dk + 1.0) / ((c + dk + 1.0) * (dk + 2))) * std::abs(z);
        if (r < 1.0 && at * r / (1 - r) <= 1e-17 * std::max(std::abs(sum), 1e-300))
            return sum;
    }
    throw ConvergenceError("hyp2f1: series did not converge within the term budget");
}

cplx whittaker_w(cplx a, cplx b, double z, PrecisionBudget budget)
{
    if (!(z > 0))
        throw DomainError("whittaker_w: z must be positive");
    if (b.real() < 0)
        b = -b;
    cplx c = 0.5 - a + b;
    if (c.real() <= 0)
        return whittaker_w_ode(a, b, z);
    cplx p = c - 1.0;
    cplx q = a - 0.5 + b;
    auto f = [&](double u) -> cplx { return std::exp(p * std::log(u) + q * std::log1p(u / z) - u); };
    auto r = quad::exp_sinh(f, std::min(budget.rel_tol, 1e-13), budget.max_levels);
    return std::exp(-0.5 * z + a * std::log(z)) * rgamma(c) * r.value;
}

cplx whittaker_w_ode(cplx a, cplx b, double z)
{
    if (!(z > 0))
        throw DomainError("whittaker_w: z must be positive");
    double z0 = std::max(z, 40.0 + 4 * std::abs(a) + 2 * std::norm(b));
    cplx w0, dw0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        cplx s = 1.0, ds = 0.0, t = 1.0;
        double prev = 1.0;
        bool ok = false;
        for (int k = 0; k < 400; ++k) {
            double dk = k;
            t *= (0.5 + b - a + dk) * (0.5 - b - a + dk) / ((dk + 1) * (-z0));
            double at = std::abs(t);
            if (at > prev && k > 2)
                break;
            s += t;
            ds += -(dk + 1) * t / z0;
            prev = at;
            if (at <= 1e-17 * std::abs(s)) {
                ok = true;
                break;
            }
        }
        if (ok) {
            cplx pre = std::exp(-0.5 * z0 + a * std::log(z0));
            w0 = pre * s;
            dw0 = w0 * (-0.5 + a / z0) + pre * ds;
            break;
        }
        z0 *= 1.5;
        if (attempt == 7)
            throw ConvergenceError("whittaker_w_ode: asymptotic series failed to converge");
    }
    if (z >= z0)
        return w0;

    // State (W, dW/dt) with t = log Z.
    auto rhs = [&](double t, const std::array<cplx, 2>& y) -> std::array<cplx, 2> {
        double Z = std::exp(t);
        return {y[1], y[1] + (0.25 * Z * Z - a * Z + b * b - 0.25) * y[0]};
    };
    std::array<cplx, 2> y = {w0, z0 * dw0};
    double t = std::log(z0);
    const double t_end = std::log(z);
    while (t > t_end) {
        double Z = std::exp(t);
        double h = -0.01 / std::max(1.0, Z);
        if (t + h < t_end)
            h = t_end - t;
        auto k1 = rhs(t, y);
        std::array<cplx, 2> y2 = {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]};
        auto k2 = rhs(t + 0.5 * h, y2);
        std::array<cplx, 2> y3 = {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]};
        auto k3 = rhs(t + 0.5 * h, y3);
        std::array<cplx, 2> y4 = {y[0] + h * k3[0], y[1] + h * k3[1]};
        auto k4 = rhs(t + h, y4);
        for (int i = 0; i < 2; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += h;
    }
    return y[0];
}

cplx half_power(cplx base, double l)
{
    if (base == cplx(0.0, 0.0))
        throw DomainError("half_power: zero base");
    double lg = std::log(std::abs(base));
    return std::exp(0.5 * l * cplx(lg, safe_arg(base)));
}

}  // namespace heis::specfun
