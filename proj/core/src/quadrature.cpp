#include "heis/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace heis::quad {

namespace {

Rule make_gauss_legendre(int n)
{
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2 / ((1 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace

const Rule& gauss_legendre(int n)
{
    static std::mutex mu;
    static std::map<int, Rule> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

Rule composite_gauss(double a, double b, int panels, int order)
{
    const Rule& g = gauss_legendre(order);
    Rule r;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        for (int k = 0; k < order; ++k) {
            r.x.push_back(lo + 0.5 * h * (g.x[k] + 1));
            r.w.push_back(0.5 * h * g.w[k]);
        }
    }
    return r;
}

Result exp_sinh(const std::function<cplx(double)>& f, double rel_tol, int max_levels)
{
    // u = exp(t - exp(-t)); du/dt = u (1 + exp(-t)).
    auto node = [&](double t) -> cplx {
        double u = std::exp(t - std::exp(-t));
        if (u == 0.0 || !std::isfinite(u))
            return 0.0;
        return f(u) * (u * (1 + std::exp(-t)));
    };
    const double t_lo = -6.0, t_hi = 6.5;
    double h = 0.5;
    cplx sum = 0;
    int evals = 0;
    for (double t = t_lo; t <= t_hi + 1e-12; t += h) {
        sum += node(t);
        ++evals;
    }
    cplx prev = sum * h;
    double err = std::abs(prev);
    for (int level = 1; level <= max_levels; ++level) {
        h *= 0.5;
        for (double t = t_lo + h; t < t_hi; t += 2 * h) {
            sum += node(t);
            ++evals;
        }
        cplx cur = sum * h;
        err = std::abs(cur - prev);
        if (level >= 3 && err <= rel_tol * std::abs(cur))
            return {cur, err, evals};
        prev = cur;
    }
    return {prev, err, evals};
}

namespace {

const double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                       0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<cplx(double)>& f, double a, double b, cplx& res, double& err)
{
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx fc = f(c);
    cplx rk = fc * wgk[7];
    cplx rg = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        cplx f1 = f(c - h * xgk[j]);
        cplx f2 = f(c + h * xgk[j]);
        rk += wgk[j] * (f1 + f2);
        if (j % 2 == 1)
            rg += wg[j / 2] * (f1 + f2);
    }
    res = rk * h;
    err = std::abs((rk - rg) * h);
}

void gk_adapt(const std::function<cplx(double)>& f, double a, double b, double tol, int depth, cplx& total,
              double& err_total, int& evals)
{
    cplx r;
    double e;
    gk15(f, a, b, r, e);
    evals += 15;
    if (e <= tol || depth <= 0) {
        total += r;
        err_total += e;
        return;
    }
    double m = 0.5 * (a + b);
    gk_adapt(f, a, m, 0.5 * tol, depth - 1, total, err_total, evals);
    gk_adapt(f, m, b, 0.5 * tol, depth - 1, total, err_total, evals);
}

}  // namespace

Result gauss_kronrod(const std::function<cplx(double)>& f, double a, double b, double rel_tol, int max_depth)
{
    cplx r0;
    double e0;
    gk15(f, a, b, r0, e0);
    double tol = std::max(rel_tol * std::abs(r0), 1e-300);
    cplx total = 0;
    double err = 0;
    int evals = 15;
    gk_adapt(f, a, b, tol, max_depth, total, err, evals);
    return {total, err, evals};
}

cplx pairwise_sum(const std::vector<cplx>& v)
{
    if (v.empty())
        return 0;
    std::vector<cplx> cur(v);
    while (cur.size() > 1) {
        std::vector<cplx> next((cur.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < cur.size(); i += 2)
            next[i / 2] = cur[i] + cur[i + 1];
        if (cur.size() % 2 == 1)
            next.back() = cur.back();
        cur.swap(next);
    }
    return cur[0];
}

}  // namespace heis::quad
