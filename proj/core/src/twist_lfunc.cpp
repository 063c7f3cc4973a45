#include "heis/twist_lfunc.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "heis/automorphy.hpp"
#include "heis/parallel.hpp"
#include "heis/quadrature.hpp"
#include "heis/specfun.hpp"

namespace heis::twist_lfunc {

using modgroup::RealMatrix;

cplx TwistedExpansion::tau0() const { return arith::gauss_sum(character, 0); }

cplx TwistedExpansion::coefficient(int n) const
{
    auto it = base.coeffs.find(n);
    if (it == base.coeffs.end())
        return 0.0;
    return arith::gauss_sum(character, n) * it->second;
}

cplx TwistedExpansion::nonconstant(cplx z) const
{
    const double y = z.imag(), x = z.real();
    const double l = weight_value(base.weight);
    cplx s = 0.0;
    for (auto& [n, a] : base.coeffs) {
        cplx c = arith::gauss_sum(character, n) * a;
        if (c == 0.0)
            continue;
        double ph = n * x;
        ph -= std::floor(ph);
        s += c * eisenstein::whittaker_factor(l, base.w, n, y) * std::polar(1.0, 2 * pi * ph);
    }
    return s;
}

cplx TwistedExpansion::operator()(cplx z) const
{
    const double y = z.imag();
    return A() * std::exp(base.w * std::log(y)) + B() * std::exp((1.0 - base.w) * std::log(y)) + nonconstant(z);
}

TwistedExpansion twist(const FourierExpansion& e, const DirichletCharacter& chi)
{
    if (arith::gcd(chi.modulus(), e.level) != 1)
        throw DomainError("twist modulus " + std::to_string(chi.modulus()) + " is not coprime to level " +
                          std::to_string(e.level));
    return {e, chi};
}

Evaluator twist(Evaluator f, const DirichletCharacter& chi)
{
    const i64 D = chi.modulus();
    std::vector<std::pair<double, cplx>> shifts;
    for (i64 m = 0; m < D; ++m)
        if (chi.turn(m))
            shifts.emplace_back(static_cast<double>(m) / static_cast<double>(D), chi(m));
    return [f = std::move(f), shifts](cplx z) {
        cplx s = 0.0;
        for (auto& [t, c] : shifts)
            s += c * f(z + t);
        return s;
    };
}

Evaluator check_function(Evaluator f, i64 level, double l)
{
    const RealMatrix W = modgroup::fricke(static_cast<double>(level));
    const cplx phase = std::polar(1.0, pi * l / 2);
    return [f = std::move(f), W, l, phase](cplx z) { return phase * automorphy::slash(f, W, z, l); };
}

cplx fricke_prefactor(const DirichletCharacter& chi, i64 N, WeightClass l)
{
    const i64 D = chi.modulus();
    if (D % 2 == 0 || arith::gcd(D, N) != 1)
        throw DomainError("twist modulus must be odd and coprime to 4N");
    return std::conj(chi(arith::mod(-4 * N, D))) * static_cast<double>(arith::kronecker(4 * N, D)) *
           arith::epsilon_factor(D, l);
}

cplx h_factor(const DirichletCharacter& chi, i64 N, WeightClass l, double u)
{
    if (!(std::abs(u) < 0.8))
        throw DomainError("|u| must be below 0.8");
    cplx ratio = cplx(1.0, u) / cplx(1.0, -u);
    return fricke_prefactor(chi, N, l) * specfun::half_power(ratio, weight_value(l));
}

FrickeSides fricke_twist_sides(const Evaluator& f, const DirichletCharacter& chi, i64 N, WeightClass l, cplx z)
{
    const double lv = weight_value(l);
    const i64 D = chi.modulus();
    const i64 q = 4 * N * D * D;
    FrickeSides out;
    out.lhs = automorphy::slash(twist(f, chi), modgroup::fricke(static_cast<double>(q)), z, lv);
    Evaluator fc = check_function(f, 4 * N, lv);
    out.rhs = std::polar(1.0, -pi * lv / 2) * fricke_prefactor(chi, N, l) *
              twist(fc, arith::dual_character(chi))(z);
    return out;
}

cplx l_series(const TwistedExpansion& e, int sign, cplx s)
{
    cplx sum = 0.0;
    for (auto& [n, a] : e.base.coeffs) {
        if (n * sign <= 0)
            continue;
        sum += e.coefficient(n) * std::exp(-s * std::log(static_cast<double>(std::abs(n))));
    }
    return sum;
}

std::array<cplx, 2> c_tensor(cplx s, cplx w, double u, double l)
{
    if (!(std::abs(u) < 0.8))
        throw DomainError("|u| must be below 0.8");
    cplx pre = specfun::gamma(w + s) * specfun::gamma(s - w + 1.0) * std::exp(-s * std::log(4 * pi));
    cplx a = s - w + 1.0, b = s + w;
    cplx f1 = specfun::hyp2f1(a, b, s + 1.0 - l / 2, cplx(0.5, 0.5 * u)) * specfun::rgamma(s + 1.0 - l / 2);
    cplx f2 = specfun::hyp2f1(a, b, s + 1.0 + l / 2, cplx(0.5, -0.5 * u)) * specfun::rgamma(s + 1.0 + l / 2);
    return {pre * f1, pre * f2};
}

const char* route_name(Route r)
{
    switch (r) {
    case Route::CTensor:
        return "c-tensor";
    case Route::MellinQuadrature:
        return "mellin-quadrature";
    case Route::RiemannSplit:
        return "riemann-split";
    }
    return "?";
}

nlohmann::json to_json(const CompletedLValue& v)
{
    auto c = [](cplx x) { return nlohmann::json::array({x.real(), x.imag()}); };
    return {{"s", c(v.s)},
            {"w", c(v.w)},
            {"u", v.u},
            {"character", arith::to_json(v.character)},
            {"value", c(v.value)},
            {"route", route_name(v.route)},
            {"error_estimate", v.error_estimate}};
}

CompletedLValue lambda_ctensor(const TwistedExpansion& e, cplx s, double u)
{
    auto c = c_tensor(s, e.base.w, u, weight_value(e.base.weight));
    cplx v = c[0] * l_series(e, 1, s) + c[1] * l_series(e, -1, s);
    return {s, e.base.w, u, e.character, v, Route::CTensor, 0.0};
}

namespace {

struct Grid {
    std::vector<double> log_y;
    std::vector<double> weight;
};

Grid log_grid(double lo, double hi, const MellinOptions& opt)
{
    if (hi <= lo)
        hi = lo + 1.0;
    int panels = std::max(4, static_cast<int>(std::ceil((hi - lo) * opt.panels_per_unit)));
    quad::Rule r = quad::composite_gauss(lo, hi, panels, opt.order);
    return {r.x, r.w};
}

}  // namespace

CompletedLValue lambda_mellin(const TwistedExpansion& e, cplx s, double u, const MellinOptions& opt)
{
    if (!(std::abs(u) < 0.8))
        throw DomainError("|u| must be below 0.8");
    Grid g = log_grid(opt.log_lo, std::log(opt.decay_height), opt);
    std::vector<cplx> terms(g.log_y.size());
    parallel_for(terms.size(), opt.threads, [&](std::size_t k) {
        double y = std::exp(g.log_y[k]);
        terms[k] = g.weight[k] * e.nonconstant(cplx(u * y, y)) * std::exp(s * g.log_y[k]);
    });
    double edge = std::max(std::abs(terms.front()), std::abs(terms.back())) * opt.order;
    return {s, e.base.w, u, e.character, quad::pairwise_sum(terms), Route::MellinQuadrature, edge};
}

SplitSource dual(const SplitSource& src)
{
    SplitSource d = src;
    std::swap(d.f, d.f_dual);
    d.a = src.a_dual;
    d.b = src.b_dual;
    d.a_dual = src.a;
    d.b_dual = src.b;
    d.fricke = 1.0 / src.fricke;
    if (src.D % 2 == 1)
        d.character = arith::dual_character(src.character);
    return d;
}

SplitTable::SplitTable(const SplitSource& src, double u, double kappa, const MellinOptions& opt)
    : src_(src), u_(u), kappa_(kappa)
{
    if (!(std::abs(u) < 0.8))
        throw DomainError("|u| must be below 0.8");
    if (!(kappa > 0))
        throw DomainError("split point must be positive");
    const double l = weight_value(src.weight);
    alpha_ = 2 * std::sqrt(static_cast<double>(src.N)) * static_cast<double>(src.D);
    const double q = 1 + u * u;
    a_ = kappa / std::sqrt(q);
    b_ = 1 / (q * a_);
    H_ = src.fricke * specfun::half_power(cplx(1.0, u) / cplx(1.0, -u), l);
    const cplx w = src.w;
    const double top = std::log(alpha_ * opt.decay_height);

    auto build = [&](double start, bool lower) {
        Grid g = log_grid(std::log(start), top, opt);
        std::vector<Node> nodes(g.log_y.size());
        parallel_for(nodes.size(), opt.threads, [&](std::size_t k) {
            const double y = std::exp(g.log_y[k]);
            const double im = y / alpha_;
            const cplx yw = std::exp(w * std::log(im)), y1w = std::exp((1.0 - w) * std::log(im));
            cplx v;
            if (!lower)
                v = src_.f(cplx(u * im, im)) - (src_.a * yw + src_.b * y1w);
            else
                v = H_ * (src_.f_dual(cplx(-u * im, im)) - (src_.a_dual * yw + src_.b_dual * y1w));
            nodes[k] = {g.log_y[k], g.weight[k] * v};
        });
        return nodes;
    };
    upper_ = build(a_, false);
    lower_ = build(b_, true);
}

cplx SplitTable::value(cplx s) const
{
    const cplx w = src_.w;
    for (cplx p : {w, 1.0 - w, -w, w - 1.0})
        if (std::abs(s - p) < 1e-12)
            throw PoleError("Lambda has a pole at s = " + std::to_string(p.real()));
    const double lq = std::log(1 + u_ * u_);
    std::vector<cplx> t;
    t.reserve(upper_.size() + lower_.size());
    for (const Node& n : upper_)
        t.push_back(n.weighted * std::exp(s * n.log_y));
    for (const Node& n : lower_)
        t.push_back(n.weighted * std::exp(-s * (lq + n.log_y)));
    cplx integrals = quad::pairwise_sum(t);

    auto pw = [](double base, cplx e) { return std::exp(e * std::log(base)); };
    const double al = alpha_;
    cplx p1 = H_ * std::exp(-s * lq) *
              (src_.a_dual * pw(al, -w) * pw(b_, w - s) / (s - w) +
               src_.b_dual * pw(al, w - 1.0) * pw(b_, 1.0 - w - s) / (s + w - 1.0));
    cplx p2 = -(src_.a * pw(al, -w) * pw(a_, s + w) / (s + w) +
                src_.b * pw(al, w - 1.0) * pw(a_, s + 1.0 - w) / (s + 1.0 - w));
    return pw(al, -s) * (integrals + p1 + p2);
}

CompletedLValue SplitTable::evaluate(cplx s) const
{
    double edge = 0;
    if (!upper_.empty())
        edge = std::abs(upper_.back().weighted) + std::abs(lower_.back().weighted);
    return {s, src_.w, u_, src_.character, value(s), Route::RiemannSplit, edge};
}

SplitSource finite_split_source(const TwistedExpansion& e)
{
    SplitSource src;
    src.N = e.base.level / 4;
    src.D = e.character.modulus();
    src.weight = e.base.weight;
    src.w = e.base.w;
    src.character = e.character;
    src.fricke = fricke_prefactor(e.character, src.N, e.base.weight);
    const double l = weight_value(e.base.weight);
    const RealMatrix W = modgroup::fricke(static_cast<double>(4 * src.N * src.D * src.D));
    const cplx pre = std::polar(1.0, pi * l / 2) / src.fricke;
    Evaluator f = [e](cplx z) { return e.nonconstant(z); };
    src.f = f;
    src.f_dual = [f, W, pre, l](cplx z) { return pre * automorphy::slash(f, W, z, l); };
    return src;
}

CompletedLValue lambda_split(const TwistedExpansion& e, cplx s, double u, double kappa, MellinOptions opt)
{
    return SplitTable(finite_split_source(e), u, kappa, opt).evaluate(s);
}

}  // namespace heis::twist_lfunc
