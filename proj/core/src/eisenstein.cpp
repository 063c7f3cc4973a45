#include "heis/eisenstein.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <mutex>
#include <nlohmann/json.hpp>

#include "heis/arith.hpp"
#include "heis/parallel.hpp"
#include "heis/quadrature.hpp"
#include "heis/specfun.hpp"

namespace heis::eisenstein {

using automorphy::r_closed;
using modgroup::ModularMatrix;
using modgroup::RealMatrix;

SpectralContext::SpectralContext(i64 level, WeightClass l, MultiplierSystem::Hook hook)
    : level_(level), l_(l), nu_(level, l, std::move(hook)), cusps_(modgroup::cusps(level, l))
{
    for (auto& c : cusps_) {
        ScalingMatrix s = modgroup::scaling_matrix(c, level);
        cplx v = nu_(s.stabilizer) * r_closed(s.matrix.inverse(), RealMatrix(s.stabilizer), weight_value(l));
        c.singular = std::abs(v - 1.0) < 1e-9;
        s.cusp.singular = c.singular;
        if (c.singular)
            singular_.push_back(s);
    }
}

std::shared_ptr<const SpectralContext> SpectralContext::get(i64 level, WeightClass l)
{
    static std::mutex mu;
    static std::map<std::pair<i64, int>, std::shared_ptr<const SpectralContext>> cache;
    std::lock_guard lock(mu);
    auto key = std::pair(level, static_cast<int>(l));
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_shared<const SpectralContext>(level, l)).first;
    return it->second;
}

const ScalingMatrix& SpectralContext::scaling(int i) const
{
    if (i < 1 || i > m_N())
        throw DomainError("Eisenstein index " + std::to_string(i) + " is not a singular cusp (m_N = " +
                          std::to_string(m_N()) + ")");
    return singular_[i - 1];
}

EisensteinSeries::EisensteinSeries(std::shared_ptr<const SpectralContext> ctx, int i, double c_max)
    : ctx_(std::move(ctx)), i_(i), c_max_(c_max)
{
    const ScalingMatrix& s = ctx_->scaling(i);
    const RealMatrix sinv = s.matrix.inverse();
    const double l = ctx_->l();
    const double rh = std::sqrt(static_cast<double>(s.cusp.width));
    for (const ModularMatrix& g : modgroup::coset_reps(ctx_->level(), s.cusp, c_max)) {
        ModularMatrix m = s.base.inverse() * g;
        cplx base = 1.0 / (ctx_->nu()(g) * r_closed(sinv, RealMatrix(g), l));
        if (m.c == 0) {
            // sigma^{-1} gamma = +-(1, *; 0, 1)
            has_identity_ = true;
            identity_coef_ = base / automorphy::j_factor(sinv * RealMatrix(g), cplx(0.0, 1.0), l);
            continue;
        }
        terms_.push_back({rh * static_cast<double>(m.c), static_cast<double>(m.d) / static_cast<double>(m.c), base});
    }
}

namespace {

// Periodised kernel P(t) = sum_n g(t + n), g(s) = e^{-i l arg(s + i y)} |s + i y|^{-2w}.
class PeriodicKernel {
public:
    PeriodicKernel(double y, cplx w, double l) : y_(y), w_(w), l_(l)
    {
        M_ = std::max(10, static_cast<int>(std::ceil(3 * y)) + 2);
        const cplx alpha = w + 0.5 * l, beta = w - 0.5 * l;
        const cplx I(0.0, 1.0);
        const int K = 80;
        std::vector<cplx> u(K), v(K);
        u[0] = v[0] = 1.0;
        for (int j = 0; j + 1 < K; ++j) {
            u[j + 1] = u[j] * (-alpha - double(j)) / double(j + 1) * I;
            v[j + 1] = v[j] * (-beta - double(j)) / double(j + 1) * (-I);
        }
        ek_.resize(K);
        double yk = 1.0;
        for (int k = 0; k < K; ++k) {
            cplx s = 0.0;
            for (int j = 0; j <= k; ++j)
                s += u[j] * v[k - j];
            ek_[k] = s * yk;
            yk *= y;
        }
        neg_phase_ = std::polar(1.0, -pi * l);
    }

    cplx g(double s) const
    {
        return std::exp(-w_ * std::log(s * s + y_ * y_) - cplx(0.0, l_ * std::atan2(y_, s)));
    }

    // sum over n > M of g(t + n) (side = +1) or over n < -M (side = -1).
    cplx tail(double t, int side) const
    {
        const double A = M_ + 0.5 + side * t;
        const cplx base = std::exp((1.0 - 2.0 * w_) * std::log(A));
        const double invA = 1.0 / A;
        cplx sum = 0.0;
        double ak = 1.0;
        for (std::size_t k = 0; k < ek_.size(); ++k) {
            const cplx p = 2.0 * w_ + double(k);
            cplx s = (1.0 / (p - 1.0) - p * invA * invA / 24.0 +
                      7.0 * p * (p + 1.0) * (p + 2.0) * invA * invA * invA * invA / 5760.0) *
                     base * ak;
            cplx term = ek_[k] * s;
            if (side < 0 && (k % 2 == 1))
                term = -term;
            sum += term;
            if (k > 2 && std::abs(term) < 1e-18 * std::abs(sum))
                break;
            ak *= invA;
        }
        return side < 0 ? neg_phase_ * sum : sum;
    }

    cplx operator()(double t) const
    {
        cplx s = 0.0;
        for (int n = -M_; n <= M_; ++n)
            s += g(t + n);
        return s + tail(t, 1) + tail(t, -1);
    }

private:
    double y_;
    cplx w_;
    double l_;
    int M_;
    std::vector<cplx> ek_;
    cplx neg_phase_;
};

void check_w(cplx w)
{
    if (w.real() < 1.5 - 1e-12)
        throw DomainError("Eisenstein evaluation needs Re(w) >= 1.5");
}

}  // namespace

EvalResult EisensteinSeries::eval(cplx z, cplx w) const
{
    check_w(w);
    const double y = z.imag();
    if (!(y > 0))
        throw DomainError("Eisenstein evaluation needs Im(z) > 0");
    const double x = z.real();
    const double l = ctx_->l();
    PeriodicKernel P(y, w, l);

    cplx sum = 0.0;
    double lastC = -1;
    cplx Cpow = 0.0;
    for (const Term& t : terms_) {
        if (t.C != lastC) {
            Cpow = std::exp(-2.0 * w * std::log(t.C));
            lastC = t.C;
        }
        double u = x + t.shift;
        u -= std::floor(u);
        sum += t.coef * Cpow * P(u);
    }
    const cplx yw = std::exp(w * std::log(y));
    cplx value = yw * (sum + (has_identity_ ? identity_coef_ : 0.0));

    // Crude bound on the omitted classes: at most C' classes per bottom-left C',
    // each bounded by y^w C^{-2w} sup|P|.
    const double rw = w.real();
    const double h = static_cast<double>(ctx_->scaling(i_).cusp.width);
    const double pmax = std::sqrt(pi) * std::exp(std::lgamma(rw - 0.5) - std::lgamma(rw)) * std::pow(y, 1 - 2 * rw) +
                        2 * std::pow(y, -2 * rw);
    const double cm = std::max(1.0, c_max_ / std::sqrt(h));
    const double tail = std::pow(y, rw) * pmax * std::pow(h, -rw) * std::pow(cm, 2 - 2 * rw) / (2 * rw - 2);
    return {value, tail};
}

cplx EisensteinSeries::at_cusp(int j, cplx z, cplx w) const
{
    const RealMatrix& s = ctx_->scaling(j).matrix;
    return eval(s.apply(z), w).value / automorphy::j_factor(s, z, ctx_->l());
}

cplx whittaker_factor(double l, cplx w, int n, double y)
{
    double a = n > 0 ? 0.5 * l : -0.5 * l;
    return specfun::whittaker_w(a, w - 0.5, 4 * pi * std::abs(n) * y);
}

int FourierExpansion::n_max() const
{
    int m = 0;
    for (auto& [n, v] : coeffs)
        m = std::max(m, std::abs(n));
    return m;
}

cplx FourierExpansion::nonconstant(cplx z) const
{
    const double y = z.imag(), x = z.real();
    const double l = weight_value(weight);
    cplx s = 0.0;
    for (auto& [n, a] : coeffs) {
        if (a == 0.0)
            continue;
        double ph = n * x;
        ph -= std::floor(ph);
        s += a * whittaker_factor(l, w, n, y) * std::polar(1.0, 2 * pi * ph);
    }
    return s;
}

cplx FourierExpansion::operator()(cplx z) const
{
    const double y = z.imag();
    return A * std::exp(w * std::log(y)) + B * std::exp((1.0 - w) * std::log(y)) + nonconstant(z);
}

namespace {

nlohmann::json cjson(cplx v) { return nlohmann::json::array({v.real(), v.imag()}); }

cplx cfrom(const nlohmann::json& j, const char* field)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError(std::string(field) + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

nlohmann::json to_json(const FourierExpansion& e)
{
    nlohmann::json coeffs = nlohmann::json::array();
    for (auto& [n, v] : e.coeffs)
        coeffs.push_back({{"n", n}, {"re", v.real()}, {"im", v.imag()}});
    return {{"level", e.level},
            {"weight", weight_name(e.weight)},
            {"i", e.i},
            {"j", e.j},
            {"w", cjson(e.w)},
            {"A", cjson(e.A)},
            {"B", cjson(e.B)},
            {"coeffs", coeffs},
            {"meta",
             {{"c_max", e.c_max},
              {"heights", e.heights},
              {"tail_estimate", e.tail_estimate},
              {"cross_height_residual", e.cross_height_residual}}}};
}

FourierExpansion expansion_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw SchemaError("expansion: expected a JSON object");
    for (const char* f : {"level", "weight", "w", "A", "B", "coeffs"})
        if (!j.contains(f))
            throw SchemaError(std::string("expansion.") + f + ": missing field");
    FourierExpansion e;
    e.level = j.at("level").get<i64>();
    if (e.level <= 0 || e.level % 4 != 0)
        throw SchemaError("expansion.level: must be a positive multiple of 4");
    try {
        e.weight = parse_weight(j.at("weight").get<std::string>());
    } catch (const DomainError& ex) {
        throw SchemaError(std::string("expansion.weight: ") + ex.what());
    }
    e.i = j.value("i", 1);
    e.j = j.value("j", 1);
    e.w = cfrom(j.at("w"), "expansion.w");
    e.A = cfrom(j.at("A"), "expansion.A");
    e.B = cfrom(j.at("B"), "expansion.B");
    for (const auto& row : j.at("coeffs")) {
        if (!row.contains("n") || !row.contains("re") || !row.contains("im"))
            throw SchemaError("expansion.coeffs: rows need n, re, im");
        int n = row.at("n").get<int>();
        if (n == 0)
            throw SchemaError("expansion.coeffs: n = 0 is not a coefficient index");
        e.coeffs[n] = {row.at("re").get<double>(), row.at("im").get<double>()};
    }
    if (j.contains("meta")) {
        const auto& m = j.at("meta");
        e.c_max = m.value("c_max", 0.0);
        if (m.contains("heights"))
            e.heights = m.at("heights").get<std::vector<double>>();
        e.tail_estimate = m.value("tail_estimate", 0.0);
        e.cross_height_residual = m.value("cross_height_residual", 0.0);
    }
    return e;
}

FourierExpansion extract_expansion(const std::function<cplx(cplx)>& F, double l, cplx w, const ExtractionOptions& opt)
{
    if (opt.heights.size() < 2)
        throw DomainError("extraction needs at least two heights");
    const double h0 = opt.heights[0], h1 = opt.heights[1];
    if (std::abs(h0 - h1) < 1e-3 * std::max(h0, h1))
        throw DomainError("ill-conditioned height pair for the constant term");
    for (double h : opt.heights)
        if (!(h > 0))
            throw DomainError("heights must be positive");
    const int n_max = opt.n_max;
    const int K0 = opt.x_samples > 0 ? opt.x_samples : std::max(64, 8 * n_max);
    if (K0 < 4 * n_max)
        throw DomainError("x_samples must be at least 4 n_max");

    // Height at which each coefficient is read.
    std::map<int, double> yn;
    for (int n = 1; n <= n_max; ++n) {
        double y = h0;
        while (2 * pi * n * y > opt.ladder_tau)
            y *= 0.5;
        yn[n] = y;
    }
    std::map<double, int> grid;
    for (double h : opt.heights)
        grid[h] = K0;
    for (auto& [n, y] : yn) {
        int K = 2 * n_max + static_cast<int>(std::ceil(5.0 / y));
        K = std::max(K0, (K + 7) / 8 * 8);
        grid[y] = std::max(grid.count(y) ? grid[y] : 0, K);
    }

    std::vector<std::pair<double, int>> jobs;
    std::vector<std::size_t> offset;
    std::size_t total = 0;
    for (auto& [y, K] : grid) {
        jobs.emplace_back(y, K);
        offset.push_back(total);
        total += K;
    }
    std::vector<cplx> values(total);
    std::vector<std::pair<std::size_t, std::size_t>> index;  // (job, k)
    for (std::size_t q = 0; q < jobs.size(); ++q)
        for (int k = 0; k < jobs[q].second; ++k)
            index.emplace_back(q, k);
    parallel_for(total, opt.threads, [&](std::size_t idx) {
        auto [q, k] = index[idx];
        auto [y, K] = jobs[q];
        values[idx] = F(cplx(static_cast<double>(k) / K, y));
    });

    auto coefficient_at = [&](double y, int n) -> cplx {
        std::size_t q = 0;
        while (jobs[q].first != y)
            ++q;
        const int K = jobs[q].second;
        std::vector<cplx> prod(K);
        for (int k = 0; k < K; ++k) {
            i64 ph = arith::mod(static_cast<i64>(n) * k, K);
            prod[k] = values[offset[q] + k] * std::polar(1.0, -2 * pi * static_cast<double>(ph) / K);
        }
        return quad::pairwise_sum(prod) / static_cast<double>(K);
    };

    FourierExpansion e;
    e.w = w;
    e.weight = l == 0.5 ? WeightClass::Half : WeightClass::ThreeHalves;
    e.heights = opt.heights;
    cplx c0 = coefficient_at(h0, 0), c1 = coefficient_at(h1, 0);
    auto pw = [](double y, cplx s) { return std::exp(s * std::log(y)); };
    cplx m00 = pw(h0, w), m01 = pw(h0, 1.0 - w), m10 = pw(h1, w), m11 = pw(h1, 1.0 - w);
    cplx det = m00 * m11 - m01 * m10;
    e.A = (c0 * m11 - m01 * c1) / det;
    e.B = (m00 * c1 - m10 * c0) / det;
    double resid = 0;
    for (std::size_t k = 2; k < opt.heights.size(); ++k) {
        double y = opt.heights[k];
        cplx c = coefficient_at(y, 0);
        resid = std::max(resid, std::abs(e.A * pw(y, w) + e.B * pw(y, 1.0 - w) - c) / std::max(std::abs(c), 1e-300));
    }
    e.cross_height_residual = resid;
    for (int n = 1; n <= n_max; ++n) {
        for (int sgn : {1, -1}) {
            int m = sgn * n;
            double y = yn[n];
            e.coeffs[m] = coefficient_at(y, m) / whittaker_factor(l, w, m, y);
        }
    }
    return e;
}

FourierExpansion fourier_coefficients(const EisensteinSeries& series, int j, cplx w, const ExtractionOptions& opt)
{
    const SpectralContext& ctx = series.context();
    ctx.scaling(j);
    auto F = [&](cplx z) { return series.at_cusp(j, z, w); };
    FourierExpansion e = extract_expansion(F, ctx.l(), w, opt);
    e.level = ctx.level();
    e.weight = ctx.weight_class();
    e.i = series.index();
    e.j = j;
    e.c_max = series.c_max();
    double ymin = opt.heights[0];
    for (auto& h : opt.heights)
        ymin = std::min(ymin, h);
    for (int n = 1; n <= opt.n_max; ++n) {
        double y = ymin;
        while (2 * pi * n * y > opt.ladder_tau)
            y *= 0.5;
        ymin = std::min(ymin, y);
    }
    e.tail_estimate = series.eval(ctx.scaling(j).matrix.apply(cplx(0.0, ymin)), w).tail_estimate;
    return e;
}

cplx scattering_entry(const SpectralContext& ctx, int i, int j, cplx w, double c_max, const ExtractionOptions& opt)
{
    auto shared = SpectralContext::get(ctx.level(), ctx.weight_class());
    EisensteinSeries E(shared, i, c_max);
    ExtractionOptions o = opt;
    o.n_max = 0;
    return fourier_coefficients(E, j, w, o).B;
}

CMatrix scattering_matrix(const SpectralContext& ctx, cplx w, double c_max, const ExtractionOptions& opt)
{
    const int m = ctx.m_N();
    CMatrix phi(m, std::vector<cplx>(m));
    auto shared = SpectralContext::get(ctx.level(), ctx.weight_class());
    ExtractionOptions o = opt;
    o.n_max = 0;
    for (int i = 1; i <= m; ++i) {
        EisensteinSeries E(shared, i, c_max);
        for (int j = 1; j <= m; ++j)
            phi[i - 1][j - 1] = fourier_coefficients(E, j, w, o).B;
    }
    return phi;
}

ScatteringCheck scattering_inverse_check(const SpectralContext& ctx, cplx w, const std::vector<double>& heights_a,
                                         const std::vector<double>& heights_b, double c_max,
                                         const ExtractionOptions& opt)
{
    ExtractionOptions oa = opt, ob = opt;
    oa.heights = heights_a;
    ob.heights = heights_b;
    ScatteringCheck out;
    out.phi_w = scattering_matrix(ctx, w, c_max, oa);
    CMatrix pb = scattering_matrix(ctx, w, c_max, ob);
    const int m = static_cast<int>(pb.size());
    Eigen::MatrixXcd Pa(m, m), Pb(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            Pa(r, c) = out.phi_w[r][c];
            Pb(r, c) = pb[r][c];
        }
    Eigen::MatrixXcd inv = Pb.inverse();
    out.phi_one_minus.assign(m, std::vector<cplx>(m));
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            out.phi_one_minus[r][c] = inv(r, c);
    Eigen::MatrixXcd R = Pa * inv - Eigen::MatrixXcd::Identity(m, m);
    out.residual = R.cwiseAbs().maxCoeff();
    return out;
}

double laplacian_residual(const std::function<cplx(cplx)>& F, double l, cplx z, cplx w, double h)
{
    const cplx f0 = F(z);
    const cplx fxp = F(z + h), fxm = F(z - h);
    const cplx fyp = F(z + cplx(0, h)), fym = F(z - cplx(0, h));
    const double y = z.imag();
    cplx fxx = (fxp - 2.0 * f0 + fxm) / (h * h);
    cplx fyy = (fyp - 2.0 * f0 + fym) / (h * h);
    cplx fx = (fxp - fxm) / (2 * h);
    cplx lap = -y * y * (fxx + fyy) + cplx(0.0, l * y) * fx;
    return std::abs(lap - w * (1.0 - w) * f0) / std::abs(f0);
}

}  // namespace heis::eisenstein
