#include "heis/converse.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "heis/automorphy.hpp"
#include "heis/parallel.hpp"
#include "heis/quadrature.hpp"

namespace heis::converse {

using arith::DirichletCharacter;
using modgroup::ModularMatrix;
using modgroup::RealMatrix;
using nlohmann::json;

bool Family::has_dual() const
{
    return !dual_coeffs_nm.empty() || !dual_coeffs_at_w.empty() || a_dual != 0.0 || b_dual != 0.0;
}

const Family& NiceFamilyDataset::family(int j) const
{
    for (const auto& f : families)
        if (f.j == j)
            return f;
    throw DomainError("dataset has no family j = " + std::to_string(j));
}

namespace {

json cjson(cplx v) { return json::array({v.real(), v.imag()}); }

cplx cparse(const json& j, const std::string& field)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError(field + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

double num(const json& j, const std::string& key, const std::string& field)
{
    if (!j.contains(key) || !j.at(key).is_number())
        throw SchemaError(field + "." + key + ": expected a number");
    return j.at(key).get<double>();
}

int integer(const json& j, const std::string& key, const std::string& field)
{
    if (!j.contains(key) || !j.at(key).is_number_integer())
        throw SchemaError(field + "." + key + ": expected an integer");
    return j.at(key).get<int>();
}

json nm_rows(const std::map<std::pair<int, int>, cplx>& m)
{
    json rows = json::array();
    for (auto& [k, v] : m)
        rows.push_back({{"n", k.first}, {"m", k.second}, {"re", v.real()}, {"im", v.imag()}});
    return rows;
}

json n_rows(const std::map<int, cplx>& m)
{
    json rows = json::array();
    for (auto& [n, v] : m)
        rows.push_back({{"n", n}, {"re", v.real()}, {"im", v.imag()}});
    return rows;
}

void parse_nm(const json& rows, const std::string& field, std::map<std::pair<int, int>, cplx>& out)
{
    if (!rows.is_array())
        throw SchemaError(field + ": expected an array");
    for (std::size_t k = 0; k < rows.size(); ++k) {
        std::string f = field + "[" + std::to_string(k) + "]";
        int n = integer(rows[k], "n", f), m = integer(rows[k], "m", f);
        if (n == 0)
            throw SchemaError(f + ".n: must be nonzero");
        if (m < 1)
            throw SchemaError(f + ".m: must be at least 1");
        out[{n, m}] = {num(rows[k], "re", f), num(rows[k], "im", f)};
    }
}

void parse_n(const json& rows, const std::string& field, std::map<int, cplx>& out)
{
    if (!rows.is_array())
        throw SchemaError(field + ": expected an array");
    for (std::size_t k = 0; k < rows.size(); ++k) {
        std::string f = field + "[" + std::to_string(k) + "]";
        int n = integer(rows[k], "n", f);
        if (n == 0)
            throw SchemaError(f + ".n: must be nonzero");
        out[n] = {num(rows[k], "re", f), num(rows[k], "im", f)};
    }
}

}  // namespace

json to_json(const NiceFamilyDataset& d)
{
    json fams = json::array();
    for (const auto& f : d.families) {
        json row = {{"j", f.j},
                    {"const", {{"a", cjson(f.a)}, {"b", cjson(f.b)}, {"adual", cjson(f.a_dual)}, {"bdual", cjson(f.b_dual)}}}};
        if (!f.coeffs_nm.empty())
            row["coeffs"] = nm_rows(f.coeffs_nm);
        if (!f.coeffs_at_w.empty())
            row["coeffs_at_w"] = n_rows(f.coeffs_at_w);
        if (!f.dual_coeffs_nm.empty())
            row["dual_coeffs"] = nm_rows(f.dual_coeffs_nm);
        if (!f.dual_coeffs_at_w.empty())
            row["dual_coeffs_at_w"] = n_rows(f.dual_coeffs_at_w);
        fams.push_back(std::move(row));
    }
    return {{"level", d.level},
            {"weight", weight_name(d.weight)},
            {"w", cjson(d.w)},
            {"families", fams},
            {"growth", {{"C", d.growth.C}, {"alpha", d.growth.alpha}, {"beta", d.growth.beta}}}};
}

NiceFamilyDataset dataset_from_json(const json& j)
{
    if (!j.is_object())
        throw SchemaError("dataset: expected a JSON object");
    NiceFamilyDataset d;
    d.level = integer(j, "level", "dataset");
    if (d.level <= 0 || d.level % 4 != 0)
        throw SchemaError("dataset.level: must be a positive multiple of 4");
    if (!j.contains("weight") || !j.at("weight").is_string())
        throw SchemaError("dataset.weight: expected \"1/2\" or \"3/2\"");
    try {
        d.weight = parse_weight(j.at("weight").get<std::string>());
    } catch (const DomainError& e) {
        throw SchemaError(std::string("dataset.weight: ") + e.what());
    }
    if (!j.contains("w"))
        throw SchemaError("dataset.w: missing field");
    d.w = cparse(j.at("w"), "dataset.w");
    if (!j.contains("families") || !j.at("families").is_array())
        throw SchemaError("dataset.families: expected an array");
    const json& fams = j.at("families");
    for (std::size_t k = 0; k < fams.size(); ++k) {
        std::string f = "dataset.families[" + std::to_string(k) + "]";
        const json& row = fams[k];
        if (!row.is_object())
            throw SchemaError(f + ": expected an object");
        Family fam;
        fam.j = integer(row, "j", f);
        if (!row.contains("const") || !row.at("const").is_object())
            throw SchemaError(f + ".const: expected an object with a, b, adual, bdual");
        const json& c = row.at("const");
        for (const char* key : {"a", "b"})
            if (!c.contains(key))
                throw SchemaError(f + ".const." + key + ": missing field");
        fam.a = cparse(c.at("a"), f + ".const.a");
        fam.b = cparse(c.at("b"), f + ".const.b");
        if (c.contains("adual"))
            fam.a_dual = cparse(c.at("adual"), f + ".const.adual");
        if (c.contains("bdual"))
            fam.b_dual = cparse(c.at("bdual"), f + ".const.bdual");
        if (row.contains("coeffs"))
            parse_nm(row.at("coeffs"), f + ".coeffs", fam.coeffs_nm);
        if (row.contains("coeffs_at_w"))
            parse_n(row.at("coeffs_at_w"), f + ".coeffs_at_w", fam.coeffs_at_w);
        if (row.contains("dual_coeffs"))
            parse_nm(row.at("dual_coeffs"), f + ".dual_coeffs", fam.dual_coeffs_nm);
        if (row.contains("dual_coeffs_at_w"))
            parse_n(row.at("dual_coeffs_at_w"), f + ".dual_coeffs_at_w", fam.dual_coeffs_at_w);
        if (fam.coeffs_nm.empty() && fam.coeffs_at_w.empty() && !row.contains("coeffs") &&
            !row.contains("coeffs_at_w"))
            throw SchemaError(f + ": needs coeffs or coeffs_at_w");
        d.families.push_back(std::move(fam));
    }
    if (j.contains("growth")) {
        const json& g = j.at("growth");
        if (!g.is_object())
            throw SchemaError("dataset.growth: expected an object");
        d.growth.C = num(g, "C", "dataset.growth");
        d.growth.alpha = num(g, "alpha", "dataset.growth");
        d.growth.beta = g.contains("beta") ? num(g, "beta", "dataset.growth") : 0.0;
    }
    return d;
}

std::map<int, cplx> coefficients_at(const Family& f, cplx w, bool dual)
{
    const auto& nm = dual ? f.dual_coeffs_nm : f.coeffs_nm;
    if (nm.empty())
        return dual ? f.dual_coeffs_at_w : f.coeffs_at_w;
    std::map<int, cplx> out;
    for (auto& [k, v] : nm)
        out[k.first] += v * std::exp(-w * std::log(static_cast<double>(k.second)));
    return out;
}

FourierExpansion expansion(const NiceFamilyDataset& d, int j, bool dual)
{
    const Family& f = d.family(j);
    FourierExpansion e;
    e.level = d.level;
    e.weight = d.weight;
    e.i = j;
    e.j = dual ? d.m_N() : 1;
    e.w = d.w;
    e.A = dual ? f.a_dual : f.a;
    e.B = dual ? f.b_dual : f.b;
    e.coeffs = coefficients_at(f, d.w, dual);
    return e;
}

namespace {

void check_build(const NiceFamilyDataset& d, cplx z, cplx w)
{
    if (std::abs(w - d.w) > 1e-12)
        throw DomainError("dataset constants are sampled at a different w");
    if (z.imag() < 0.3)
        throw DomainError("build_f needs Im z >= 0.3");
}

}  // namespace

cplx build_f(const NiceFamilyDataset& d, int j, cplx z, cplx w)
{
    check_build(d, z, w);
    return expansion(d, j)(z);
}

cplx build_f_dual(const NiceFamilyDataset& d, int j, cplx z, cplx w)
{
    check_build(d, z, w);
    return expansion(d, j, true)(z);
}

NiceFamilyDataset dataset_from_eisenstein(i64 level, WeightClass l, cplx w, double c_max,
                                          const eisenstein::ExtractionOptions& opt)
{
    auto ctx = eisenstein::SpectralContext::get(level, l);
    const int m = ctx->m_N();
    const auto& zero = ctx->scaling(m).cusp;
    if (!(zero.p == 0 && zero.q == 1))
        throw DomainError("cusp 0 is not singular at this level and weight");
    NiceFamilyDataset d;
    d.level = level;
    d.weight = l;
    d.w = w;
    const cplx phase = std::polar(1.0, pi * weight_value(l) / 2);
    const double alpha = w.real() - 0.5;
    double cmax = 0;
    for (int i = 1; i <= m; ++i) {
        eisenstein::EisensteinSeries E(ctx, i, c_max);
        FourierExpansion inf = eisenstein::fourier_coefficients(E, 1, w, opt);
        FourierExpansion at0 = eisenstein::fourier_coefficients(E, m, w, opt);
        Family f;
        f.j = i;
        f.a = inf.A;
        f.b = inf.B;
        f.a_dual = phase * at0.A;
        f.b_dual = phase * at0.B;
        f.coeffs_at_w = inf.coeffs;
        for (auto& [n, v] : at0.coeffs)
            f.dual_coeffs_at_w[n] = phase * v;
        for (auto* c : {&f.coeffs_at_w, &f.dual_coeffs_at_w})
            for (auto& [n, v] : *c)
                cmax = std::max(cmax, std::abs(v) / std::pow(std::abs(n), alpha));
        d.families.push_back(std::move(f));
    }
    d.growth = {2 * cmax, alpha, 0.0};
    return d;
}

NiceFamilyDataset dual_dataset(const NiceFamilyDataset& d)
{
    NiceFamilyDataset out = d;
    for (auto& f : out.families) {
        std::swap(f.a, f.a_dual);
        std::swap(f.b, f.b_dual);
        std::swap(f.coeffs_nm, f.dual_coeffs_nm);
        std::swap(f.coeffs_at_w, f.dual_coeffs_at_w);
    }
    return out;
}

twist_lfunc::SplitSource split_source(const NiceFamilyDataset& d, int j, const DirichletCharacter& chi)
{
    const Family& fam = d.family(j);
    if (!fam.has_dual())
        throw DomainError("family " + std::to_string(j) + " has no dual data");
    const DirichletCharacter chid = arith::dual_character(chi);
    auto f = twist_lfunc::twist(expansion(d, j), chi);
    auto fd = twist_lfunc::twist(expansion(d, j, true), chid);
    twist_lfunc::SplitSource src;
    src.f = [f](cplx z) { return f(z); };
    src.f_dual = [fd](cplx z) { return fd(z); };
    src.a = f.A();
    src.b = f.B();
    src.a_dual = fd.A();
    src.b_dual = fd.B();
    src.N = d.N();
    src.D = chi.modulus();
    src.weight = d.weight;
    src.w = d.w;
    src.fricke = twist_lfunc::fricke_prefactor(chi, d.N(), d.weight);
    src.character = chi;
    return src;
}

cplx residue_term(const NiceFamilyDataset& d, int j, cplx w, double u, double y, const DirichletCharacter& chi)
{
    const Family& f = d.family(j);
    const double D = static_cast<double>(chi.modulus());
    const cplx H = twist_lfunc::h_factor(chi, d.N(), d.weight, u);
    const cplx t0 = arith::gauss_sum(chi, 0);
    const cplx t0d = arith::gauss_sum(arith::dual_character(chi), 0);
    const double X = 4.0 * static_cast<double>(d.N()) * D * D * (1 + u * u) * y;
    auto pw = [](double b, cplx e) { return std::exp(e * std::log(b)); };
    return H * t0d * (f.a_dual * pw(X, -w) + f.b_dual * pw(X, w - 1.0)) - t0 * (f.a * pw(y, w) + f.b * pw(y, 1.0 - w));
}

MellinInversion mellin_invert(const std::function<cplx(cplx)>& lambda, double y, double sigma0, double t_max, int nodes)
{
    if (!(y > 0) || !(t_max > 0) || nodes < 16)
        throw DomainError("mellin_invert needs y > 0, t_max > 0 and at least 16 nodes");
    quad::Rule r = quad::composite_gauss(-t_max, t_max, std::max(1, nodes / 16), 16);
    std::vector<cplx> terms(r.x.size());
    double peak = 0, edge = 0;
    const double ly = std::log(y);
    for (std::size_t k = 0; k < r.x.size(); ++k) {
        cplx s(sigma0, r.x[k]);
        cplx g = lambda(s) * std::exp(-s * ly) / (2 * pi);
        terms[k] = r.w[k] * g;
        peak = std::max(peak, std::abs(g));
        if (std::abs(r.x[k]) >= 0.9 * t_max)
            edge = std::max(edge, std::abs(g));
    }
    if (edge > 1e-3 * peak)
        throw ConvergenceError("Mellin inversion integrand does not decay (edge/peak = " +
                               std::to_string(edge / peak) + ")");
    // The integrand decays at least geometrically past the edge decade.
    return {quad::pairwise_sum(terms), edge * 0.2 * t_max};
}

Reconstruction::Reconstruction(const NiceFamilyDataset& d, int j, int max_modulus, double min_height)
    : level_(d.level),
      l_(weight_value(d.weight)),
      max_modulus_(max_modulus),
      min_height_(min_height),
      f_(expansion(d, j)),
      f_dual_(expansion(d, j, true))
{
    if (!d.family(j).has_dual())
        throw DomainError("reconstruction needs dual data");
}

Reconstruction::Route Reconstruction::best(cplx z) const
{
    Route r{0, 0, z.imag()};
    const double N = static_cast<double>(level_ / 4);
    for (i64 D = 1; D <= max_modulus_; D += 2) {
        if (arith::gcd(D, level_) != 1)
            continue;
        const i64 centre = static_cast<i64>(std::floor(z.real() * D));
        for (i64 m = centre - 1; m <= centre + 2; ++m) {
            if (arith::gcd(arith::mod(m, D), D) != 1)
                continue;
            cplx z0 = z - static_cast<double>(m) / static_cast<double>(D);
            double h = z.imag() / (4 * N * D * D * std::norm(z0));
            if (h > r.height)
                r = {D, m, h};
        }
    }
    return r;
}

double Reconstruction::height(cplx z) const { return best(z).height; }

cplx Reconstruction::operator()(cplx z) const
{
    const Route r = best(z);
    if (r.height < min_height_)
        throw DomainError("point is not reachable from the stored expansions");
    if (r.D == 0)
        return f_(z);
    const i64 N = level_ / 4;
    const double q = 4.0 * N * r.D * r.D;
    const RealMatrix W = modgroup::fricke(q);
    const cplx z0 = z - static_cast<double>(r.m) / static_cast<double>(r.D);
    const cplx zeta = W.apply(z0);
    const cplx jw = automorphy::j_factor(W, zeta, l_);
    const cplx phase = std::polar(1.0, -pi * l_ / 2);
    const WeightClass wc = l_ == 0.5 ? WeightClass::Half : WeightClass::ThreeHalves;
    cplx sum = 0.0;
    auto chars = arith::enumerate_characters(r.D);
    for (const auto& chi : chars) {
        cplx fd = twist_lfunc::twist(f_dual_, arith::dual_character(chi))(zeta);
        cplx f_chi = jw * phase * twist_lfunc::fricke_prefactor(chi, N, wc) * fd;
        sum += std::conj(chi(r.m)) * f_chi;
    }
    return sum / static_cast<double>(chars.size());
}

std::vector<cplx> default_invariance_points()
{
    std::vector<cplx> pts;
    for (int k = 0; k < 10; ++k)
        pts.emplace_back(-0.45 + 0.1 * k, 0.9 + 0.05 * k);
    return pts;
}

std::vector<InvarianceRow> invariance_residuals(const NiceFamilyDataset& d, int j, const std::vector<cplx>& points,
                                                int height)
{
    Reconstruction R(d, j, std::max(7, height + (height % 2 == 0 ? 1 : 0)));
    automorphy::MultiplierSystem nu(d.level, d.weight);
    const double l = weight_value(d.weight);
    const RealMatrix W = modgroup::fricke(static_cast<double>(d.level));
    std::vector<cplx> base(points.size()), fz(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        base[k] = W.apply(points[k]);
        fz[k] = R(base[k]);
    }
    std::vector<InvarianceRow> rows;
    for (const ModularMatrix& g : modgroup::generators(d.level, height)) {
        double worst = 0;
        for (std::size_t k = 0; k < points.size(); ++k) {
            cplx z = base[k];
            cplx lhs = R(g.apply(z)) / automorphy::j_factor(RealMatrix(g), z, l);
            cplx rhs = nu(g) * fz[k];
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        }
        rows.push_back({g, worst});
    }
    return rows;
}

std::vector<InvarianceRow> direct_invariance_residuals(const NiceFamilyDataset& d, int j, int height, int points)
{
    const FourierExpansion f = expansion(d, j);
    automorphy::MultiplierSystem nu(d.level, d.weight);
    const double l = weight_value(d.weight);
    std::vector<InvarianceRow> rows;
    for (const ModularMatrix& g : modgroup::generators(d.level, height)) {
        if (g.c != d.level && g.c != 0)
            continue;
        double diff = 0, scale = 0, ymin = 1e300;
        for (int k = 0; k < points; ++k) {
            const double t = points > 1 ? static_cast<double>(k) / (points - 1) : 0.5;
            cplx z;
            if (g.c == 0)
                z = cplx(-0.5 + t, 0.3 + 0.2 * t);
            else
                z = cplx(-static_cast<double>(g.d) / g.c - 0.04 + 0.08 * t, (1.0 + 0.02 * t) / g.c);
            cplx lhs = f(g.apply(z)) / automorphy::j_factor(RealMatrix(g), z, l);
            cplx rhs = nu(g) * f(z);
            diff = std::max(diff, std::abs(lhs - rhs));
            scale = std::max(scale, std::abs(rhs));
            ymin = std::min({ymin, z.imag(), g.apply(z).imag()});
        }
        // Omitted terms n_max < |n| <= n_max + 40, extrapolating |a_n| <= C' |n|^alpha
        // with C' fitted on the upper half of the stored coefficients.
        const int nm = f.n_max();
        double ctail = 0;
        for (auto& [n, a] : f.coeffs)
            if (2 * std::abs(n) > nm)
                ctail = std::max(ctail, std::abs(a) / std::pow(std::abs(n), d.growth.alpha));
        double omitted = 0;
        for (int n = nm + 1; n <= nm + 40; ++n)
            for (int sg : {1, -1})
                omitted += ctail * std::pow(n, d.growth.alpha) *
                           std::abs(eisenstein::whittaker_factor(l, d.w, sg * n, ymin));
        rows.push_back({g, diff / scale, 2 * omitted / scale});
    }
    return rows;
}

FitResult fit_A(const std::vector<Evaluator>& f, const std::vector<Evaluator>& E, const std::vector<cplx>& points)
{
    const int m = static_cast<int>(E.size());
    const int K = static_cast<int>(points.size());
    if (m == 0 || f.empty())
        throw DomainError("fit_A needs at least one f and one E");
    if (K < 2 * m)
        throw DomainError("fit_A needs at least 2 m_N sample points");
    const int held = std::max(1, K / 3);
    const int fitn = K - held;
    if (fitn < m)
        throw DomainError("too few fitting points");
    Eigen::MatrixXcd M(K, m);
    Eigen::MatrixXcd F(K, static_cast<int>(f.size()));
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < m; ++i)
            M(k, i) = E[i](points[k]);
        for (std::size_t r = 0; r < f.size(); ++r)
            F(k, static_cast<int>(r)) = f[r](points[k]);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(M.topRows(fitn));
    if (qr.rank() < m)
        throw DomainError("sample matrix is rank-deficient");
    Eigen::MatrixXcd X = qr.solve(F.topRows(fitn));  // m x |f|; A = X^T
    FitResult out;
    out.A.assign(f.size(), std::vector<cplx>(m));
    for (std::size_t r = 0; r < f.size(); ++r)
        for (int i = 0; i < m; ++i)
            out.A[r][i] = X(i, static_cast<int>(r));
    Eigen::MatrixXcd R = M * X - F;
    double fit = 0, hold = 0;
    for (int k = 0; k < K; ++k)
        for (int r = 0; r < F.cols(); ++r) {
            double e = std::abs(R(k, r)) / std::max(std::abs(F(k, r)), 1e-300);
            double& slot = k < fitn ? fit : hold;
            slot = std::max(slot, e);
        }
    out.fit_residual = fit;
    out.held_out_residual = hold;
    return out;
}

double a_phi_residual(const CMatrix& A_w, const CMatrix& A_one_minus_w, const CMatrix& phi_w,
                      const CMatrix& phi_one_minus_w)
{
    auto toE = [](const CMatrix& c) {
        Eigen::MatrixXcd M(c.size(), c.empty() ? 0 : c[0].size());
        for (std::size_t r = 0; r < c.size(); ++r)
            for (std::size_t k = 0; k < c[r].size(); ++k)
                M(r, k) = c[r][k];
        return M;
    };
    Eigen::MatrixXcd L = toE(phi_one_minus_w) * toE(A_w) * toE(phi_w) - toE(A_one_minus_w);
    return L.cwiseAbs().maxCoeff();
}

namespace {

json cj(cplx v) { return json::array({v.real(), v.imag()}); }

}  // namespace

report::VerificationReport validate_nice_family(const NiceFamilyDataset& d, const Tolerances& tol,
                                                const ValidationOptions& opt)
{
    if (d.families.empty())
        throw DomainError("empty dataset");
    for (const auto& f : d.families)
        if (!f.has_dual())
            throw DomainError("family " + std::to_string(f.j) + " has no dual data; condition (C) is unevaluable");

    report::VerificationReport rep;
    rep.errata = report::standard_errata();
    rep.assumptions = {
        "analytic hypotheses assumed: meromorphic continuation and boundedness in vertical strips are not finitely "
        "checkable; (B) is a finite scan",
        "twist moduli D range over odd integers coprime to 4N",
        "w and 1 - w are assumed not to be poles of the scattering matrix",
        "L-series are truncated at the dataset's n_max",
    };
    if (d.m_N() > 2) {
        std::string unused;
        for (const auto& f : d.families)
            if (f.j != 1 && f.j != d.m_N())
                unused += (unused.empty() ? "" : ",") + std::to_string(f.j);
        rep.assumptions.push_back("duals of indices {" + unused + "} do not enter the polar part");
    }

    rep.skip("condition A", "meromorphic continuation in (s, w)", "continuation is not finitely testable");

    twist_lfunc::MellinOptions mo = opt.mellin;
    mo.threads = opt.threads;
    const i64 N = d.N();
    for (const auto& fam : d.families) {
        const int j = fam.j;
        // (B)
        {
            auto src = split_source(d, j, DirichletCharacter::principal(1));
            twist_lfunc::SplitTable T(src, opt.u_samples.empty() ? 0.0 : opt.u_samples[0], opt.kappa_left, mo);
            double worst = 0;
            bool finite = true;
            for (int k = -10; k <= 10; ++k) {
                cplx v = T.value(cplx(0.5, 2.0 * k));
                finite = finite && std::isfinite(v.real()) && std::isfinite(v.imag());
                worst = std::max(worst, std::abs(v));
            }
            rep.add("condition B j=" + std::to_string(j), "polar part finite, Lambda bounded on a vertical segment",
                    {{"j", j}, {"sigma", 0.5}, {"t_range", {-20, 20}}, {"points", 21}},
                    finite ? worst : std::numeric_limits<double>::infinity(), tol.condition_b);
        }
        // (C)
        for (i64 D : opt.twist_moduli) {
            if (D % 2 == 0 || arith::gcd(D, d.level) != 1) {
                rep.skip("condition C j=" + std::to_string(j) + " D=" + std::to_string(D),
                         "twisted functional equation", "modulus not odd and coprime to 4N");
                continue;
            }
            auto chars = arith::enumerate_characters(D);
            for (std::size_t c = 0; c < chars.size(); ++c) {
                const auto& chi = chars[c];
                auto src = split_source(d, j, chi);
                for (double u : opt.u_samples) {
                    twist_lfunc::SplitTable left(src, u, opt.kappa_left, mo);
                    twist_lfunc::SplitTable right(twist_lfunc::dual(src), -u, opt.kappa_right, mo);
                    const cplx H = twist_lfunc::h_factor(chi, N, d.weight, u);
                    const double lq = std::log(4.0 * N * D * D * (1 + u * u));
                    // Relative to the largest |Lambda| over the sample set.
                    double diff = 0, scale = 0;
                    for (cplx s : opt.s_samples) {
                        cplx lhs = left.value(s);
                        cplx rhs = H * std::exp(-s * lq) * right.value(-s);
                        diff = std::max(diff, std::abs(lhs - rhs));
                        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
                    }
                    const double worst = diff / scale;
                    rep.add("condition C j=" + std::to_string(j) + " D=" + std::to_string(D) + " chi=" +
                                std::to_string(c) + " u=" + std::to_string(u),
                            "Lambda(s,w,u,chi) = H (4ND^2)^{-s} (1+u^2)^{-s} Lambda_check(-s,w,-u,chi_check)",
                            {{"j", j},
                             {"D", D},
                             {"character", arith::to_json(chi)},
                             {"conductor", chi.conductor()},
                             {"u", u},
                             {"kappa", {opt.kappa_left, opt.kappa_right}},
                             {"s_samples", static_cast<int>(opt.s_samples.size())}},
                            worst, tol.condition_c);
                }
            }
        }
        // (E)
        {
            double worst = 0;
            std::vector<double> lx, ly;
            for (bool dual : {false, true}) {
                for (auto& [n, v] : coefficients_at(fam, d.w, dual)) {
                    double bound = d.growth.C * std::pow(std::abs(n), d.growth.alpha);
                    worst = std::max(worst, std::abs(v) / bound);
                    if (!dual && std::abs(v) > 0) {
                        lx.push_back(std::log(std::abs(n)));
                        ly.push_back(std::log(std::abs(v)));
                    }
                }
                for (auto& [k, v] : dual ? fam.dual_coeffs_nm : fam.coeffs_nm) {
                    double bound = d.growth.C * std::pow(std::abs(k.first), d.growth.alpha) *
                                   std::pow(static_cast<double>(k.second), d.growth.beta);
                    worst = std::max(worst, std::abs(v) / bound);
                }
            }
            double slope = 0;
            if (lx.size() >= 2) {
                double mx = 0, my = 0;
                for (std::size_t k = 0; k < lx.size(); ++k) {
                    mx += lx[k];
                    my += ly[k];
                }
                mx /= lx.size();
                my /= ly.size();
                double sxy = 0, sxx = 0;
                for (std::size_t k = 0; k < lx.size(); ++k) {
                    sxy += (lx[k] - mx) * (ly[k] - my);
                    sxx += (lx[k] - mx) * (lx[k] - mx);
                }
                slope = sxx > 0 ? sxy / sxx : 0;
            }
            auto& row = rep.add("condition E j=" + std::to_string(j), "polynomial growth |a_n| <= C |n|^alpha m^beta",
                                {{"j", j},
                                 {"C", d.growth.C},
                                 {"alpha", d.growth.alpha},
                                 {"beta", d.growth.beta},
                                 {"fitted_exponent", slope}},
                                worst, 1.0);
            if (slope > d.growth.alpha + tol.growth_slack)
                row.pass = false;
            if (!fam.coeffs_nm.empty() && !fam.coeffs_at_w.empty()) {
                auto synth = coefficients_at(fam, d.w, false);
                double r = 0;
                for (auto& [n, v] : fam.coeffs_at_w)
                    r = std::max(r, std::abs(v - synth[n]));
                rep.add("double array j=" + std::to_string(j), "a_n(w) = sum_m a_{n,m} m^{-w}", {{"j", j}}, r, 1e-12);
            }
        }
        // Invariance
        if (opt.check_invariance) {
            auto pts = opt.invariance_points.empty() ? default_invariance_points() : opt.invariance_points;
            auto rows = invariance_residuals(d, j, pts, opt.generator_height);
            double worst = 0;
            json per = json::array();
            for (const auto& r : rows) {
                worst = std::max(worst, r.residual);
                per.push_back({{"gamma", r.gamma.str()}, {"residual", r.residual}});
            }
            rep.add("invariance j=" + std::to_string(j), "f_j(., w) | g = nu(g) f_j(., w) on generators",
                    {{"j", j},
                     {"method", "reconstruction through twisted functional equations"},
                     {"generator_height", opt.generator_height},
                     {"points", pts.size()},
                     {"generators", per}},
                    worst, tol.invariance);
            for (bool dual : {false, true}) {
                auto drows = direct_invariance_residuals(dual ? dual_dataset(d) : d, j, opt.generator_height);
                double dworst = 0, trunc = 0;
                json dper = json::array();
                for (const auto& r : drows) {
                    dworst = std::max(dworst, r.residual);
                    trunc = std::max(trunc, r.truncation);
                    dper.push_back({{"gamma", r.gamma.str()}, {"residual", r.residual}, {"truncation", r.truncation}});
                }
                // The tolerance admits the truncation error predicted by the growth tags.
                rep.add(std::string(dual ? "dual " : "") + "direct invariance j=" + std::to_string(j),
                        "f_j(., w) | g = nu(g) f_j(., w) on generators",
                        {{"j", j},
                         {"method", "expansion at height about 1/(4N)"},
                         {"truncation_bound", trunc},
                         {"generators", dper}},
                        dworst, std::max(tol.invariance, trunc));
            }
        }
    }

    // (D)
    if (opt.other_w && opt.phi_one_minus_w) {
        const NiceFamilyDataset& o = *opt.other_w;
        const CMatrix& phi = *opt.phi_one_minus_w;
        const int m = d.m_N();
        if (o.m_N() != m || static_cast<int>(phi.size()) != m)
            throw DomainError("condition (D) inputs have mismatched sizes");
        double worst = 0;
        for (cplx s : opt.s_samples) {
            for (int sign : {1, -1}) {
                std::vector<cplx> lw(m), l1(m);
                for (int j = 1; j <= m; ++j) {
                    auto chi = DirichletCharacter::principal(1);
                    lw[j - 1] = twist_lfunc::l_series(twist_lfunc::twist(expansion(d, j), chi), sign, s);
                    l1[j - 1] = twist_lfunc::l_series(twist_lfunc::twist(expansion(o, j), chi), sign, s);
                }
                for (int r = 0; r < m; ++r) {
                    cplx acc = 0.0;
                    for (int c = 0; c < m; ++c)
                        acc += phi[r][c] * lw[c];
                    worst = std::max(worst, std::abs(acc - l1[r]) / std::max(std::abs(l1[r]), 1e-300));
                }
            }
        }
        rep.add("condition D", "L(s,1-w,chi) = Phi(1-w) L(s,w,chi)", {{"w", cj(d.w)}, {"w_other", cj(o.w)}}, worst,
                tol.condition_d);
    } else {
        rep.skip("condition D", "L(s,1-w,chi) = Phi(1-w) L(s,w,chi)",
                 "needs coefficients at 1 - w and Phi(1 - w); 1 - w lies outside the convergence region");
    }
    return rep;
}

}  // namespace heis::converse
