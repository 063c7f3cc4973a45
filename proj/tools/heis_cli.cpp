#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "heis/arith.hpp"
#include "heis/automorphy.hpp"
#include "heis/converse.hpp"
#include "heis/eisenstein.hpp"
#include "heis/modgroup.hpp"
#include "heis/parallel.hpp"
#include "heis/report.hpp"
#include "heis/twist_lfunc.hpp"

using namespace heis;
using nlohmann::json;

namespace {

struct RunConfig {
    i64 level = 4;
    std::string weight = "1/2";
    double c_max = 200;
    int n_max = 8;
    std::vector<double> heights{0.7, 1.1};
    int x_samples = 0;
    int threads = default_threads();
    std::string output;
    bool csv = false;
    std::uint64_t seed = 1;
    std::string w = "2.5";
    double tol = -1;  // command-specific default when negative

    WeightClass weight_class() const { return parse_weight(weight); }
    eisenstein::ExtractionOptions extraction() const
    {
        eisenstein::ExtractionOptions o;
        o.n_max = n_max;
        o.heights = heights;
        o.x_samples = x_samples;
        o.threads = threads;
        return o;
    }
};

struct UsageError : Error {
    using Error::Error;
};

cplx parse_complex(const std::string& s)
{
    std::stringstream ss(s);
    double re = 0, im = 0;
    char comma = 0;
    if (!(ss >> re))
        throw UsageError("cannot parse complex number \"" + s + "\"");
    if (ss >> comma) {
        if (comma != ',' || !(ss >> im))
            throw UsageError("complex numbers are written re or re,im; got \"" + s + "\"");
    }
    return {re, im};
}

json cj(cplx v) { return json::array({v.real(), v.imag()}); }

void emit_text(const RunConfig& cfg, const std::string& text)
{
    if (cfg.output.empty())
        std::cout << text;
    else
        report::write_atomic(cfg.output, text);
}

void emit_json(const RunConfig& cfg, const json& j) { emit_text(cfg, j.dump(2) + "\n"); }

int emit_report(const RunConfig& cfg, const report::VerificationReport& rep)
{
    emit_text(cfg, cfg.csv ? report::to_csv(rep) : report::to_json(rep).dump(2) + "\n");
    return rep.all_pass() ? 0 : 1;
}

void check_level(i64 level)
{
    if (level <= 0 || level % 4 != 0)
        throw UsageError("level must be a positive multiple of 4, got " + std::to_string(level));
}

json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

double tol_or(const RunConfig& cfg, double def) { return cfg.tol >= 0 ? cfg.tol : def; }

int cmd_cusps(const RunConfig& cfg)
{
    check_level(cfg.level);
    const auto& cs = modgroup::cusps(cfg.level, cfg.weight_class());
    emit_json(cfg, {{"level", cfg.level}, {"weight", cfg.weight}, {"cusps", modgroup::to_json(cs)}});
    return 0;
}

int cmd_eval(const RunConfig& cfg, int index, const std::vector<std::string>& points)
{
    check_level(cfg.level);
    const cplx w = parse_complex(cfg.w);
    auto ctx = eisenstein::SpectralContext::get(cfg.level, cfg.weight_class());
    eisenstein::EisensteinSeries E(ctx, index, cfg.c_max);
    json rows = json::array();
    for (const auto& p : points) {
        cplx z = parse_complex(p);
        auto r = E.eval(z, w);
        rows.push_back({{"z", cj(z)}, {"value", cj(r.value)}, {"tail_estimate", r.tail_estimate}});
    }
    emit_json(cfg, {{"level", cfg.level},
                    {"weight", cfg.weight},
                    {"index", index},
                    {"w", cj(w)},
                    {"c_max", cfg.c_max},
                    {"classes", E.class_count()},
                    {"values", rows}});
    return 0;
}

int cmd_fourier(const RunConfig& cfg, int index, int cusp, bool as_dataset)
{
    check_level(cfg.level);
    const cplx w = parse_complex(cfg.w);
    if (as_dataset) {
        auto d = converse::dataset_from_eisenstein(cfg.level, cfg.weight_class(), w, cfg.c_max, cfg.extraction());
        emit_json(cfg, converse::to_json(d));
        return 0;
    }
    auto ctx = eisenstein::SpectralContext::get(cfg.level, cfg.weight_class());
    eisenstein::EisensteinSeries E(ctx, index, cfg.c_max);
    emit_json(cfg, eisenstein::to_json(eisenstein::fourier_coefficients(E, cusp, w, cfg.extraction())));
    return 0;
}

int cmd_check_cocycle(const RunConfig& cfg, int count)
{
    std::mt19937_64 rng(cfg.seed);
    const double tol = tol_or(cfg, 1e-9);
    report::VerificationReport rep;
    for (double l : {0.5, 1.5}) {
        int mismatches = 0;
        double worst = 0;
        for (int k = 0; k < count; ++k) {
            auto M = modgroup::random_matrix(rng, 50), N = modgroup::random_matrix(rng, 50);
            modgroup::RealMatrix Mr(M), Nr(N);
            double e = std::abs(automorphy::r_direct(Mr, Nr, cplx(0, 1), l) - automorphy::r_closed(Mr, Nr, l));
            worst = std::max(worst, e);
            mismatches += e > tol;
        }
        rep.add("cocycle closed form l=" + std::string(l == 0.5 ? "1/2" : "3/2"),
                "r(M,N) = exp(pi i l (sgn c + sgn m1 - sgn m1') / 2) case formula",
                {{"pairs", count}, {"entry_bound", 50}, {"seed", cfg.seed}, {"mismatches", mismatches}}, worst, tol);
    }
    return emit_report(cfg, rep);
}

int cmd_check_theta(const RunConfig& cfg, int count, int n_max)
{
    std::mt19937_64 rng(cfg.seed);
    const double tol = tol_or(cfg, 1e-8);
    double worst = 0;
    int effective = n_max;
    const cplx z(0, 1);
    const auto th = automorphy::theta_series_oracle(z, n_max);
    for (int k = 0; k < count; ++k) {
        auto g = modgroup::random_matrix(rng, 60, 4);
        auto tg = automorphy::theta_series_oracle(g.apply(z), n_max);
        effective = std::max(effective, tg.n_max);
        cplx czd = static_cast<double>(g.c) * z + static_cast<double>(g.d);
        cplx ratio = tg.value / (std::sqrt(czd) * th.value);
        worst = std::max(worst, std::abs(ratio - automorphy::theta_multiplier(g)));
    }
    report::VerificationReport rep;
    rep.add("theta multiplier", "theta(g z) = nu_theta(g) (cz+d)^{1/2} theta(z)",
            {{"samples", count}, {"z", cj(z)}, {"n_max", n_max}, {"effective_n_max", effective}, {"seed", cfg.seed}},
            worst, tol);
    return emit_report(cfg, rep);
}

int cmd_check_twist(const RunConfig& cfg, const std::vector<i64>& moduli)
{
    check_level(cfg.level);
    const cplx w = parse_complex(cfg.w);
    const WeightClass wc = cfg.weight_class();
    const double tol = tol_or(cfg, 1e-5);
    auto ctx = eisenstein::SpectralContext::get(cfg.level, wc);
    eisenstein::EisensteinSeries E(ctx, 1, cfg.c_max);
    twist_lfunc::Evaluator f = [&](cplx z) { return E(z, w); };
    const i64 N = cfg.level / 4;
    report::VerificationReport rep;
    rep.errata = report::standard_errata();
    for (i64 D : moduli) {
        if (D % 2 == 0 || arith::gcd(D, cfg.level) != 1)
            throw UsageError("twist modulus " + std::to_string(D) + " must be odd and coprime to the level");
        auto chars = arith::enumerate_characters(D);
        for (std::size_t c = 0; c < chars.size(); ++c) {
            double diff = 0, scale = 1;
            for (int k = 0; k < 10; ++k) {
                cplx z(-0.45 + 0.1 * k, (0.7 + 0.06 * k) / (2.0 * std::sqrt(double(N)) * D));
                auto s = twist_lfunc::fricke_twist_sides(f, chars[c], N, wc, z);
                diff = std::max(diff, std::abs(s.lhs - s.rhs));
                scale = std::max(scale, std::abs(s.rhs));
            }
            rep.add("Fricke twist D=" + std::to_string(D) + " chi=" + std::to_string(c),
                    "f_chi | W_{4ND^2} = e^{-pi i l/2} conj(chi(-4N)) (4N/D) eps_D f_check_{chi_check}",
                    {{"D", D}, {"character", arith::to_json(chars[c])}, {"points", 10}, {"c_max", cfg.c_max}},
                    diff / scale, tol);
        }
    }
    return emit_report(cfg, rep);
}

int cmd_check_lambda(const RunConfig& cfg, const std::vector<i64>& moduli, double u, const std::string& s_str)
{
    check_level(cfg.level);
    const cplx w = parse_complex(cfg.w);
    const cplx s = parse_complex(s_str);
    const WeightClass wc = cfg.weight_class();
    auto ctx = eisenstein::SpectralContext::get(cfg.level, wc);
    eisenstein::EisensteinSeries E1(ctx, 1, cfg.c_max);
    auto ex = eisenstein::fourier_coefficients(E1, 1, w, cfg.extraction());
    twist_lfunc::MellinOptions mo;
    mo.threads = cfg.threads;
    report::VerificationReport rep;
    rep.assumptions.push_back("L-series truncated at n_max = " + std::to_string(cfg.n_max));
    for (i64 D : moduli) {
        auto chars = arith::enumerate_characters(D);
        for (std::size_t c = 0; c < chars.size(); ++c) {
            auto te = twist_lfunc::twist(ex, chars[c]);
            auto r1 = twist_lfunc::lambda_ctensor(te, s, u);
            auto split_opt = mo;
            split_opt.decay_height = 1e5;
            auto r2 = twist_lfunc::lambda_split(te, s, u, 1.0, split_opt);
            auto r3 = twist_lfunc::lambda_mellin(te, s, u, mo);
            const std::string tag = " D=" + std::to_string(D) + " chi=" + std::to_string(c);
            json in = {{"s", cj(s)}, {"w", cj(w)}, {"u", u}, {"D", D}, {"route1", to_json(r1)}};
            in["route2"] = to_json(r2);
            rep.add("two-route Lambda" + tag, "c(s,w,u) (L+, L-) = Riemann split of the Mellin integral", in,
                    std::abs(r1.value - r2.value), tol_or(cfg, 1e-6));
            in["route2"] = to_json(r3);
            rep.add("direct Mellin Lambda" + tag, "c(s,w,u) (L+, L-) = integral of F((i+u)y) y^s dy/y", in,
                    std::abs(r1.value - r3.value), tol_or(cfg, 1e-6));
        }
    }
    return emit_report(cfg, rep);
}

converse::NiceFamilyDataset load_dataset(const std::string& path)
{
    return converse::dataset_from_json(read_json(path));
}

int cmd_validate(const RunConfig& cfg, const std::string& path, const std::vector<i64>& moduli)
{
    auto d = load_dataset(path);
    converse::Tolerances tol;
    if (cfg.tol >= 0)
        tol.condition_c = cfg.tol;
    converse::ValidationOptions opt;
    opt.twist_moduli = moduli;
    opt.threads = cfg.threads;
    return emit_report(cfg, converse::validate_nice_family(d, tol, opt));
}

int cmd_reconstruct(const RunConfig& cfg, const std::string& path, int j, double y, double u, double sigma0,
                    double t_max, int nodes)
{
    auto d = load_dataset(path);
    if (sigma0 <= 0)
        sigma0 = d.w.real() + 1.5;
    auto chi = arith::DirichletCharacter::principal(1);
    twist_lfunc::MellinOptions mo;
    mo.threads = cfg.threads;
    twist_lfunc::SplitTable T(converse::split_source(d, j, chi), u, 1.0, mo);
    auto lam = [&](cplx s) { return T.value(s); };
    auto up = converse::mellin_invert(lam, y, sigma0, t_max, nodes);
    auto dn = converse::mellin_invert(lam, y, -sigma0, t_max, nodes);
    cplx res = converse::residue_term(d, j, d.w, u, y, chi);
    auto ex = converse::expansion(d, j);
    cplx z(u * y, y);
    cplx Fj = ex(z) - (ex.A * std::exp(d.w * std::log(y)) + ex.B * std::exp((1.0 - d.w) * std::log(y)));
    const double tol = tol_or(cfg, 1e-4);
    json inputs = {{"j", j}, {"y", y}, {"u", u}, {"sigma0", sigma0}, {"t_max", t_max}, {"nodes", nodes}};
    report::VerificationReport rep;
    rep.errata = report::standard_errata();
    auto in1 = inputs;
    in1["inverse"] = cj(up.value);
    in1["F_j"] = cj(Fj);
    in1["truncation_estimate"] = up.truncation_estimate;
    rep.add("Mellin inversion", "F_j((i+u)y) = (1/2 pi i) integral of Lambda(s) y^{-s} ds", in1,
            std::abs(up.value - Fj), tol);
    auto in2 = inputs;
    in2["difference"] = cj(up.value - dn.value);
    in2["residue_term"] = cj(res);
    rep.add("contour shift", "I(sigma0) - I(-sigma0) = sum of residues of Lambda(s) y^{-s}", in2,
            std::abs(up.value - dn.value - res), tol);
    return emit_report(cfg, rep);
}

int cmd_fit_a(const RunConfig& cfg, const std::string& path)
{
    auto d = load_dataset(path);
    auto ctx = eisenstein::SpectralContext::get(d.level, d.weight);
    if (ctx->m_N() != d.m_N())
        throw SchemaError("dataset.families: expected " + std::to_string(ctx->m_N()) + " families");
    std::vector<eisenstein::EisensteinSeries> series;
    for (int i = 1; i <= ctx->m_N(); ++i)
        series.emplace_back(ctx, i, cfg.c_max);
    std::vector<converse::Evaluator> f, E;
    for (int j = 1; j <= d.m_N(); ++j)
        f.push_back([&d, j](cplx z) { return converse::build_f(d, j, z, d.w); });
    for (auto& s : series)
        E.push_back([&s, w = d.w](cplx z) { return s(z, w); });
    std::vector<cplx> pts;
    for (int k = 0; k < 9; ++k)
        pts.emplace_back(-0.4 + 0.1 * k, 0.5 + 0.07 * k);
    auto fit = converse::fit_A(f, E, pts);
    json A = json::array();
    for (auto& row : fit.A) {
        json r = json::array();
        for (auto& v : row)
            r.push_back(cj(v));
        A.push_back(r);
    }
    report::VerificationReport rep;
    rep.add("fit A held-out", "f(z,w) = A(w) E(z,w)", {{"A", A}, {"points", pts.size()}, {"fit_residual", fit.fit_residual}},
            fit.held_out_residual, tol_or(cfg, 1e-4));
    return emit_report(cfg, rep);
}

std::vector<i64> parse_moduli(const std::string& s)
{
    std::vector<i64> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(std::stoll(tok));
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Half-integral weight Eisenstein series, twisted L-functions and converse checks"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "INI config file (key = value, [command] sections); flags win");
    RunConfig cfg;
    app.add_option("--level", cfg.level, "Level 4N")->capture_default_str();
    app.add_option("--weight", cfg.weight, "Weight class: 1/2 or 3/2")->capture_default_str();
    app.add_option("--w", cfg.w, "Spectral parameter w as re or re,im")->capture_default_str();
    app.add_option("--c-max", cfg.c_max, "Coset truncation bound")->capture_default_str();
    app.add_option("--n-max", cfg.n_max, "Fourier coefficients per sign")->capture_default_str();
    app.add_option("--heights", cfg.heights, "Heights for the constant term")->delimiter(',')->capture_default_str();
    app.add_option("--x-samples", cfg.x_samples, "Samples per horizontal line (0 = automatic)");
    app.add_option("--threads", cfg.threads, "Worker threads (default from HEIS_THREADS)")->capture_default_str();
    app.add_option("--output,-o", cfg.output, "Write the result here (atomically) instead of stdout");
    app.add_flag("--csv", cfg.csv, "Flatten report rows to CSV");
    app.add_option("--seed", cfg.seed, "Seed for randomized sweeps")->capture_default_str();
    app.add_option("--tol", cfg.tol, "Override the command's tolerance");

    int index = 1, cusp = 1, count = 1000, theta_n = 50, j = 1, nodes = 2000;
    bool as_dataset = false;
    std::vector<std::string> points{"0.1,1.0"};
    std::string moduli = "3,5", lambda_moduli = "1,3", validate_moduli = "1", s_str = "3", dataset;
    double u = 0.1, y = 1.0, sigma0 = 0, t_max = 40;

    auto* c_cusps = app.add_subcommand("cusps", "List cusps with widths and singularity");
    auto* c_eval = app.add_subcommand("eval", "Evaluate E_i(z, w)");
    c_eval->add_option("--index,-i", index, "Eisenstein index (1 = infinity)");
    c_eval->add_option("--z", points, "Points as re,im")->expected(1, -1);
    auto* c_fourier = app.add_subcommand("fourier", "Fourier expansion of E_i at cusp j");
    c_fourier->add_option("--index,-i", index, "Eisenstein index");
    c_fourier->add_option("--cusp,-j", cusp, "Singular cusp index");
    c_fourier->add_flag("--as-dataset", as_dataset, "Emit a nice-family dataset built from all E_i");
    auto* c_cocycle = app.add_subcommand("check-cocycle", "Closed-form cocycle vs direct evaluation");
    c_cocycle->add_option("--count", count, "Random pairs per weight")->capture_default_str();
    auto* c_theta = app.add_subcommand("check-theta", "Theta multiplier vs the theta series");
    int theta_count = 200;
    c_theta->add_option("--count", theta_count, "Random elements of Gamma_0(4)")->capture_default_str();
    c_theta->add_option("--theta-n-max", theta_n, "Theta series terms")->capture_default_str();
    auto* c_twist = app.add_subcommand("check-twist", "Twisted Fricke identity on E_1");
    c_twist->add_option("--moduli", moduli, "Comma-separated twist moduli")->capture_default_str();
    auto* c_lambda = app.add_subcommand("check-lambda", "Completed L-function by two routes");
    c_lambda->add_option("--moduli", lambda_moduli, "Comma-separated twist moduli")->capture_default_str();
    c_lambda->add_option("--u", u, "Phase parameter u, |u| < 0.8")->capture_default_str();
    c_lambda->add_option("--s", s_str, "Point s as re or re,im")->capture_default_str();
    auto* c_validate = app.add_subcommand("validate", "Run the nice-family conditions on a dataset");
    c_validate->add_option("dataset", dataset, "Dataset JSON")->required();
    c_validate->add_option("--moduli", validate_moduli, "Twist moduli for the functional equation")
        ->capture_default_str();
    auto* c_reconstruct = app.add_subcommand("reconstruct", "Mellin inversion and contour shift");
    c_reconstruct->add_option("dataset", dataset, "Dataset JSON")->required();
    c_reconstruct->add_option("--j", j, "Family index")->capture_default_str();
    c_reconstruct->add_option("--y", y, "Height")->capture_default_str();
    c_reconstruct->add_option("--u", u, "Phase parameter")->capture_default_str();
    c_reconstruct->add_option("--sigma0", sigma0, "Line of integration (0 = Re w + 1.5)");
    c_reconstruct->add_option("--t-max", t_max, "Half-length of the line")->capture_default_str();
    c_reconstruct->add_option("--nodes", nodes, "Quadrature nodes")->capture_default_str();
    auto* c_fit = app.add_subcommand("fit-a", "Fit f = A E against computed Eisenstein series");
    c_fit->add_option("dataset", dataset, "Dataset JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cfg.threads < 1)
            throw UsageError("--threads must be positive");
        if (*c_cusps)
            return cmd_cusps(cfg);
        if (*c_eval)
            return cmd_eval(cfg, index, points);
        if (*c_fourier)
            return cmd_fourier(cfg, index, cusp, as_dataset);
        if (*c_cocycle)
            return cmd_check_cocycle(cfg, count);
        if (*c_theta)
            return cmd_check_theta(cfg, theta_count, theta_n);
        if (*c_twist)
            return cmd_check_twist(cfg, parse_moduli(moduli));
        if (*c_lambda)
            return cmd_check_lambda(cfg, parse_moduli(lambda_moduli), u, s_str);
        if (*c_validate)
            return cmd_validate(cfg, dataset, parse_moduli(validate_moduli));
        if (*c_reconstruct)
            return cmd_reconstruct(cfg, dataset, j, y, u, sigma0, t_max, nodes);
        if (*c_fit)
            return cmd_fit_a(cfg, dataset);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
