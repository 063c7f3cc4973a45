#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <random>

#include "heis/eisenstein.hpp"
#include "heis/specfun.hpp"

using namespace heis;
using namespace heis::eisenstein;

namespace {

const cplx w0 = 2.5;

std::shared_ptr<const SpectralContext> ctx4() { return SpectralContext::get(4, WeightClass::Half); }

const EisensteinSeries& E1()
{
    static const EisensteinSeries e(ctx4(), 1, 200);
    return e;
}

const EisensteinSeries& E2()
{
    static const EisensteinSeries e(ctx4(), 2, 200);
    return e;
}

const FourierExpansion& E1_at_inf()
{
    static const FourierExpansion f = [] {
        ExtractionOptions o;
        o.n_max = 6;
        return fourier_coefficients(E1(), 1, w0, o);
    }();
    return f;
}

double automorphy_residual(const EisensteinSeries& E, const modgroup::ModularMatrix& g, cplx z, cplx w)
{
    const auto& nu = E.context().nu();
    double l = E.context().l();
    cplx lhs = automorphy::slash([&](cplx u) { return E(u, w); }, g, z, l);
    cplx rhs = nu(g) * E(z, w);
    return std::abs(lhs - rhs);
}

std::vector<cplx> sample_points()
{
    std::vector<cplx> zs;
    for (int k = 0; k < 10; ++k)
        zs.emplace_back(-0.45 + 0.1 * k, 0.6 + 0.05 * k);
    return zs;
}

}  // namespace

TEST(SpectralContext, LevelFourSingularCusps)
{
    auto c = ctx4();
    EXPECT_EQ(c->m_N(), 2);
    EXPECT_TRUE(c->scaling(1).cusp.is_infinity());
    EXPECT_EQ(c->scaling(2).cusp.p, 0);
    EXPECT_EQ(c->all_cusps().size(), 3u);
    EXPECT_FALSE(c->all_cusps()[1].singular);
}

TEST(SpectralContext, SingularCuspsAreTrivialOnStabilizer)
{
    for (i64 level : {4, 8, 12, 16})
        for (auto wc : {WeightClass::Half, WeightClass::ThreeHalves}) {
            auto c = SpectralContext::get(level, wc);
            for (const auto& cusp : c->all_cusps()) {
                auto s = modgroup::scaling_matrix(cusp, level);
                cplx v = c->nu()(s.stabilizer) * automorphy::r_closed(s.matrix.inverse(), s.stabilizer, c->l());
                EXPECT_EQ(std::abs(v - 1.0) < 1e-12, cusp.singular) << level << " " << cusp.label();
            }
        }
}

TEST(Eval, IdentityCosetOnly)
{
    EisensteinSeries e(ctx4(), 1, 0);
    EXPECT_EQ(e.class_count(), 1u);
    for (cplx z : {cplx(0.1, 0.5), cplx(-0.3, 2.0)})
        EXPECT_LT(std::abs(e(z, w0) - std::pow(z.imag(), w0)), 1e-14);
}

TEST(Eval, Preconditions)
{
    EXPECT_THROW(EisensteinSeries(ctx4(), 3, 200), DomainError);
    EXPECT_THROW(E1().eval(cplx(0.1, 1), 1.2), DomainError);
    EXPECT_THROW(E1().eval(cplx(0.1, -1), w0), DomainError);
}

TEST(Eval, AutomorphyExample)
{
    EXPECT_LE(automorphy_residual(E1(), {1, 0, 4, 1}, cplx(0.3, 0.5), w0), 1e-6);
}

TEST(Eval, AutomorphyUnderGenerators)
{
    for (auto& g : modgroup::generators(4, 5))
        for (cplx z : sample_points())
            EXPECT_LE(automorphy_residual(E1(), g, z, w0), 1e-5) << g.str() << " " << z;
}

TEST(Eval, AutomorphyAtCuspZeroWithinTail)
{
    for (auto& g : modgroup::generators(4, 5))
        for (cplx z : sample_points()) {
            double tail = E2().eval(z, w0).tail_estimate + E2().eval(g.apply(z), w0).tail_estimate;
            EXPECT_LE(automorphy_residual(E2(), g, z, w0), tail) << g.str() << " " << z;
        }
}

TEST(Eval, AutomorphyAtCuspZeroConverges)
{
    EisensteinSeries e(ctx4(), 2, 400);
    for (auto& g : modgroup::generators(4, 5))
        for (cplx z : sample_points())
            EXPECT_LE(automorphy_residual(e, g, z, w0), 1e-5) << g.str() << " " << z;
}

TEST(Eval, AutomorphyThreeHalves)
{
    EisensteinSeries e(SpectralContext::get(4, WeightClass::ThreeHalves), 1, 200);
    for (auto& g : modgroup::generators(4, 3))
        EXPECT_LE(automorphy_residual(e, g, cplx(0.2, 0.8), w0), 1e-5) << g.str();
}

TEST(Eval, DoublingCutoffWithinTailEstimate)
{
    EisensteinSeries e100(ctx4(), 1, 100);
    for (cplx z : {cplx(0.1, 1.0), cplx(0.4, 0.5)}) {
        auto r100 = e100.eval(z, w0);
        auto r200 = E1().eval(z, w0);
        EXPECT_LT(std::abs(r200.value - r100.value), r100.tail_estimate);
        EXPECT_LT(r200.tail_estimate, r100.tail_estimate);
    }
}

TEST(Eval, NonConstantPartDecays)
{
    const auto& ex = E1_at_inf();
    auto rest = [&](double y) {
        cplx z(0.13, y);
        return std::abs(E1()(z, w0) - ex.A * std::pow(y, w0) - ex.B * std::pow(y, 1.0 - w0));
    };
    double r1 = rest(1), r2 = rest(2), r3 = rest(3);
    EXPECT_NEAR(std::log(r2 / r1), -2 * pi, 0.5);
    EXPECT_NEAR(std::log(r3 / r2), -2 * pi, 0.5);
}

TEST(Eval, LaplacianEigenvalue)
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> x(-0.5, 0.5), y(0.6, 1.4);
    for (int k = 0; k < 4; ++k) {
        cplx z(x(rng), y(rng));
        EXPECT_LE(laplacian_residual([](cplx u) { return E1()(u, w0); }, 0.5, z, w0), 1e-4) << z;
    }
}

TEST(Eval, AtCuspOfInfinityIsIdentity)
{
    cplx z(0.2, 0.9);
    EXPECT_LT(std::abs(E1().at_cusp(1, z, w0) - E1()(z, w0)), 1e-14);
}

TEST(Fourier, ConstantTermAtInfinity)
{
    const auto& ex = E1_at_inf();
    EXPECT_LT(std::abs(ex.A - 1.0), 1e-5);
    EXPECT_EQ(ex.n_max(), 6);
    EXPECT_LT(ex.cross_height_residual, 1e-5);
    for (cplx z : {cplx(0.1, 1.0), cplx(-0.27, 0.8), cplx(0.45, 1.6)})
        EXPECT_LT(std::abs(ex(z) - E1()(z, w0)) / std::abs(E1()(z, w0)), 1e-6);
}

TEST(Fourier, HeightIndependentCoefficients)
{
    ExtractionOptions o;
    o.n_max = 5;
    o.heights = {0.8, 1.25};
    auto other = fourier_coefficients(E1(), 1, w0, o);
    const auto& ex = E1_at_inf();
    for (int n = -5; n <= 5; ++n) {
        if (n == 0)
            continue;
        cplx a = ex.coeffs.at(n), b = other.coeffs.at(n);
        EXPECT_LT(std::abs(a - b) / std::abs(a), 1e-5) << n;
    }
    EXPECT_LT(std::abs(ex.B - other.B), 1e-5);
}

TEST(Fourier, PureConstantTermHasNoCoefficients)
{
    auto F = [](cplx z) { return 2.0 * std::pow(z.imag(), w0) + 0.5 * std::pow(z.imag(), 1.0 - w0); };
    ExtractionOptions o;
    o.n_max = 4;
    auto ex = extract_expansion(F, 0.5, w0, o);
    EXPECT_LT(std::abs(ex.A - 2.0), 1e-10);
    EXPECT_LT(std::abs(ex.B - 0.5), 1e-10);
    for (auto& [n, a] : ex.coeffs)
        EXPECT_LT(std::abs(a), 1e-8) << n;
}

TEST(Fourier, RecoversSyntheticExpansion)
{
    FourierExpansion truth;
    truth.w = w0;
    truth.A = 0.7;
    truth.B = cplx(0.1, -0.2);
    truth.coeffs = {{-2, cplx(0.3, 0.1)}, {-1, 1.0}, {1, cplx(0, 2)}, {3, -0.4}};
    ExtractionOptions o;
    o.n_max = 4;
    auto ex = extract_expansion([&](cplx z) { return truth(z); }, 0.5, w0, o);
    EXPECT_LT(std::abs(ex.A - truth.A), 1e-9);
    EXPECT_LT(std::abs(ex.B - truth.B), 1e-9);
    for (int n = -4; n <= 4; ++n) {
        if (n == 0)
            continue;
        cplx t = truth.coeffs.count(n) ? truth.coeffs.at(n) : cplx(0.0);
        EXPECT_LT(std::abs(ex.coeffs.at(n) - t), 1e-8) << n;
    }
}

TEST(Fourier, ExtractionPreconditions)
{
    auto F = [](cplx z) { return z; };
    ExtractionOptions o;
    o.heights = {0.7};
    EXPECT_THROW(extract_expansion(F, 0.5, w0, o), DomainError);
    o.heights = {0.7, 0.7};
    EXPECT_THROW(extract_expansion(F, 0.5, w0, o), DomainError);
    o.heights = {0.7, 1.1};
    o.x_samples = 8;
    EXPECT_THROW(extract_expansion(F, 0.5, w0, o), DomainError);
}

TEST(Fourier, WhittakerNormalisation)
{
    for (int n : {-3, -1, 2})
        for (double y : {0.3, 1.0}) {
            cplx expect = specfun::whittaker_w((n > 0 ? 1 : -1) * 0.25, w0 - 0.5, 4 * pi * std::abs(n) * y);
            EXPECT_LT(std::abs(whittaker_factor(0.5, w0, n, y) - expect), 1e-12 * std::abs(expect));
        }
}

TEST(Fourier, JsonRoundTrip)
{
    const auto& ex = E1_at_inf();
    auto j = to_json(ex);
    for (const char* key : {"level", "weight", "i", "j", "w", "A", "B", "coeffs", "meta"})
        EXPECT_TRUE(j.contains(key)) << key;
    auto back = expansion_from_json(j);
    EXPECT_EQ(back.coeffs.size(), ex.coeffs.size());
    EXPECT_EQ(back.A, ex.A);
    EXPECT_EQ(back.coeffs.at(-3), ex.coeffs.at(-3));
    j["coeffs"][0].erase("re");
    EXPECT_THROW(expansion_from_json(j), SchemaError);
    j = to_json(ex);
    j["level"] = 6;
    EXPECT_THROW(expansion_from_json(j), SchemaError);
}

TEST(Scattering, ShapeAndHeightIndependence)
{
    ExtractionOptions o;
    o.n_max = 0;
    auto phi = scattering_matrix(*ctx4(), w0, 200, o);
    ASSERT_EQ(phi.size(), 2u);
    ASSERT_EQ(phi[0].size(), 2u);
    o.heights = {0.8, 1.25};
    auto phi2 = scattering_matrix(*ctx4(), w0, 200, o);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            EXPECT_LT(std::abs(phi[i][j] - phi2[i][j]), 1e-5);
    EXPECT_LT(std::abs(scattering_entry(*ctx4(), 1, 1, w0) - phi[0][0]), 1e-5);
}

TEST(Scattering, InverseProtocol)
{
    auto chk = scattering_inverse_check(*ctx4(), w0, {0.7, 1.1}, {0.8, 1.25});
    EXPECT_LE(chk.residual, 1e-4);
}
