#pragma once

#include <functional>
#include <map>
#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "heis/automorphy.hpp"
#include "heis/modgroup.hpp"

namespace heis::eisenstein {

using automorphy::MultiplierSystem;
using modgroup::Cusp;
using modgroup::ScalingMatrix;

class SpectralContext {
public:
    SpectralContext(i64 level, WeightClass l, MultiplierSystem::Hook hook = {});

    // Shared context per (level, weight class) with the plain theta multiplier.
    static std::shared_ptr<const SpectralContext> get(i64 level, WeightClass l);

    i64 level() const { return level_; }
    i64 N() const { return level_ / 4; }
    WeightClass weight_class() const { return l_; }
    double l() const { return weight_value(l_); }
    const MultiplierSystem& nu() const { return nu_; }
    const std::vector<Cusp>& all_cusps() const { return cusps_; }

    // Eisenstein indices 1..m_N run over singular cusps; 1 is infinity, m_N is 0.
    int m_N() const { return static_cast<int>(singular_.size()); }
    const ScalingMatrix& scaling(int i) const;

private:
    i64 level_;
    WeightClass l_;
    MultiplierSystem nu_;
    std::vector<Cusp> cusps_;
    std::vector<ScalingMatrix> singular_;
};

struct EvalResult {
    cplx value;
    double tail_estimate;
};

class EisensteinSeries {
public:
    EisensteinSeries(std::shared_ptr<const SpectralContext> ctx, int i, double c_max = 200);

    // Truncated sum; Re w >= 1.5 and Im z > 0.
    EvalResult eval(cplx z, cplx w) const;
    cplx operator()(cplx z, cplx w) const { return eval(z, w).value; }

    // (E_i | sigma_j)(z).
    cplx at_cusp(int j, cplx z, cplx w) const;

    int index() const { return i_; }
    double c_max() const { return c_max_; }
    std::size_t class_count() const { return terms_.size() + (has_identity_ ? 1 : 0); }
    const SpectralContext& context() const { return *ctx_; }
    std::shared_ptr<const SpectralContext> context_ptr() const { return ctx_; }

private:
    struct Term {
        double C;      // lower-left entry of sigma^{-1} gamma, > 0
        double shift;  // D / C
        cplx coef;     // nu(gamma)^{-1} r(sigma^{-1}, gamma)^{-1}
    };

    std::shared_ptr<const SpectralContext> ctx_;
    int i_;
    double c_max_;
    bool has_identity_ = false;
    cplx identity_coef_ = 0.0;
    std::vector<Term> terms_;
};

// W_{sgn(n) l/2, w - 1/2}(4 pi |n| y).
cplx whittaker_factor(double l, cplx w, int n, double y);

struct FourierExpansion {
    i64 level = 4;
    WeightClass weight = WeightClass::Half;
    int i = 1, j = 1;
    cplx w = 2.5;
    cplx A = 0.0, B = 0.0;
    std::map<int, cplx> coeffs;
    std::vector<double> heights;
    double c_max = 0;
    double tail_estimate = 0;
    double cross_height_residual = 0;

    int n_max() const;
    // A y^w + B y^{1-w} + sum a_n W(4 pi |n| y) e(n x).
    cplx operator()(cplx z) const;
    // The same without the constant pair.
    cplx nonconstant(cplx z) const;
};

nlohmann::json to_json(const FourierExpansion& e);
FourierExpansion expansion_from_json(const nlohmann::json& j);

struct ExtractionOptions {
    int n_max = 8;
    std::vector<double> heights{0.7, 1.1};
    int x_samples = 0;  // 0 selects max(64, 8 n_max)
    // Coefficient a_n is read at the largest h0 / 2^k with 2 pi |n| y <= ladder_tau.
    double ladder_tau = 3.0;
    int threads = 1;
};

// Extraction from any 1-periodic function F on the upper half-plane.
FourierExpansion extract_expansion(const std::function<cplx(cplx)>& F, double l, cplx w,
                                   const ExtractionOptions& opt);

FourierExpansion fourier_coefficients(const EisensteinSeries& series, int j, cplx w, const ExtractionOptions& opt);

cplx scattering_entry(const SpectralContext& ctx, int i, int j, cplx w, double c_max = 200,
                      const ExtractionOptions& opt = {});

using CMatrix = std::vector<std::vector<cplx>>;

CMatrix scattering_matrix(const SpectralContext& ctx, cplx w, double c_max = 200, const ExtractionOptions& opt = {});

struct ScatteringCheck {
    CMatrix phi_w;          // extraction at the first height set
    CMatrix phi_one_minus;  // inverse of the extraction at the second height set
    double residual;        // max entry of phi_w * phi_one_minus - I
};

ScatteringCheck scattering_inverse_check(const SpectralContext& ctx, cplx w, const std::vector<double>& heights_a,
                                         const std::vector<double>& heights_b, double c_max = 200,
                                         const ExtractionOptions& opt = {});

// |Delta_l E - w(1-w) E| / |E| with central differences of step h.
double laplacian_residual(const std::function<cplx(cplx)>& F, double l, cplx z, cplx w, double h = 1e-3);

}  // namespace heis::eisenstein
