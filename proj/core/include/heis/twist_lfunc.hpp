#pragma once

#include <array>
#include <functional>
#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "heis/arith.hpp"
#include "heis/eisenstein.hpp"

namespace heis::twist_lfunc {

using arith::DirichletCharacter;
using eisenstein::FourierExpansion;
using Evaluator = std::function<cplx(cplx)>;

struct TwistedExpansion {
    FourierExpansion base;
    DirichletCharacter character;

    cplx tau0() const;
    cplx coefficient(int n) const;  // tau_n(chi) a_n
    cplx A() const { return tau0() * base.A; }
    cplx B() const { return tau0() * base.B; }
    cplx operator()(cplx z) const;
    cplx nonconstant(cplx z) const;
};

// Coefficient form; the modulus must be coprime to the level.
TwistedExpansion twist(const FourierExpansion& e, const DirichletCharacter& chi);

// Evaluator form: sum over units m of chi(m) f(z + m/D).
Evaluator twist(Evaluator f, const DirichletCharacter& chi);

// e^{pi i l/2} (f | W_level).
Evaluator check_function(Evaluator f, i64 level, double l);

// conj(chi(-4N)) (4N/D) eps_D.
cplx fricke_prefactor(const DirichletCharacter& chi, i64 N, WeightClass l);

// fricke_prefactor times ((1 + iu)/(1 - iu))^{l/2}.
cplx h_factor(const DirichletCharacter& chi, i64 N, WeightClass l, double u);

struct FrickeSides {
    cplx lhs;  // (f_chi | W_{4ND^2})(z)
    cplx rhs;  // e^{-pi i l/2} fricke_prefactor f_check_{chi_check}(z)
};

// Both sides of the twisted Fricke identity for f of level 4N.
FrickeSides fricke_twist_sides(const Evaluator& f, const DirichletCharacter& chi, i64 N, WeightClass l, cplx z);

// sum over sign*n > 0 of tau_n(chi) a_n |n|^{-s}, over the stored coefficients.
cplx l_series(const TwistedExpansion& e, int sign, cplx s);

// Row (c+, c-) with Lambda = c+ L+ + c- L-.
std::array<cplx, 2> c_tensor(cplx s, cplx w, double u, double l);

enum class Route { CTensor, MellinQuadrature, RiemannSplit };

const char* route_name(Route r);

struct CompletedLValue {
    cplx s;
    cplx w;
    double u;
    DirichletCharacter character;
    cplx value;
    Route route;
    double error_estimate = 0;
};

nlohmann::json to_json(const CompletedLValue& v);

// Route 1.
CompletedLValue lambda_ctensor(const TwistedExpansion& e, cplx s, double u);

struct MellinOptions {
    double log_lo = -24;       // lower cut of ln y
    double decay_height = 8;   // upper cut in units of Im
    int panels_per_unit = 6;   // Gauss panels per unit of ln y
    int order = 16;
    int threads = 1;
};

// Route 2: log-grid quadrature of the integral of F((i + u) y) y^s dy/y.
// F is the non-constant part; needs Re s large enough for convergence at 0.
CompletedLValue lambda_mellin(const TwistedExpansion& e, cplx s, double u, const MellinOptions& opt = {});

// Inputs of the Riemann split for one twisted function f_chi of level 4N.
struct SplitSource {
    Evaluator f;          // f_chi, full value
    Evaluator f_dual;     // f_check_{chi_check}, full value
    cplx a = 0.0, b = 0.0;            // constant pair of f_chi
    cplx a_dual = 0.0, b_dual = 0.0;  // constant pair of f_dual
    i64 N = 1;
    i64 D = 1;
    WeightClass weight = WeightClass::Half;
    cplx w = 2.5;
    cplx fricke = 1.0;  // fricke_prefactor(chi, N, l)
    DirichletCharacter character = DirichletCharacter::principal(1);
};

// Roles of f and f_dual exchanged.
SplitSource dual(const SplitSource& src);

// Lambda(s) for all s off the four poles, from
// alpha^s Lambda = I1 + I2 + polar parts, split at y = kappa / sqrt(1 + u^2).
// The two half-line integrals are tabulated once; value(s) reweights them.
class SplitTable {
public:
    SplitTable(const SplitSource& src, double u, double kappa = 1.0, const MellinOptions& opt = {});

    cplx value(cplx s) const;
    CompletedLValue evaluate(cplx s) const;
    double u() const { return u_; }
    const SplitSource& source() const { return src_; }

private:
    struct Node {
        double log_y;
        cplx weighted;  // quadrature weight times integrand (without y^s)
    };
    SplitSource src_;
    double u_, kappa_;
    double alpha_, a_, b_;
    cplx H_;
    std::vector<Node> upper_, lower_;
};

// Riemann split of a finite twisted expansion at level 4N. The dual side is the
// exact Fricke image of the non-constant part, so no automorphy is assumed; its
// decay is only polynomial, hence the large default upper cut.
SplitSource finite_split_source(const TwistedExpansion& e);
CompletedLValue lambda_split(const TwistedExpansion& e, cplx s, double u, double kappa = 1.0,
                             MellinOptions opt = {.decay_height = 1e5});

}  // namespace heis::twist_lfunc
