#pragma once

#include <map>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <vector>

#include "heis/eisenstein.hpp"
#include "heis/report.hpp"
#include "heis/twist_lfunc.hpp"

namespace heis::converse {

using eisenstein::CMatrix;
using eisenstein::FourierExpansion;
using twist_lfunc::Evaluator;

struct Growth {
    double C = 1;
    double alpha = 0;
    double beta = 0;
};

struct Family {
    int j = 1;
    cplx a = 0.0, b = 0.0, a_dual = 0.0, b_dual = 0.0;
    // Either the double array a_{n,m} or the values a_n(w) at the working w.
    std::map<std::pair<int, int>, cplx> coeffs_nm;
    std::map<int, cplx> coeffs_at_w;
    std::map<std::pair<int, int>, cplx> dual_coeffs_nm;
    std::map<int, cplx> dual_coeffs_at_w;

    bool has_dual() const;
};

struct NiceFamilyDataset {
    i64 level = 4;
    WeightClass weight = WeightClass::Half;
    cplx w = 2.5;
    std::vector<Family> families;
    Growth growth;

    i64 N() const { return level / 4; }
    int m_N() const { return static_cast<int>(families.size()); }
    const Family& family(int j) const;
};

nlohmann::json to_json(const NiceFamilyDataset& d);
// Throws SchemaError naming the offending field.
NiceFamilyDataset dataset_from_json(const nlohmann::json& j);

// a_n(w) = sum_m a_{n,m} m^{-w} when the double array is present.
std::map<int, cplx> coefficients_at(const Family& f, cplx w, bool dual);

// f_j (or its dual f_check_j) as an expansion at the dataset's w.
FourierExpansion expansion(const NiceFamilyDataset& d, int j, bool dual = false);

// a_j y^w + b_j y^{1-w} + sum a_n^j W(4 pi |n| y) e(nx); Im z >= 0.3 and w equal
// to the dataset's w unless the double array is present.
cplx build_f(const NiceFamilyDataset& d, int j, cplx z, cplx w);
cplx build_f_dual(const NiceFamilyDataset& d, int j, cplx z, cplx w);

// Families read off E_1..E_{m_N}: coefficients at infinity, duals from cusp 0
// times e^{pi i l/2}.
NiceFamilyDataset dataset_from_eisenstein(i64 level, WeightClass l, cplx w, double c_max = 200,
                                          const eisenstein::ExtractionOptions& opt = {});

// Roles of (a, a_check) and of the coefficient arrays exchanged.
NiceFamilyDataset dual_dataset(const NiceFamilyDataset& d);

// Riemann-split inputs for the twist of family j by chi.
twist_lfunc::SplitSource split_source(const NiceFamilyDataset& d, int j, const arith::DirichletCharacter& chi);

// H tau0(chi_check)(a_check X^{-w} + b_check X^{w-1}) - tau0(chi)(a y^w + b y^{1-w}),
// X = 4ND^2 (1 + u^2) y.
cplx residue_term(const NiceFamilyDataset& d, int j, cplx w, double u, double y, const arith::DirichletCharacter& chi);

struct MellinInversion {
    cplx value;
    double truncation_estimate;
};

// (1/2 pi) integral over |t| <= t_max of Lambda(sigma0 + it) y^{-sigma0 - it} dt.
MellinInversion mellin_invert(const std::function<cplx(cplx)>& lambda, double y, double sigma0, double t_max = 40,
                              int nodes = 2000);

struct Tolerances {
    double condition_c = 1e-5;     // relative, functional equation
    double invariance = 1e-4;      // relative, generator invariance
    double condition_b = 1e6;      // bound on |Lambda| along the scan segment
    double condition_d = 1e-5;
    double growth_slack = 0.0;     // allowed excess of the fitted exponent over alpha
};

struct ValidationOptions {
    std::vector<i64> twist_moduli{1};
    std::vector<double> u_samples{0.1, -0.15};
    std::vector<cplx> s_samples{{0.3, 0.0}, {1.0, 2.0}, {3.0, -1.0}, {-2.0, 0.5}, {0.5, 7.0}};
    double kappa_left = 1.0;
    double kappa_right = 1.2;
    bool check_invariance = true;
    int generator_height = 5;
    std::vector<cplx> invariance_points;  // empty selects the default ten
    // Condition (D): coefficients at 1 - w and Phi(1 - w).
    const NiceFamilyDataset* other_w = nullptr;
    std::optional<CMatrix> phi_one_minus_w;
    twist_lfunc::MellinOptions mellin;
    int threads = 1;
};

report::VerificationReport validate_nice_family(const NiceFamilyDataset& d, const Tolerances& tol = {},
                                                const ValidationOptions& opt = {});

// f_j at any point reachable through the expansions at infinity and 0 and the
// twisted functional equations for odd moduli up to max_modulus.
class Reconstruction {
public:
    Reconstruction(const NiceFamilyDataset& d, int j, int max_modulus = 7, double min_height = 0.3);

    cplx operator()(cplx z) const;
    // Height of the expansion point used for z.
    double height(cplx z) const;

private:
    struct Route {
        i64 D;
        i64 m;
        double height;
    };
    Route best(cplx z) const;

    i64 level_;
    double l_;
    int max_modulus_;
    double min_height_;
    FourierExpansion f_, f_dual_;
};

struct InvarianceRow {
    modgroup::ModularMatrix gamma;
    double residual;
    double truncation = 0;  // growth-tag bound on the omitted terms, same scale as residual
};

// max over sample points of |f|g - nu(g) f| / |f| for g in generators(level, height),
// at z = W_{4N} zeta with zeta in `points`.
std::vector<InvarianceRow> invariance_residuals(const NiceFamilyDataset& d, int j, const std::vector<cplx>& points,
                                                int height = 5);

std::vector<cplx> default_invariance_points();

// Direct check on the expansion itself, relative to max |f| over the points, for generators with lower-left entry
// equal to the level: z = -d/c + delta + i (1 + eps)/c keeps z and g z at
// height about 1/c, where the truncated expansion is still accurate.
std::vector<InvarianceRow> direct_invariance_residuals(const NiceFamilyDataset& d, int j, int height = 5,
                                                       int points = 10);

struct FitResult {
    CMatrix A;
    double fit_residual;
    double held_out_residual;
};

// Least squares for f_j(z_k) = sum_i A_ji E_i(z_k); the last third of the
// points is held out.
FitResult fit_A(const std::vector<Evaluator>& f, const std::vector<Evaluator>& E, const std::vector<cplx>& points);

// || Phi(1-w) A(w) Phi(w) - A(1-w) ||_max.
double a_phi_residual(const CMatrix& A_w, const CMatrix& A_one_minus_w, const CMatrix& phi_w,
                      const CMatrix& phi_one_minus_w);

}  // namespace heis::converse
