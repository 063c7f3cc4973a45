#pragma once

#include <nlohmann/json_fwd.hpp>
#include <random>
#include <string>
#include <vector>

#include "heis/types.hpp"

namespace heis::modgroup {

// Integer matrix of determinant one.
struct ModularMatrix {
    i64 a = 1, b = 0, c = 0, d = 1;

    static ModularMatrix checked(i64 a, i64 b, i64 c, i64 d);
    static ModularMatrix T() { return {1, 1, 0, 1}; }
    static ModularMatrix S() { return {0, -1, 1, 0}; }

    i64 det() const { return a * d - b * c; }
    ModularMatrix operator*(const ModularMatrix& o) const;
    ModularMatrix operator-() const { return {-a, -b, -c, -d}; }
    ModularMatrix inverse() const { return {d, -b, -c, a}; }
    bool operator==(const ModularMatrix&) const = default;
    bool in_gamma0(i64 level) const { return c % level == 0; }
    cplx apply(cplx z) const;
    std::string str() const;
};

// Real matrix of determinant one (scaling matrices, Fricke involutions).
struct RealMatrix {
    double a = 1, b = 0, c = 0, d = 1;

    RealMatrix() = default;
    RealMatrix(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}
    RealMatrix(const ModularMatrix& m)
        : a(static_cast<double>(m.a)), b(static_cast<double>(m.b)), c(static_cast<double>(m.c)),
          d(static_cast<double>(m.d))
    {
    }

    RealMatrix operator*(const RealMatrix& o) const;
    RealMatrix inverse() const { return {d, -b, -c, a}; }
    cplx apply(cplx z) const;
};

// W_q = (0, -1/sqrt q; sqrt q, 0).
RealMatrix fricke(double q);

struct Cusp {
    i64 p = 1, q = 0;  // q = 0 encodes infinity
    int index = 1;     // 1-based position in the fixed ordering
    bool singular = false;
    i64 width = 1;

    bool is_infinity() const { return q == 0; }
    std::string label() const;
};

struct ScalingMatrix {
    Cusp cusp;
    ModularMatrix base;  // integral matrix sending infinity to the cusp
    RealMatrix matrix;   // base * diag(sqrt(width), 1/sqrt(width))
    ModularMatrix stabilizer;  // base T^width base^{-1}
};

i64 cusp_count(i64 level);

// Cusps of Gamma_0(level): infinity first, 0 last. Singularity is evaluated
// for the theta-type multiplier of the given weight class.
const std::vector<Cusp>& cusps(i64 level, WeightClass l = WeightClass::Half);

ScalingMatrix scaling_matrix(const Cusp& cusp, i64 level);

// Representatives of the double cosets Gamma_a \ Gamma_0(level) / Gamma_inf,
// parametrised by the bottom row (C, D) of base^{-1} gamma with C > 0 and
// D mod C (or C = 0), subject to sqrt(width) * C <= c_max.
std::vector<ModularMatrix> coset_reps(i64 level, const Cusp& cusp, double c_max);

// Bottom row of base^{-1} gamma normalised to C > 0, or C = 0 and D > 0.
std::pair<i64, i64> coset_key(const ScalingMatrix& s, const ModularMatrix& gamma);

std::vector<ModularMatrix> generators(i64 level, i64 height);

nlohmann::json to_json(const std::vector<Cusp>& cs);

// Seeded random element of SL2(Z) with entries bounded by `bound`; with
// level > 0 the lower-left entry is a nonzero multiple of level (Gamma_0(level)).
ModularMatrix random_matrix(std::mt19937_64& rng, i64 bound, i64 level = 0);

}  // namespace heis::modgroup
