#pragma once

#include <functional>

#include "heis/modgroup.hpp"

namespace heis::automorphy {

using modgroup::ModularMatrix;
using modgroup::RealMatrix;

// exp(i l arg(cz + d)).
cplx j_factor(const RealMatrix& g, cplx z, double l);

// (f|g)(z) = j(g, z)^{-1} f(g z).
cplx slash(const std::function<cplx(cplx)>& f, const RealMatrix& g, cplx z, double l);

// r(M, N) = j(M, Nz) j(N, z) / j(MN, z); independent of z.
cplx r_direct(const RealMatrix& M, const RealMatrix& N, cplx z, double l);

// Integer w(M, N) of the five-case sign formula, selected by which of
// m1, c, m1' vanish (M = (*,*; m1, m2), N = (a,b; c,d), MN = (*,*; m1', m2')).
int cocycle_exponent(const RealMatrix& M, const RealMatrix& N);

// exp(pi i l w(M, N) / 2).
cplx r_closed(const RealMatrix& M, const RealMatrix& N, double l);

// (c/d) eps_d^{-1}: 1 for d = 1 mod 4 and -i for d = 3 mod 4, times (c/d).
cplx theta_multiplier(const ModularMatrix& g);

struct ThetaValue {
    cplx value;
    double tail_bound;
    int n_max;
};

// sum_{|n| <= n_max} e^{2 pi i n^2 z}.
ThetaValue theta_series_oracle(cplx z, int n_max);

class MultiplierSystem {
public:
    using Hook = std::function<cplx(const ModularMatrix&)>;

    MultiplierSystem(i64 level, WeightClass l, Hook hook = {});

    // nu_theta for l = 1/2 and conj(nu_theta) for l = 3/2, times the hook.
    cplx operator()(const ModularMatrix& g) const;

    i64 level() const { return level_; }
    WeightClass weight_class() const { return l_; }
    double l() const { return weight_value(l_); }

private:
    i64 level_;
    WeightClass l_;
    Hook hook_;
};

}  // namespace heis::automorphy
