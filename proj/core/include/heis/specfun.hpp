#pragma once

#include "heis/types.hpp"

namespace heis::specfun {

struct PrecisionBudget {
    double rel_tol = 1e-10;
    int max_terms = 5000;
    int max_levels = 10;
};

cplx gamma(cplx z);
cplx log_gamma(cplx z);
// 1/Gamma(z), entire; zero at the poles of Gamma.
cplx rgamma(cplx z);

// Power series for 2F1; |z| <= 0.8.
cplx hyp2f1(cplx a, cplx b, cplx c, cplx z, PrecisionBudget budget = {});

// W_{a,b}(z) for z > 0 by quadrature of the e^{-u} integral representation.
cplx whittaker_w(cplx a, cplx b, double z, PrecisionBudget budget = {});

// Independent route: large-z asymptotic series, then backward integration of
// Whittaker's equation in the variable log z.
cplx whittaker_w_ode(cplx a, cplx b, double z);

// exp((l/2)(ln|base| + i arg base)), arg in (-pi, pi].
cplx half_power(cplx base, double l);

}  // namespace heis::specfun
