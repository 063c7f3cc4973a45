#pragma once

#include <functional>
#include <vector>

#include "heis/types.hpp"

namespace heis::quad {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

// n-point Gauss-Legendre rule on [-1, 1].
const Rule& gauss_legendre(int n);

// Composite Gauss-Legendre nodes on [a, b] with the given number of panels.
Rule composite_gauss(double a, double b, int panels, int order = 16);

struct Result {
    cplx value;
    double error_estimate;
    int evaluations;
};

// Integral over (0, inf) of a function with at worst an integrable power
// singularity at 0 and exponential decay at infinity (exp-sinh rule).
Result exp_sinh(const std::function<cplx(double)>& f, double rel_tol = 1e-13, int max_levels = 10);

// Adaptive Gauss-Kronrod (7-15) on a finite interval.
Result gauss_kronrod(const std::function<cplx(double)>& f, double a, double b, double rel_tol = 1e-12,
                     int max_depth = 40);

// Pairwise summation in index order; deterministic for a given input order.
cplx pairwise_sum(const std::vector<cplx>& v);

}  // namespace heis::quad
