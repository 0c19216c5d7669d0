#ifndef TDS_POLECOUNT_HPP
#define TDS_POLECOUNT_HPP

#include "charfun.hpp"

namespace tds {

struct PoleCountReport {
    int nu = 0;                  // zeros with non-negative real part
    double omega_radius = 0.0;   // truncation radius of the half-disk contour
    std::size_t samples = 0;
    double winding_residual = 0.0;
    double min_abs_f = 0.0;      // smallest |f| seen on the contour
};

// Radius bound: every zero of f(., tau) with Re s >= 0 satisfies |s| < Omega.
// Cauchy-type bound 1 + max_i sum_k |alpha_{i,k}(tau)| using |e^{-s beta}| <= 1
// on the closed right half-plane.
double rhp_radius_bound(const CharFun& cf, const ParamPoint& tau);

// Winding number of f along the boundary of {Re s >= 0} n {|s| <= Omega},
// with adaptive phase tracking (per-step phase change kept below pi/2).
// Throws ErrorCode::Contour for a zero on the contour or a non-integer
// winding after maximal refinement.
PoleCountReport count_unstable(const CharFun& cf, const ParamPoint& tau);

} // namespace tds

#endif
