#ifndef TDS_SWEEP_HPP
#define TDS_SWEEP_HPP

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "charfun.hpp"

namespace tds {

// Monotone lower bound for a ratio N(w)/D(w) of quasi-polynomial magnitude
// envelopes, valid and non-decreasing for w >= omega_tail:
//   Rlow(w) = (w^m - sum_i num_coeffs[i] w^i) / (sum_j den_coeffs[j] w^j).
// num_coeffs has length m (powers 0..m-1, non-negative entries); den_coeffs
// is by ascending power with degree <= m and non-negative entries. An empty
// denominator means the ratio diverges (no delay sensitivity in the tail).
struct TailBound {
    int m = 1;
    std::vector<double> num_coeffs;
    std::vector<double> den_coeffs;
    double omega_tail = 1.0;

    double eval(double omega) const;
    // limit of Rlow as w -> infinity (may be +inf)
    double limit() const;
    static TailBound from_bounds(int m, std::vector<double> A, std::vector<double> den);
};

struct RatioProblem {
    std::function<double(double)> num; // N(w) >= 0
    std::function<double(double)> den; // D(w) >= 0; 0 => ratio taken as +inf
    TailBound tail;
};

struct SweepConfig {
    int coarse_samples = 2048;       // split between linear and log segments
    int refine_brackets = 8;
    double rel_tol = 1e-9;           // golden-section interval tolerance
    double omega_lo = 1e-9;          // sweep opens just above 0
    double tail_gap_rtol = 1e-6;     // stop extending once gap <= rtol*best
    int max_doublings = 60;
};

struct SweepResult {
    double omega_min = 0.0;
    double value = 0.0;
    bool attained = true;   // false: infimum approached in the tail
    double omega_cut = 0.0;
    double tail_floor = 0.0; // Rlow(omega_cut); -inf if no tail applied
    std::size_t evaluations = 0;
};

// Certified global minimum of N/D over [0, inf): coarse mixed linear/log grid
// on [omega_lo, omega_cut], golden-section refinement around the best
// brackets, and doubling of omega_cut until the tail bound certifies that no
// smaller value hides beyond it. Deterministic: sequential evaluation with
// ties broken toward smaller omega.
SweepResult global_min(const RatioProblem& rp, const SweepConfig& cfg = {});

// Tail bound for min_w |f(jw, tau)| / D(w) style ratios: numerator envelope
// from coefficient bounds over the box, denominator given by the caller as
// ascending-power coefficients.
TailBound quasipoly_tail_bound(const CharFun& cf, std::span<const Interval> box,
                               std::vector<double> den_coeffs);

} // namespace tds

#endif
