#ifndef TDS_REGION_HPP
#define TDS_REGION_HPP

#include <array>
#include <cstdint>

#include "line.hpp"
#include "polecount.hpp"

namespace tds {

// Holder conjugate pair 1/p + 1/q = 1 with the infinity conventions.
// p shapes the gradient norm, q the certified ball.
struct HolderPair {
    double p = 2.0;
    double q = 2.0;

    // build from p and/or q; fills in the conjugate, validates consistency
    static HolderPair make(double p, double q);
    static HolderPair from_p(double p);
    static HolderPair from_q(double q);
};

double norm_q(std::span<const double> v, double q);

struct Ball {
    ParamPoint center;
    double radius = 0.0;
    double q = 2.0;

    bool contains(std::span<const double> point, double shrink = 0.0) const;
};

// Corollary-style closed form for retarded systems:
//   min_w |f(jw, tau0)| / ( sum_i (w |P_i(jw)|)^p )^{1/p},
// summing over parameter-bearing delay groups only.
double region_bound_retarded(const CharFun& cf, const RetardedForm& rf, const ParamPoint& tau0,
                             const HolderPair& hp, StepBoundDetail* detail = nullptr);

// General fixed-point bound: bisection on eps with the inner max of
// ||grad f||_p over the q-ball estimated from center + axis extremes +
// corner samples inflated by 10%, capped by the per-delay-group envelope.
double region_bound_general(const CharFun& cf, const ParamPoint& tau0, const HolderPair& hp,
                            double eps_cap = 0.0, StepBoundDetail* detail = nullptr);

// retarded closed form when the structure test passes, general otherwise
double region_bound_auto(const CharFun& cf, const ParamPoint& tau0, const HolderPair& hp,
                         StepBoundDetail* detail = nullptr);

struct RegionConfig {
    HolderPair hp;
    double eta = 0.5;
    double grid_h = 0.0;           // <= 0: auto (initial bound / 8)
    double extent = 0.0;           // box half-width around tau0; <= 0: auto
    std::size_t max_generations = 64;
    std::size_t max_balls = 4000;
    std::size_t max_cells = 4u << 20;
    std::size_t max_terminal_samples = 512;
};

struct TerminalSample {
    ParamPoint point;
    double eps_bound = 0.0; // certified bound at the sample (0 on failure)
    double min_abs_f = 0.0; // min_w |f(jw, point)|
};

struct RegionState {
    std::vector<Ball> balls;
    int nu = 0;
    std::size_t generations = 0;
    std::size_t covered_cells = 0;
    double grid_h = 0.0;
    std::vector<std::string> capped_faces;          // e.g. "tau+" when growth hit the box
    std::vector<std::array<double, 2>> polygon;     // traced union boundary (n = 2 only)
    std::vector<TerminalSample> terminal_frontier;  // last-generation samples that stalled
};

// Frontier-growth approximation of the stability equivalence region:
// S_{k+1} = S_k united with certified balls around sampled boundary points,
// tracked on an occupancy grid. Supports n <= 3.
RegionState grow_region(const CharFun& cf, const ParamPoint& tau0, const RegionConfig& cfg);

} // namespace tds

#endif
