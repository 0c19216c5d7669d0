#ifndef TDS_LINE_HPP
#define TDS_LINE_HPP

#include <functional>
#include <optional>

#include "sweep.hpp"

namespace tds {

// Smooth curve tau(theta) with tangent tau'(theta); generalizes the straight
// ray for the general step-bound path.
struct CurveDescriptor {
    std::function<ParamPoint(double)> position;
    std::function<std::vector<double>(double)> tangent;
};

struct RayTask {
    ParamPoint tau0;
    std::vector<double> dir;               // unit vector; ignored when curve set
    std::optional<CurveDescriptor> curve;  // general path only
    double eta = 0.5;
    double delta = 1e-4;
    double theta_cap = 0.0;  // <= 0: auto 100 * (1 + max |tau0_i|)
    double theta0 = 0.0;
    bool force_general = false; // skip the retarded fast path (testing hook)
};

struct LineStep {
    int k = 0;
    double theta = 0.0;     // theta_k before the increment
    double delta = 0.0;     // applied increment eta * step bound
    double omega_min = 0.0; // minimizing frequency of the bound sweep
    double min_abs_f = 0.0; // min_w |f(jw, tau(theta_k))|
};

enum class RayVerdict { Converged, Diverged, Failed };

struct LineTrace {
    RayVerdict verdict = RayVerdict::Failed;
    std::string reason;          // Diverged: "theta-cap" | "domain-boundary"
    double theta_final = 0.0;
    double final_omega = 0.0;    // candidate crossing frequency
    bool used_retarded_path = false;
    std::vector<LineStep> steps;
};

struct StepBoundDetail {
    double min_abs_f = 0.0;
    double omega_min = 0.0;
    bool attained = true;
};

// Corollary-style bound for a retarded form pinned to a ray:
//   min_w |f(jw, theta0)| / sum_i w |a_i| |P_i(jw)|.
// Returns +inf when the direction does not touch any delay (all a_i = 0).
double step_bound_retarded(const RayRetarded& rr, double theta0,
                           StepBoundDetail* detail = nullptr);

// General fixed-point bound: bisection on Delta with the inner max of
// |df/dtheta| over [theta0, theta0+Delta] estimated from 65 Chebyshev samples
// inflated by 10%, capped by the per-delay-group magnitude envelope.
// delta_cap <= 0 means uncapped.
double step_bound_general(const CharFun& cf, const ParamPoint& tau0, std::span<const double> dir,
                          double theta0, double delta_cap = 0.0,
                          StepBoundDetail* detail = nullptr);

double step_bound_general_curve(const CharFun& cf, const CurveDescriptor& curve, double theta0,
                                double delta_cap = 0.0, StepBoundDetail* detail = nullptr);

// Iterates theta_{k+1} = theta_k + eta * bound(theta_k) until eta * bound
// drops below delta (Converged) or theta reaches the cap (Diverged). Errors
// at theta0 or mid-run yield Failed with the partial trace preserved.
LineTrace run_ray(const CharFun& cf, const RayTask& task);

// min_w |f(jw, tau)| with certificate, used for precondition checks.
SweepResult min_abs_on_axis(const CharFun& cf, const ParamPoint& tau);

// Threshold below which min_w |f| is treated as an imaginary-axis zero.
double axis_zero_tolerance(const CharFun& cf, const ParamPoint& tau);

} // namespace tds

#endif
