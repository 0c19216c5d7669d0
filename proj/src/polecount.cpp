#include "polecount.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tds {

double rhp_radius_bound(const CharFun& cf, const ParamPoint& tau) {
    cf.require_admissible(tau);
    std::vector<Interval> box(tau.size());
    for (std::size_t k = 0; k < tau.size(); k++) box[k] = Interval(tau[k]);
    std::vector<double> A = cf.coeff_abs_bounds(box);
    double maxA = 0.0;
    for (double a : A) maxA = std::max(maxA, a);
    if (!std::isfinite(maxA))
        throw Error(ErrorCode::Invalid, "non-finite coefficient bound");
    return 1.0 + maxA;
}

namespace {

// Half-disk boundary, positively oriented around {Re s > 0, |s| < Omega}:
// imaginary axis from +jW down to -jW (t in [0, 1/2]), then the arc through
// +W back up (t in [1/2, 1]).
Complex contour_point(double t, double W) {
    if (t <= 0.5) {
        double y = W * (1.0 - 4.0 * t); // +W .. -W
        return Complex(0.0, y);
    }
    double phi = -std::numbers::pi / 2.0 + (t - 0.5) * 2.0 * std::numbers::pi; // -pi/2..pi/2
    return W * Complex(std::cos(phi), std::sin(phi));
}

} // namespace

PoleCountReport count_unstable(const CharFun& cf, const ParamPoint& tau) {
    const double W = rhp_radius_bound(cf, tau);
    const BoundCharFun f = cf.bind_point(tau);
    const double zero_tol = 1e-9 * std::pow(1.0 + W, double(cf.m()));

    struct Sample {
        double t;
        Complex v;
    };
    std::vector<Sample> samples;
    const int n0 = 1024;
    samples.reserve(2048);
    for (int i = 0; i <= n0; i++) {
        double t = double(i) / double(n0);
        samples.push_back({t, f.eval(contour_point(t, W))});
    }

    double min_abs = std::numeric_limits<double>::infinity();
    for (const Sample& s : samples) min_abs = std::min(min_abs, std::abs(s.v));
    if (min_abs <= zero_tol)
        throw Error(ErrorCode::Contour,
                    "ZERO-ON-CONTOUR: |f| = " + std::to_string(min_abs) +
                        " on the contour (parameter point may sit on a stability crossing)");

    // refine until each step turns the phase by less than pi/2
    const int max_passes = 48;
    for (int pass = 0; pass < max_passes; pass++) {
        bool refined = false;
        std::vector<Sample> next;
        next.reserve(samples.size() * 2);
        for (std::size_t i = 0; i + 1 < samples.size(); i++) {
            next.push_back(samples[i]);
            double da = std::arg(samples[i + 1].v / samples[i].v);
            if (std::fabs(da) >= std::numbers::pi / 2.0) {
                double tm = 0.5 * (samples[i].t + samples[i + 1].t);
                Complex vm = f.eval(contour_point(tm, W));
                double am = std::abs(vm);
                min_abs = std::min(min_abs, am);
                if (am <= zero_tol)
                    throw Error(ErrorCode::Contour,
                                "ZERO-ON-CONTOUR: |f| = " + std::to_string(am) +
                                    " at a refined contour point");
                next.push_back({tm, vm});
                refined = true;
            }
        }
        next.push_back(samples.back());
        samples.swap(next);
        if (!refined) break;
        if (pass == max_passes - 1)
            throw Error(ErrorCode::Contour,
                        "NON-INTEGER-WINDING: phase steps above pi/2 persist after maximal "
                        "refinement");
    }

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); i++)
        total += std::arg(samples[i + 1].v / samples[i].v);

    double turns = total / (2.0 * std::numbers::pi);
    int nu = int(std::lround(turns));
    double residual = std::fabs(turns - double(nu));
    if (residual >= 0.1)
        throw Error(ErrorCode::Contour,
                    "NON-INTEGER-WINDING: residual " + std::to_string(residual));
    if (nu < 0)
        throw Error(ErrorCode::Contour, "negative winding number " + std::to_string(nu) +
                                            " (function is not holomorphic inside the contour?)");

    PoleCountReport rep;
    rep.nu = nu;
    rep.omega_radius = W;
    rep.samples = samples.size();
    rep.winding_residual = residual;
    rep.min_abs_f = min_abs;
    return rep;
}

} // namespace tds
