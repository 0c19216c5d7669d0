#include "line.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBetaSamples = 65;
constexpr double kMaxInflation = 1.10;
constexpr double kBisectRelTol = 1e-3;

std::vector<Interval> point_box(const ParamPoint& tau) {
    std::vector<Interval> box(tau.size());
    for (std::size_t k = 0; k < tau.size(); k++) box[k] = Interval(tau[k]);
    return box;
}

} // namespace

SweepResult min_abs_on_axis(const CharFun& cf, const ParamPoint& tau) {
    BoundCharFun f = cf.bind_point(tau);
    RatioProblem rp;
    rp.num = [f](double w) { return std::abs(f.eval_axis(w)); };
    rp.den = [](double) { return 1.0; };
    rp.tail = quasipoly_tail_bound(cf, point_box(tau), {});
    return global_min(rp);
}

double axis_zero_tolerance(const CharFun& cf, const ParamPoint& tau) {
    std::vector<double> A = cf.coeff_abs_bounds(point_box(tau));
    double maxA = 0.0;
    for (double a : A) maxA = std::max(maxA, a);
    return 1e-7 * (1.0 + maxA);
}

// ---------------------------------------------------------------------------
// Retarded fast path

double step_bound_retarded(const RayRetarded& rr, double theta0, StepBoundDetail* detail) {
    bool touched = false;
    for (const auto& t : rr.terms)
        if (t.a != 0.0 && t.P.coeff_abs_sum() != 0.0) touched = true;

    std::vector<double> num_env(std::size_t(rr.m), 0.0);
    std::vector<double> den_env;
    for (const auto& t : rr.terms) {
        for (std::size_t j = 0; j < t.P.coeffs.size(); j++) {
            num_env[j] += std::fabs(t.P.coeffs[j]);
            if (t.a != 0.0) {
                if (den_env.size() < j + 2) den_env.resize(j + 2, 0.0);
                den_env[j + 1] += std::fabs(t.a) * std::fabs(t.P.coeffs[j]);
            }
        }
    }

    RatioProblem rp;
    rp.num = [&rr, theta0](double w) { return std::abs(rr.eval(Complex(0.0, w), theta0)); };
    rp.den = [&rr](double w) {
        double d = 0.0;
        for (const auto& t : rr.terms)
            if (t.a != 0.0) d += w * std::fabs(t.a) * std::abs(t.P.eval(Complex(0.0, w)));
        return d;
    };
    rp.tail = TailBound::from_bounds(rr.m, num_env, touched ? den_env : std::vector<double>{});

    SweepResult res = global_min(rp);
    if (detail) {
        detail->omega_min = res.omega_min;
        detail->attained = res.attained;
        detail->min_abs_f = rp.num(res.omega_min);
    }
    return touched ? res.value : kInf;
}

// ---------------------------------------------------------------------------
// General path

namespace {

// Data captured at one beta sample along the ray/curve, organized per delay
// group: X_g(w) = sum_{t in g} (jw)^{p_t} (dalpha_t - jw dbeta_g alpha_t).
struct BetaSample {
    struct Group {
        double beta = 0.0;  // delay value
        double dbeta = 0.0; // directional delay derivative
        struct Term {
            int power;
            double alpha;
            double dalpha;
        };
        std::vector<Term> terms;
    };
    std::vector<Group> groups;
};

struct GeneralBoundData {
    std::vector<BetaSample> samples;

    // exact |df/dtheta| at one sample
    double modulus(double w, const BetaSample& bs) const {
        Complex s(0.0, w);
        Complex total = 0.0;
        for (const auto& g : bs.groups) {
            Complex X = 0.0;
            for (const auto& t : g.terms)
                X += cpow_int(s, t.power) * Complex(t.dalpha, 0.0) -
                     s * cpow_int(s, t.power) * (g.dbeta * t.alpha);
            total += std::exp(-s * g.beta) * X;
        }
        return std::abs(total);
    }

    // triangle-inequality envelope over delay groups at one sample
    double envelope(double w, const BetaSample& bs) const {
        Complex s(0.0, w);
        double total = 0.0;
        for (const auto& g : bs.groups) {
            Complex X = 0.0;
            for (const auto& t : g.terms)
                X += cpow_int(s, t.power) * Complex(t.dalpha, 0.0) -
                     s * cpow_int(s, t.power) * (g.dbeta * t.alpha);
            total += std::abs(X);
        }
        return total;
    }

    // inner-max estimate: min(1.1 * sampled max, group envelope max)
    double den(double w) const {
        double m = 0.0, env = 0.0;
        for (const auto& bs : samples) {
            m = std::max(m, modulus(w, bs));
            env = std::max(env, envelope(w, bs));
        }
        return std::min(kMaxInflation * m, env);
    }

    // ascending-power polynomial upper bound on den(w), valid for all w
    std::vector<double> envelope_poly(int m_top) const {
        std::vector<double> c(std::size_t(m_top) + 1, 0.0);
        for (const auto& bs : samples) {
            std::vector<double> ci(std::size_t(m_top) + 1, 0.0);
            for (const auto& g : bs.groups)
                for (const auto& t : g.terms) {
                    ci[std::size_t(t.power)] += std::fabs(t.dalpha);
                    ci[std::size_t(t.power) + 1] += std::fabs(g.dbeta * t.alpha);
                }
            for (std::size_t j = 0; j < c.size(); j++) c[j] = std::max(c[j], ci[j]);
        }
        for (double& v : c) v *= kMaxInflation;
        return c;
    }

    bool identically_zero() const {
        for (const auto& bs : samples)
            for (const auto& g : bs.groups)
                for (const auto& t : g.terms)
                    if (t.dalpha != 0.0 || g.dbeta * t.alpha != 0.0) return false;
        return true;
    }
};

using PointProvider = std::function<void(double theta, ParamPoint& pos, std::vector<double>& tan)>;

GeneralBoundData collect_samples(const CharFun& cf, const PointProvider& at, double theta0,
                                 double delta) {
    GeneralBoundData data;
    const std::size_t n = cf.num_params();
    const auto& groups = cf.delay_groups();
    ParamPoint pos(n);
    std::vector<double> tan(n);

    const int count = delta > 0.0 ? kBetaSamples : 1;
    for (int i = 0; i < count; i++) {
        // Chebyshev points over [theta0, theta0 + delta], endpoints included
        double u = count == 1
                       ? 0.0
                       : 0.5 * (1.0 - std::cos(std::numbers::pi * double(i) / double(count - 1)));
        double beta = theta0 + delta * u;
        at(beta, pos, tan);
        cf.require_admissible(pos);
        std::span<const double> pv(pos);

        BetaSample bs;
        bs.groups.reserve(groups.size());
        for (const auto& g : groups) {
            BetaSample::Group bg;
            std::size_t first = g.front();
            bg.beta = cf.delay_fn(first).eval_real(pv);
            if (bg.beta < -1e-12)
                throw Error(ErrorCode::Precondition, "delay evaluates negative along the path");
            bg.beta = std::max(bg.beta, 0.0);
            double db = 0.0;
            for (std::size_t k = 0; k < n; k++) db += cf.delay_grad(first, k).eval_real(pv) * tan[k];
            bg.dbeta = db;
            for (std::size_t ti : g) {
                double alpha = cf.coeff_fn(ti).eval_real(pv);
                double dalpha = 0.0;
                for (std::size_t k = 0; k < n; k++)
                    dalpha += cf.coeff_grad(ti, k).eval_real(pv) * tan[k];
                bg.terms.push_back({cf.terms()[ti].power, alpha, dalpha});
            }
            bs.groups.push_back(std::move(bg));
        }
        data.samples.push_back(std::move(bs));
    }
    return data;
}

double general_bound_impl(const CharFun& cf, const PointProvider& at, double theta0,
                          double delta_cap, StepBoundDetail* detail) {
    const std::size_t n = cf.num_params();
    ParamPoint p0(n);
    std::vector<double> t0(n);
    at(theta0, p0, t0);
    cf.require_admissible(p0);

    BoundCharFun f0 = cf.bind_point(p0);
    std::vector<double> A = cf.coeff_abs_bounds(point_box(p0));

    SweepResult last;
    auto G = [&](double delta) -> double {
        GeneralBoundData data = collect_samples(cf, at, theta0, delta);
        if (data.identically_zero()) return kInf;
        RatioProblem rp;
        rp.num = [&f0](double w) { return std::abs(f0.eval_axis(w)); };
        rp.den = [&data](double w) { return data.den(w); };
        rp.tail = TailBound::from_bounds(cf.m(), A, data.envelope_poly(cf.m()));
        last = global_min(rp);
        return last.value;
    };

    auto fill_detail = [&] {
        if (!detail) return;
        detail->omega_min = last.omega_min;
        detail->attained = last.attained;
        detail->min_abs_f = std::abs(f0.eval_axis(last.omega_min));
    };

    const double cap = delta_cap > 0.0 ? delta_cap : kInf;
    double g0 = G(0.0);
    if (!std::isfinite(g0)) {
        // derivative vanishes at theta0; probe forward for theta dependence
        double probe = std::isfinite(cap) ? cap : 1.0;
        for (int i = 0; i < 8 && !std::isfinite(G(probe)); i++) {
            if (std::isfinite(cap)) { fill_detail(); return kInf; }
            probe *= 4.0;
        }
        if (!std::isfinite(G(probe))) { fill_detail(); return kInf; }
        g0 = probe;
    }
    double hi = std::min(g0, cap);
    double ghi = G(hi);
    if (ghi >= hi) {
        fill_detail();
        return hi;
    }
    double lo = ghi; // G is non-increasing, so G(lo) >= G(hi) = lo holds
    while (hi - lo > kBisectRelTol * std::max(hi, 1e-12)) {
        double mid = 0.5 * (lo + hi);
        if (G(mid) >= mid)
            lo = mid;
        else
            hi = mid;
    }
    G(lo); // leave `last` describing the certified bound
    fill_detail();
    return lo;
}

} // namespace

double step_bound_general(const CharFun& cf, const ParamPoint& tau0, std::span<const double> dir,
                          double theta0, double delta_cap, StepBoundDetail* detail) {
    if (dir.size() != cf.num_params())
        throw Error(ErrorCode::Invalid, "direction dimension mismatch");
    std::vector<double> d(dir.begin(), dir.end());
    PointProvider at = [&cf, &tau0, d](double theta, ParamPoint& pos, std::vector<double>& tan) {
        pos.resize(tau0.size());
        for (std::size_t k = 0; k < tau0.size(); k++) pos[k] = tau0[k] + theta * d[k];
        tan = d;
    };
    return general_bound_impl(cf, at, theta0, delta_cap, detail);
}

double step_bound_general_curve(const CharFun& cf, const CurveDescriptor& curve, double theta0,
                                double delta_cap, StepBoundDetail* detail) {
    PointProvider at = [&curve](double theta, ParamPoint& pos, std::vector<double>& tan) {
        pos = curve.position(theta);
        tan = curve.tangent(theta);
    };
    return general_bound_impl(cf, at, theta0, delta_cap, detail);
}

// ---------------------------------------------------------------------------
// Algorithm: iterate theta_{k+1} = theta_k + eta * bound(theta_k)

LineTrace run_ray(const CharFun& cf, const RayTask& task) {
    LineTrace trace;
    const std::size_t n = cf.num_params();

    try {
        if (!(task.eta > 0.0 && task.eta < 1.0))
            throw Error(ErrorCode::Invalid, "eta must lie in (0, 1)");
        if (!(task.delta > 0.0)) throw Error(ErrorCode::Invalid, "delta must be positive");
        if (task.tau0.size() != n) throw Error(ErrorCode::Invalid, "start point dimension mismatch");

        double max_abs = 0.0;
        for (double v : task.tau0) max_abs = std::max(max_abs, std::fabs(v));
        const double theta_cap = task.theta_cap > 0.0 ? task.theta_cap : 100.0 * (1.0 + max_abs);
        if (!(task.theta0 >= 0.0 && task.theta0 < theta_cap))
            throw Error(ErrorCode::Invalid, "theta0 must lie in [0, theta cap)");

        std::vector<double> dir;
        double domain_cap = kInf;
        if (!task.curve) {
            dir = task.dir;
            double norm = 0.0;
            for (double v : dir) norm += v * v;
            norm = std::sqrt(norm);
            if (!(norm > 0.0)) throw Error(ErrorCode::Invalid, "direction must be non-zero");
            for (double& v : dir) v /= norm;
            for (std::size_t k = 0; k < n; k++)
                if (dir[k] < 0.0)
                    domain_cap = std::min(
                        domain_cap, (task.tau0[k] - cf.lower_bounds()[k]) / (-dir[k]));
        }

        auto point_at = [&](double theta) {
            if (task.curve) return task.curve->position(theta);
            ParamPoint p(n);
            for (std::size_t k = 0; k < n; k++) p[k] = task.tau0[k] + theta * dir[k];
            return p;
        };

        // precondition: no imaginary-axis zero at the start
        ParamPoint start = point_at(task.theta0);
        cf.require_admissible(start);
        SweepResult pre = min_abs_on_axis(cf, start);
        if (pre.value <= axis_zero_tolerance(cf, start))
            throw Error(ErrorCode::Precondition,
                        "f(jw, tau(theta0)) vanishes on the imaginary axis (min |f| = " +
                            std::to_string(pre.value) + "); the start point sits on a crossing");

        std::optional<RetardedForm> rf;
        if (!task.curve && !task.force_general) rf = cf.to_retarded();
        trace.used_retarded_path = rf.has_value();
        std::optional<RayRetarded> rr;
        if (rf) rr = CharFun::with_ray(*rf, task.tau0, dir);

        const double theta_effective_cap = std::min(theta_cap, domain_cap);
        double theta = task.theta0;
        double bound = kInf;
        int k = 0;
        const int max_iters = 200000;

        while (task.eta * bound > task.delta && theta < theta_effective_cap) {
            if (k >= max_iters)
                throw Error(ErrorCode::Internal, "iteration cap reached without termination");
            const double remaining = theta_effective_cap - theta;
            StepBoundDetail detail;
            if (rr) {
                bound = step_bound_retarded(*rr, theta, &detail);
            } else if (task.curve) {
                bound = step_bound_general_curve(cf, *task.curve, theta, remaining, &detail);
            } else {
                bound = step_bound_general(cf, task.tau0, dir, theta, remaining, &detail);
            }

            if (!std::isfinite(bound) || bound >= remaining * (1.0 - 1e-12)) {
                // f is theta-independent here, or the certified step reaches
                // the cap: jump to the cap
                trace.steps.push_back({k, theta, bound, detail.omega_min, detail.min_abs_f});
                theta = theta_effective_cap;
                break;
            }
            double step = task.eta * bound;
            trace.steps.push_back({k, theta, step, detail.omega_min, detail.min_abs_f});
            trace.final_omega = detail.omega_min;
            theta += step;
            k++;
        }

        trace.theta_final = std::min(theta, theta_effective_cap);
        if (theta >= theta_effective_cap) {
            trace.verdict = RayVerdict::Diverged;
            trace.reason = theta_effective_cap < theta_cap ? "domain-boundary" : "theta-cap";
        } else {
            trace.verdict = RayVerdict::Converged;
        }
    } catch (const Error& e) {
        trace.verdict = RayVerdict::Failed;
        trace.reason = e.what();
        if (!trace.steps.empty()) trace.theta_final = trace.steps.back().theta;
    }
    return trace;
}

} // namespace tds
