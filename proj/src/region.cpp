#include "region.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace tds {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxInflation = 1.10;
constexpr double kBisectRelTol = 1e-3;

std::vector<Interval> point_box(const ParamPoint& tau) {
    std::vector<Interval> box(tau.size());
    for (std::size_t k = 0; k < tau.size(); k++) box[k] = Interval(tau[k]);
    return box;
}
} // namespace

HolderPair HolderPair::make(double p, double q) {
    auto conj = [](double x) {
        if (std::isinf(x)) return 1.0;
        if (x == 1.0) return kInf;
        return x / (x - 1.0);
    };
    if (!(p >= 1.0) || !(q >= 1.0))
        throw Error(ErrorCode::Invalid, "Holder exponents must lie in [1, inf]");
    double want_q = conj(p);
    bool consistent = (std::isinf(want_q) && std::isinf(q)) ||
                      std::fabs(want_q - q) <= 1e-9 * std::max(1.0, std::fabs(q));
    if (!consistent)
        throw Error(ErrorCode::Invalid, "p and q are not Holder conjugates (1/p + 1/q = 1)");
    return {p, q};
}

HolderPair HolderPair::from_p(double p) {
    if (!(p >= 1.0)) throw Error(ErrorCode::Invalid, "p must lie in [1, inf]");
    double q = std::isinf(p) ? 1.0 : (p == 1.0 ? kInf : p / (p - 1.0));
    return {p, q};
}

HolderPair HolderPair::from_q(double q) {
    HolderPair hp = from_p(q);
    return {hp.q, hp.p};
}

double norm_q(std::span<const double> v, double q) {
    if (std::isinf(q)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    }
    if (q == 1.0) {
        double s = 0.0;
        for (double x : v) s += std::fabs(x);
        return s;
    }
    double s = 0.0;
    for (double x : v) s += std::pow(std::fabs(x), q);
    return std::pow(s, 1.0 / q);
}

bool Ball::contains(std::span<const double> point, double shrink) const {
    std::vector<double> d(center.size());
    for (std::size_t k = 0; k < center.size(); k++) d[k] = point[k] - center[k];
    return norm_q(d, q) <= radius - shrink;
}

// ---------------------------------------------------------------------------
// Retarded closed form

double region_bound_retarded(const CharFun& cf, const RetardedForm& rf, const ParamPoint& tau0,
                             const HolderPair& hp, StepBoundDetail* detail) {
    BoundCharFun f0 = cf.bind_point(tau0);

    // parameter-bearing groups only; constant delays contribute no gradient
    std::vector<const Poly*> polys;
    for (const auto& t : rf.terms)
        if (t.param_index && t.P.coeff_abs_sum() != 0.0) polys.push_back(&t.P);

    std::vector<double> den_env; // 1-norm envelope >= p-norm denominator
    for (const Poly* P : polys)
        for (std::size_t j = 0; j < P->coeffs.size(); j++) {
            if (den_env.size() < j + 2) den_env.resize(j + 2, 0.0);
            den_env[j + 1] += std::fabs(P->coeffs[j]);
        }

    const double p = hp.p;
    RatioProblem rp;
    rp.num = [&f0](double w) { return std::abs(f0.eval_axis(w)); };
    rp.den = [&polys, p](double w) {
        if (std::isinf(p)) {
            double m = 0.0;
            for (const Poly* P : polys) m = std::max(m, w * std::abs(P->eval(Complex(0.0, w))));
            return m;
        }
        double s = 0.0;
        for (const Poly* P : polys) s += std::pow(w * std::abs(P->eval(Complex(0.0, w))), p);
        return std::pow(s, 1.0 / p);
    };
    rp.tail = quasipoly_tail_bound(cf, point_box(tau0), polys.empty() ? std::vector<double>{}
                                                                      : den_env);
    SweepResult res = global_min(rp);
    if (detail) {
        detail->omega_min = res.omega_min;
        detail->attained = res.attained;
        detail->min_abs_f = rp.num(res.omega_min);
    }
    return polys.empty() ? kInf : res.value;
}

// ---------------------------------------------------------------------------
// General bound

namespace {

// Gradient data at one sampled ball point, per delay group and component:
// X_{g,k}(w) = sum_{t in g} (jw)^{p_t} (d_k alpha_t - jw d_k beta_g alpha_t).
struct BallSample {
    struct Group {
        double beta = 0.0;
        std::vector<double> dbeta; // per component
        struct Term {
            int power;
            double alpha;
            std::vector<double> dalpha; // per component
        };
        std::vector<Term> terms;
    };
    std::vector<Group> groups;
};

struct RegionBoundData {
    std::vector<BallSample> samples;
    std::size_t n = 0;
    double p = 2.0;

    double norm_p(std::span<const double> v) const {
        if (std::isinf(p)) {
            double m = 0.0;
            for (double x : v) m = std::max(m, std::fabs(x));
            return m;
        }
        double s = 0.0;
        for (double x : v) s += std::pow(std::fabs(x), p);
        return std::pow(s, 1.0 / p);
    }

    double den(double w) const {
        Complex s(0.0, w);
        double sampled = 0.0, env = 0.0;
        std::vector<double> grad_mod(n), grad_env(n);
        for (const auto& bs : samples) {
            std::vector<Complex> G(n, Complex(0.0, 0.0));
            std::fill(grad_env.begin(), grad_env.end(), 0.0);
            for (const auto& g : bs.groups) {
                Complex phase = std::exp(-s * g.beta);
                for (std::size_t k = 0; k < n; k++) {
                    Complex X = 0.0;
                    for (const auto& t : g.terms)
                        X += cpow_int(s, t.power) *
                             (Complex(t.dalpha[k], 0.0) - s * (g.dbeta[k] * t.alpha));
                    G[k] += phase * X;
                    grad_env[k] += std::abs(X);
                }
            }
            for (std::size_t k = 0; k < n; k++) grad_mod[k] = std::abs(G[k]);
            sampled = std::max(sampled, norm_p(grad_mod));
            env = std::max(env, norm_p(grad_env));
        }
        return std::min(kMaxInflation * sampled, env);
    }

    // 1-norm polynomial envelope over components, valid for every w
    std::vector<double> envelope_poly(int m_top) const {
        std::vector<double> c(std::size_t(m_top) + 1, 0.0);
        for (const auto& bs : samples) {
            std::vector<double> ci(std::size_t(m_top) + 1, 0.0);
            for (const auto& g : bs.groups)
                for (const auto& t : g.terms)
                    for (std::size_t k = 0; k < n; k++) {
                        ci[std::size_t(t.power)] += std::fabs(t.dalpha[k]);
                        ci[std::size_t(t.power) + 1] += std::fabs(g.dbeta[k] * t.alpha);
                    }
            for (std::size_t j = 0; j < c.size(); j++) c[j] = std::max(c[j], ci[j]);
        }
        for (double& v : c) v *= kMaxInflation;
        return c;
    }

    bool identically_zero() const {
        for (const auto& bs : samples)
            for (const auto& g : bs.groups)
                for (const auto& t : g.terms) {
                    for (double d : t.dalpha)
                        if (d != 0.0) return false;
                    for (double d : g.dbeta)
                        if (d * t.alpha != 0.0) return false;
                }
        return true;
    }
};

// Sample points of the q-ball of radius eps around tau0: center, axis
// extremes, corner directions; clamped into the admissible domain (the ball
// is clipped there anyway and clamping stays inside the ball).
std::vector<ParamPoint> ball_samples(const CharFun& cf, const ParamPoint& tau0, double q,
                                     double eps) {
    const std::size_t n = tau0.size();
    std::vector<ParamPoint> pts;
    pts.push_back(tau0);
    if (eps <= 0.0) return pts;
    auto clamp = [&](ParamPoint p) {
        for (std::size_t k = 0; k < n; k++) p[k] = std::max(p[k], cf.lower_bounds()[k]);
        return p;
    };
    for (std::size_t k = 0; k < n; k++) {
        for (double sgn : {1.0, -1.0}) {
            ParamPoint p = tau0;
            p[k] += sgn * eps;
            pts.push_back(clamp(std::move(p)));
        }
    }
    const std::size_t corner_bits = std::min<std::size_t>(n, 6);
    std::vector<double> u(n, 1.0);
    for (std::size_t code = 0; code < (std::size_t(1) << corner_bits); code++) {
        for (std::size_t k = 0; k < n; k++)
            u[k] = (k < corner_bits && (code >> k) & 1) ? -1.0 : 1.0;
        double scale = eps / norm_q(u, q);
        ParamPoint p = tau0;
        for (std::size_t k = 0; k < n; k++) p[k] += scale * u[k];
        pts.push_back(clamp(std::move(p)));
    }
    return pts;
}

RegionBoundData collect_ball(const CharFun& cf, const ParamPoint& tau0, const HolderPair& hp,
                             double eps) {
    RegionBoundData data;
    data.n = cf.num_params();
    data.p = hp.p;
    const auto& groups = cf.delay_groups();

    for (const ParamPoint& pos : ball_samples(cf, tau0, hp.q, eps)) {
        cf.require_admissible(pos);
        std::span<const double> pv(pos);
        BallSample bs;
        for (const auto& g : groups) {
            BallSample::Group bg;
            std::size_t first = g.front();
            bg.beta = cf.delay_fn(first).eval_real(pv);
            if (bg.beta < -1e-12)
                throw Error(ErrorCode::Precondition, "delay evaluates negative inside the ball");
            bg.beta = std::max(bg.beta, 0.0);
            bg.dbeta.resize(data.n);
            for (std::size_t k = 0; k < data.n; k++)
                bg.dbeta[k] = cf.delay_grad(first, k).eval_real(pv);
            for (std::size_t ti : g) {
                BallSample::Group::Term t;
                t.power = cf.terms()[ti].power;
                t.alpha = cf.coeff_fn(ti).eval_real(pv);
                t.dalpha.resize(data.n);
                for (std::size_t k = 0; k < data.n; k++)
                    t.dalpha[k] = cf.coeff_grad(ti, k).eval_real(pv);
                bg.terms.push_back(std::move(t));
            }
            bs.groups.push_back(std::move(bg));
        }
        data.samples.push_back(std::move(bs));
    }
    return data;
}

} // namespace

double region_bound_general(const CharFun& cf, const ParamPoint& tau0, const HolderPair& hp,
                            double eps_cap, StepBoundDetail* detail) {
    cf.require_admissible(tau0);
    BoundCharFun f0 = cf.bind_point(tau0);
    std::vector<double> A = cf.coeff_abs_bounds(point_box(tau0));

    SweepResult last;
    auto G = [&](double eps) -> double {
        RegionBoundData data = collect_ball(cf, tau0, hp, eps);
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

    const double cap = eps_cap > 0.0 ? eps_cap : 1e6;
    double g0 = G(0.0);
    if (!std::isfinite(g0)) {
        if (!std::isfinite(G(cap))) {
            fill_detail();
            return kInf;
        }
        g0 = cap;
    }
    double hi = std::min(g0, cap);
    double ghi = G(hi);
    if (ghi >= hi) {
        fill_detail();
        return hi;
    }
    double lo = ghi;
    while (hi - lo > kBisectRelTol * std::max(hi, 1e-12)) {
        double mid = 0.5 * (lo + hi);
        if (G(mid) >= mid)
            lo = mid;
        else
            hi = mid;
    }
    G(lo);
    fill_detail();
    return lo;
}

double region_bound_auto(const CharFun& cf, const ParamPoint& tau0, const HolderPair& hp,
                         StepBoundDetail* detail) {
    if (auto rf = cf.to_retarded()) return region_bound_retarded(cf, *rf, tau0, hp, detail);
    return region_bound_general(cf, tau0, hp, 0.0, detail);
}

// ---------------------------------------------------------------------------
// Region growth

namespace {

// Occupancy grid over the clipped extent box; cells marked by center-in-ball.
struct Occupancy {
    std::size_t n = 0;
    std::vector<double> lo, hi;
    double h = 0.0;
    std::vector<std::size_t> dims;
    std::vector<std::uint8_t> cells;

    std::size_t flat(std::span<const std::size_t> idx) const {
        std::size_t f = 0;
        for (std::size_t k = 0; k < n; k++) f = f * dims[k] + idx[k];
        return f;
    }

    bool index_of(std::span<const double> pt, std::vector<std::size_t>& idx) const {
        idx.resize(n);
        for (std::size_t k = 0; k < n; k++) {
            double u = (pt[k] - lo[k]) / h;
            if (u < 0.0 || u >= double(dims[k])) return false;
            idx[k] = std::size_t(u);
        }
        return true;
    }

    // cells whose center lies inside the ball (and the domain box)
    std::vector<std::size_t> ball_cells(const Ball& b) const {
        std::vector<std::size_t> found;
        std::vector<std::size_t> ilo(n), ihi(n), idx(n);
        for (std::size_t k = 0; k < n; k++) {
            double a = std::max(b.center[k] - b.radius, lo[k]);
            double c = std::min(b.center[k] + b.radius, hi[k]);
            if (a > c) return found;
            ilo[k] = std::size_t(std::max(0.0, std::floor((a - lo[k]) / h)));
            ihi[k] = std::min(dims[k] - 1, std::size_t(std::floor((c - lo[k]) / h)));
        }
        idx = ilo;
        std::vector<double> center(n);
        while (true) {
            for (std::size_t k = 0; k < n; k++) center[k] = lo[k] + (double(idx[k]) + 0.5) * h;
            if (b.contains(center)) found.push_back(flat(idx));
            std::size_t k = n;
            while (k-- > 0) {
                if (++idx[k] <= ihi[k]) break;
                idx[k] = ilo[k];
                if (k == 0) return found;
            }
        }
    }

    // true when the cell of `pt` and its full neighbor block are covered
    bool deep_interior(std::span<const double> pt) const {
        std::vector<std::size_t> idx;
        if (!index_of(pt, idx)) return false;
        std::vector<long> d(n, -1);
        while (true) {
            std::vector<std::size_t> probe(n);
            bool ok = true;
            for (std::size_t k = 0; k < n; k++) {
                long v = long(idx[k]) + d[k];
                if (v < 0 || v >= long(dims[k])) {
                    ok = false;
                    break;
                }
                probe[k] = std::size_t(v);
            }
            if (ok && !cells[flat(probe)]) return false;
            std::size_t k = n;
            while (k-- > 0) {
                if (++d[k] <= 1) break;
                d[k] = -1;
                if (k == 0) return true;
            }
        }
    }
};

// boundary samples of a q-ball at angular resolution tied to the cell size
std::vector<ParamPoint> boundary_samples(const Ball& b, double h) {
    const std::size_t n = b.center.size();
    std::vector<ParamPoint> out;
    auto push_dir = [&](std::span<const double> u) {
        double nq = norm_q(u, b.q);
        if (nq <= 0.0) return;
        ParamPoint p(b.center);
        for (std::size_t k = 0; k < n; k++) p[k] += b.radius * u[k] / nq;
        out.push_back(std::move(p));
    };
    if (n == 1) {
        double u1[1] = {1.0}, u2[1] = {-1.0};
        push_dir(u1);
        push_dir(u2);
        return out;
    }
    if (n == 2) {
        std::size_t count =
            std::clamp<std::size_t>(std::size_t(2.0 * std::numbers::pi * b.radius / h), 16, 512);
        for (std::size_t i = 0; i < count; i++) {
            double phi = 2.0 * std::numbers::pi * double(i) / double(count);
            double u[2] = {std::cos(phi), std::sin(phi)};
            push_dir(u);
        }
        return out;
    }
    // n == 3: Fibonacci sphere directions
    std::size_t count = std::clamp<std::size_t>(
        std::size_t(4.0 * std::numbers::pi * b.radius * b.radius / (h * h)), 32, 1024);
    const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; i++) {
        double z = 1.0 - 2.0 * (double(i) + 0.5) / double(count);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = ga * double(i);
        double u[3] = {r * std::cos(phi), r * std::sin(phi), z};
        push_dir(u);
    }
    return out;
}

} // namespace

RegionState grow_region(const CharFun& cf, const ParamPoint& tau0, const RegionConfig& cfg) {
    const std::size_t n = cf.num_params();
    if (n < 1 || n > 3)
        throw Error(ErrorCode::Invalid,
                    "grow_region supports 1 to 3 parameters (occupancy grid cap); got " +
                        std::to_string(n));
    cf.require_admissible(tau0);

    SweepResult pre = min_abs_on_axis(cf, tau0);
    if (pre.value <= axis_zero_tolerance(cf, tau0))
        throw Error(ErrorCode::Precondition,
                    "f(jw, tau0) vanishes on the imaginary axis; start point sits on a "
                    "stability crossing");

    RegionState state;
    state.nu = count_unstable(cf, tau0).nu;

    double eps0 = region_bound_auto(cf, tau0, cfg.hp);
    if (!(eps0 > 0.0))
        throw Error(ErrorCode::Precondition, "initial region bound is not positive");
    const double extent =
        cfg.extent > 0.0 ? cfg.extent : 16.0 * cfg.eta * std::min(eps0, 1e3);
    if (!std::isfinite(eps0)) eps0 = extent / cfg.eta; // parameter-independent f

    const double h = cfg.grid_h > 0.0 ? cfg.grid_h : eps0 / 8.0;
    state.grid_h = h;

    Occupancy occ;
    occ.n = n;
    occ.h = h;
    occ.lo.resize(n);
    occ.hi.resize(n);
    occ.dims.resize(n);
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; k++) {
        occ.lo[k] = std::max(cf.lower_bounds()[k], tau0[k] - extent);
        occ.hi[k] = tau0[k] + extent;
        occ.dims[k] = std::max<std::size_t>(1, std::size_t(std::ceil((occ.hi[k] - occ.lo[k]) / h)));
        occ.hi[k] = occ.lo[k] + double(occ.dims[k]) * h;
        if (total > cfg.max_cells / occ.dims[k])
            throw Error(ErrorCode::Invalid,
                        "occupancy grid would exceed the cell cap; enlarge grid_h or shrink "
                        "the extent");
        total *= occ.dims[k];
    }
    occ.cells.assign(total, 0);

    auto clip_radius = [&](double r) { return std::min(r, 4.0 * extent); };

    Ball b0{tau0, clip_radius(cfg.eta * eps0), cfg.hp.q};
    for (std::size_t c : occ.ball_cells(b0))
        if (!occ.cells[c]) {
            occ.cells[c] = 1;
            state.covered_cells++;
        }
    state.balls.push_back(b0);

    std::vector<ParamPoint> frontier = boundary_samples(b0, h);

    while (!frontier.empty() && state.generations < cfg.max_generations &&
           state.balls.size() < cfg.max_balls) {
        state.generations++;
        struct Candidate {
            Ball ball;
            std::vector<std::size_t> new_cells;
        };
        std::vector<Candidate> accepted;
        std::vector<TerminalSample> stalled;
        std::vector<std::size_t> seen_cells; // dedupe frontier samples per cell
        std::vector<std::size_t> idx;

        for (const ParamPoint& pt : frontier) {
            bool in_domain = true;
            for (std::size_t k = 0; k < n; k++)
                if (pt[k] < cf.lower_bounds()[k]) in_domain = false;
            if (!in_domain) continue;
            if (occ.index_of(pt, idx)) {
                std::size_t f = occ.flat(idx);
                if (std::find(seen_cells.begin(), seen_cells.end(), f) != seen_cells.end())
                    continue;
                seen_cells.push_back(f);
            }
            if (occ.deep_interior(pt)) continue;

            double eps = 0.0;
            bool failed = false;
            try {
                eps = region_bound_auto(cf, pt, cfg.hp);
            } catch (const Error&) {
                failed = true; // near-boundary points legitimately stall
            }
            Ball b{pt, failed ? 0.0 : clip_radius(cfg.eta * eps), cfg.hp.q};
            std::vector<std::size_t> fresh;
            if (b.radius > 0.0)
                for (std::size_t c : occ.ball_cells(b))
                    if (!occ.cells[c]) fresh.push_back(c);
            if (fresh.empty()) {
                if (stalled.size() < cfg.max_terminal_samples)
                    stalled.push_back({pt, failed ? 0.0 : eps, 0.0});
                continue;
            }
            accepted.push_back({std::move(b), std::move(fresh)});
            if (state.balls.size() + accepted.size() >= cfg.max_balls) break;
        }

        if (accepted.empty()) {
            state.terminal_frontier = std::move(stalled);
            break;
        }
        frontier.clear();
        for (auto& c : accepted) {
            for (std::size_t cell : c.new_cells)
                if (!occ.cells[cell]) {
                    occ.cells[cell] = 1;
                    state.covered_cells++;
                }
            auto samples = boundary_samples(c.ball, h);
            frontier.insert(frontier.end(), samples.begin(), samples.end());
            state.balls.push_back(std::move(c.ball));
        }
        state.terminal_frontier = std::move(stalled);
    }

    // min |f| at the stalled samples (crossing-proximity diagnostics)
    for (TerminalSample& t : state.terminal_frontier)
        t.min_abs_f = min_abs_on_axis(cf, t.point).value;

    // capped faces: accepted balls that reach the extent box
    for (std::size_t k = 0; k < n; k++) {
        bool plus = false, minus = false;
        for (const Ball& b : state.balls) {
            if (b.center[k] + b.radius >= occ.hi[k] - occ.h) plus = true;
            if (b.center[k] - b.radius <= occ.lo[k] + occ.h &&
                occ.lo[k] > cf.lower_bounds()[k] + 1e-12)
                minus = true;
        }
        if (plus) state.capped_faces.push_back(cf.param_names()[k] + "+");
        if (minus) state.capped_faces.push_back(cf.param_names()[k] + "-");
    }

    // trace the union boundary for n = 2 (marching over covered cells)
    if (n == 2) {
        auto covered = [&](long i, long j) {
            if (i < 0 || j < 0 || i >= long(occ.dims[0]) || j >= long(occ.dims[1])) return false;
            return occ.cells[std::size_t(i) * occ.dims[1] + std::size_t(j)] != 0;
        };
        // collect oriented edges between covered and uncovered cells
        std::map<std::pair<long, long>, std::vector<std::pair<long, long>>> adj;
        auto add_edge = [&](long x0, long y0, long x1, long y1) {
            adj[{x0, y0}].push_back({x1, y1});
        };
        for (long i = 0; i < long(occ.dims[0]); i++) {
            for (long j = 0; j < long(occ.dims[1]); j++) {
                if (!covered(i, j)) continue;
                // corner lattice coordinates: (i, j) .. (i+1, j+1)
                if (!covered(i, j - 1)) add_edge(i, j, i + 1, j);         // south side
                if (!covered(i + 1, j)) add_edge(i + 1, j, i + 1, j + 1); // east
                if (!covered(i, j + 1)) add_edge(i + 1, j + 1, i, j + 1); // north
                if (!covered(i - 1, j)) add_edge(i, j + 1, i, j);         // west
            }
        }
        // stitch the longest loop
        std::vector<std::array<double, 2>> best;
        std::set<std::pair<std::pair<long, long>, std::pair<long, long>>> used;
        for (auto& [start, outs] : adj) {
            for (auto& first : outs) {
                if (used.count({start, first})) continue;
                std::vector<std::pair<long, long>> loop{start, first};
                used.insert({start, first});
                while (loop.back() != start) {
                    auto it = adj.find(loop.back());
                    if (it == adj.end()) break;
                    bool advanced = false;
                    for (auto& nxt : it->second) {
                        if (used.count({loop.back(), nxt})) continue;
                        used.insert({loop.back(), nxt});
                        loop.push_back(nxt);
                        advanced = true;
                        break;
                    }
                    if (!advanced) break;
                }
                if (loop.size() > 3 && loop.back() == start && loop.size() > best.size()) {
                    best.clear();
                    for (auto& [ci, cj] : loop)
                        best.push_back({occ.lo[0] + double(ci) * occ.h,
                                        occ.lo[1] + double(cj) * occ.h});
                }
            }
        }
        state.polygon = std::move(best);
    }

    return state;
}

} // namespace tds
