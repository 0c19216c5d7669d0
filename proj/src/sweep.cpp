#include "sweep.hpp"

#include <algorithm>
#include <cmath>

namespace tds {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double TailBound::eval(double omega) const {
    double num = std::pow(omega, double(m));
    double wp = 1.0;
    for (double a : num_coeffs) {
        num -= a * wp;
        wp *= omega;
    }
    if (den_coeffs.empty()) return num > 0.0 ? kInf : 0.0;
    double den = 0.0;
    wp = 1.0;
    for (double d : den_coeffs) {
        den += d * wp;
        wp *= omega;
    }
    if (den <= 0.0) return num > 0.0 ? kInf : 0.0;
    return std::max(num, 0.0) / den;
}

double TailBound::limit() const {
    if (den_coeffs.empty()) return kInf;
    if (int(den_coeffs.size()) - 1 == m && den_coeffs.back() > 0.0)
        return 1.0 / den_coeffs.back();
    return kInf;
}

TailBound TailBound::from_bounds(int m, std::vector<double> A, std::vector<double> den) {
    TailBound tb;
    tb.m = m;
    tb.num_coeffs = std::move(A);
    tb.den_coeffs = std::move(den);
    if (int(tb.den_coeffs.size()) > m + 1)
        throw Error(ErrorCode::Internal, "tail denominator degree exceeds m");
    double maxA = 0.0;
    for (double a : tb.num_coeffs) maxA = std::max(maxA, a);
    // Cauchy bound: numerator w^m - sum A_i w^i is positive past 1 + max A_i,
    // and the ratio is non-decreasing there (numerator of w^{-m}-normalized
    // form increases while the denominator does not).
    tb.omega_tail = 1.0 + maxA;
    return tb;
}

TailBound quasipoly_tail_bound(const CharFun& cf, std::span<const Interval> box,
                               std::vector<double> den_coeffs) {
    return TailBound::from_bounds(cf.m(), cf.coeff_abs_bounds(box), std::move(den_coeffs));
}

namespace {

struct Evaluator {
    const RatioProblem& rp;
    std::size_t count = 0;

    double ratio(double omega) {
        count++;
        double d = rp.den(omega);
        if (d <= 0.0) return kInf;
        double n = rp.num(omega);
        return n / d;
    }
};

// Golden-section minimization on [a, b] assuming a unimodal bracket.
std::pair<double, double> golden(Evaluator& ev, double a, double b, double rel_tol) {
    constexpr double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = ev.ratio(x1), f2 = ev.ratio(x2);
    while (b - a > rel_tol * std::max(1.0, std::fabs(a))) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = ev.ratio(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = ev.ratio(x2);
        }
    }
    return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

} // namespace

SweepResult global_min(const RatioProblem& rp, const SweepConfig& cfg) {
    Evaluator ev{rp};
    const double lin_hi = std::max(10.0 * rp.tail.m, 1.0);
    double omega_cut = std::max({2.0 * rp.tail.omega_tail, lin_hi, 10.0});

    std::vector<double> grid, vals;
    auto build_grid = [&](double cut) {
        grid.clear();
        int nlin = cfg.coarse_samples / 2;
        int nlog = cfg.coarse_samples - nlin;
        for (int i = 0; i < nlin; i++)
            grid.push_back(cfg.omega_lo + (lin_hi - cfg.omega_lo) * double(i) / double(nlin - 1));
        double l0 = std::log(lin_hi), l1 = std::log(cut);
        for (int i = 1; i <= nlog; i++)
            grid.push_back(std::exp(l0 + (l1 - l0) * double(i) / double(nlog)));
    };

    double best_v = kInf, best_w = cfg.omega_lo;
    bool tail_ok = false;
    double tail_floor = -kInf;
    const bool has_tail_limit = std::isfinite(rp.tail.limit());

    int doublings = 0;
    for (;; doublings++) {
        build_grid(omega_cut);
        vals.assign(grid.size(), kInf);
        for (std::size_t i = 0; i < grid.size(); i++) {
            vals[i] = ev.ratio(grid[i]);
            if (vals[i] < best_v) {
                best_v = vals[i];
                best_w = grid[i];
            }
        }
        tail_floor = rp.tail.eval(omega_cut);
        if (tail_floor >= best_v) {
            tail_ok = true;
            break;
        }
        double gap = best_v - tail_floor;
        if (has_tail_limit && gap <= std::max(cfg.tail_gap_rtol * std::fabs(best_v), 1e-300)) {
            tail_ok = true; // infimum approached in the tail; floor certifies the gap
            break;
        }
        if (doublings >= cfg.max_doublings)
            throw Error(ErrorCode::Sweep,
                        "UNBOUNDED-SWEEP: tail bound (" + std::to_string(tail_floor) +
                            ") never certified the grid minimum (" + std::to_string(best_v) +
                            ") after " + std::to_string(doublings) + " extensions");
        omega_cut *= 2.0;
    }
    (void)tail_ok;

    // refine the best local brackets
    std::vector<std::size_t> order;
    for (std::size_t i = 1; i + 1 < grid.size(); i++)
        if (vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] && std::isfinite(vals[i]))
            order.push_back(i);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    if (order.size() > std::size_t(cfg.refine_brackets)) order.resize(std::size_t(cfg.refine_brackets));
    for (std::size_t idx : order) {
        auto [w, v] = golden(ev, grid[idx - 1], grid[idx + 1], cfg.rel_tol);
        if (v < best_v || (v == best_v && w < best_w)) {
            best_v = v;
            best_w = w;
        }
    }

    SweepResult res;
    res.omega_cut = omega_cut;
    res.tail_floor = rp.tail.eval(omega_cut);
    res.evaluations = ev.count;
    if (res.tail_floor >= best_v) {
        res.attained = true;
        res.value = best_v;
        res.omega_min = best_w;
    } else {
        // the infimum sits in the tail; report the certified floor
        res.attained = false;
        res.value = std::max(res.tail_floor, 0.0);
        res.omega_min = omega_cut;
    }
    if (!std::isfinite(res.value))
        res.value = kInf;
    return res;
}

} // namespace tds
