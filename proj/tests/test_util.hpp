// Test-only oracles, independent of the library code paths they check:
// finite differences, adaptive quadrature, dense-grid minimization,
// Durand-Kerner root counting, and closed-form crossing solvers.
#ifndef TDS_TEST_UTIL_HPP
#define TDS_TEST_UTIL_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "charfun.hpp"

namespace tds::test {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// central finite difference d/dx g(x)

inline double central_fd(const std::function<double(double)>& g, double x, double h) {
    return (g(x + h) - g(x - h)) / (2.0 * h);
}

inline Complex central_fd_c(const std::function<Complex(double)>& g, double x, double h) {
    return (g(x + h) - g(x - h)) / (2.0 * h);
}

// ---------------------------------------------------------------------------
// adaptive Simpson quadrature for complex integrands over [a, b]

namespace detail {
inline Complex simpson(const std::function<Complex(double)>& f, double a, double b, Complex fa,
                       Complex fm, Complex fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline Complex adapt(const std::function<Complex(double)>& f, double a, double b, Complex fa,
                     Complex fm, Complex fb, Complex whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    Complex flm = f(lm), frm = f(rm);
    Complex left = simpson(f, a, m, fa, flm, fm);
    Complex right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}
} // namespace detail

inline Complex quadrature(const std::function<Complex(double)>& f, double a, double b,
                          double tol = 1e-13) {
    Complex fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    Complex whole = detail::simpson(f, a, b, fa, fm, fb);
    return detail::adapt(f, a, b, fa, fm, fb, whole, tol, 40);
}

// ---------------------------------------------------------------------------
// Durand-Kerner roots of a monic polynomial (ascending coefficients, leading
// coefficient excluded). Independent oracle for pole counts of delay-free
// systems.

inline std::vector<Complex> poly_roots(const std::vector<double>& monic_tail) {
    const std::size_t n = monic_tail.size();
    std::vector<Complex> roots(n);
    for (std::size_t i = 0; i < n; i++)
        roots[i] = std::pow(Complex(0.4, 0.9), double(i + 1));
    auto eval = [&](Complex z) {
        Complex r = 1.0;
        for (std::size_t i = n; i-- > 0;) r = r * z + monic_tail[i];
        return r;
    };
    for (int iter = 0; iter < 500; iter++) {
        double moved = 0.0;
        for (std::size_t i = 0; i < n; i++) {
            Complex denom = 1.0;
            for (std::size_t j = 0; j < n; j++)
                if (j != i) denom *= roots[i] - roots[j];
            Complex delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-13) break;
    }
    return roots;
}

inline int count_rhp_roots(const std::vector<double>& monic_tail) {
    int nu = 0;
    for (const Complex& r : poly_roots(monic_tail))
        if (r.real() >= 0.0) nu++;
    return nu;
}

// ---------------------------------------------------------------------------
// dense-grid minimum of a scalar function over [lo, hi]

inline double dense_grid_min(const std::function<double(double)>& f, double lo, double hi,
                             std::size_t samples, double* argmin = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    double bw = lo;
    for (std::size_t i = 0; i < samples; i++) {
        double w = lo + (hi - lo) * double(i) / double(samples - 1);
        double v = f(w);
        if (v < best) {
            best = v;
            bw = w;
        }
    }
    if (argmin) *argmin = bw;
    return best;
}

// ---------------------------------------------------------------------------
// canonical example systems

// s^2 + 2 s e^{-s t1} + e^{-s t2}
inline CharFun example_retarded() {
    std::vector<QPTerm> terms;
    terms.push_back({1, Expr::parse("2"), Expr::parse("t1")});
    terms.push_back({0, Expr::parse("1"), Expr::parse("t2")});
    return CharFun(2, std::move(terms), {"t1", "t2"});
}

// s^2 + s k + 1 - e^{-tau (s + k)}  (distributed kernel entered explicitly)
inline CharFun example_distributed() {
    std::vector<QPTerm> terms;
    terms.push_back({1, Expr::parse("k"), Expr::parse("0")});
    terms.push_back({0, Expr::parse("1"), Expr::parse("0")});
    terms.push_back({0, Expr::parse("-exp(-tau*k)"), Expr::parse("tau")});
    return CharFun(2, std::move(terms), {"tau", "k"});
}

// s^2 + s(k + e^{-s t1}) + k e^{-s t1} + 1 - e^{-t2 (k + s)}
inline CharFun example_three_param() {
    std::vector<QPTerm> terms;
    terms.push_back({1, Expr::parse("k"), Expr::parse("0")});
    terms.push_back({1, Expr::parse("1"), Expr::parse("t1")});
    terms.push_back({0, Expr::parse("k"), Expr::parse("t1")});
    terms.push_back({0, Expr::parse("1"), Expr::parse("0")});
    terms.push_back({0, Expr::parse("-exp(-t2*k)"), Expr::parse("t2")});
    return CharFun(2, std::move(terms), {"t1", "t2", "k"});
}

// ---------------------------------------------------------------------------
// crossing oracles for the retarded example, derived independently of the
// library: solve the magnitude and phase conditions in closed form.

// crossing along (1, 0) from (0, 0): 2w = |w^2 - 1| with the matching phase
// gives w* = 1 + sqrt(2), theta* = (pi/2) / w*.
inline double crossing_theta_dir10() {
    double w = 1.0 + std::sqrt(2.0);
    return (std::numbers::pi / 2.0) / w;
}

// crossing along (0, 1) from (0, 0): w^2 (w^2 + 4) = 1, phase
// -w theta = arg(w^2 - 2jw) mod 2pi.
inline double crossing_theta_dir01(double* omega_out = nullptr) {
    double x = std::sqrt(5.0) - 2.0; // positive root of x^2 + 4x - 1 = 0
    double w = std::sqrt(x);
    if (omega_out) *omega_out = w;
    return std::atan2(2.0 * w, w * w) / w;
}

// ---------------------------------------------------------------------------
// random retarded instances: m <= 3, parameters are the delays themselves

struct RandomRetarded {
    CharFun cf;
    ParamPoint tau0;
};

inline RandomRetarded random_retarded_instance(std::mt19937& rng, int max_m = 3,
                                               int max_params = 2) {
    std::uniform_int_distribution<int> m_dist(1, max_m);
    std::uniform_int_distribution<int> n_dist(1, max_params);
    std::uniform_real_distribution<double> coeff(-1.2, 1.2);
    std::uniform_real_distribution<double> point(0.05, 2.0);

    const std::vector<std::string> names = {"t1", "t2"};
    for (int attempt = 0; attempt < 200; attempt++) {
        int m = m_dist(rng);
        int n = n_dist(rng);
        std::vector<std::string> params(names.begin(), names.begin() + n);
        std::vector<QPTerm> terms;
        for (int i = 0; i < n; i++) {
            std::uniform_int_distribution<int> deg_dist(0, m - 1);
            int deg = deg_dist(rng);
            bool any = false;
            for (int p = 0; p <= deg; p++) {
                double c = coeff(rng);
                if (std::fabs(c) < 0.1) continue;
                terms.push_back({p, Expr::constant(c), Expr::variable(params[std::size_t(i)])});
                any = true;
            }
            if (!any)
                terms.push_back({0, Expr::constant(coeff(rng) < 0 ? -0.5 : 0.5),
                                 Expr::variable(params[std::size_t(i)])});
        }
        CharFun cf(m, std::move(terms), params);
        ParamPoint tau0;
        for (int k = 0; k < n; k++) tau0.push_back(point(rng));

        // keep instances clear of the stability crossing set at tau0
        double min_abs = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 4000; i++) {
            double w = 20.0 * double(i) / 3999.0;
            min_abs = std::min(min_abs, std::abs(cf.eval_axis(w, tau0)));
        }
        if (min_abs > 0.05) return {std::move(cf), std::move(tau0)};
    }
    throw std::runtime_error("failed to draw a random retarded instance");
}

inline std::vector<double> random_unit_direction(std::mt19937& rng, std::size_t n,
                                                 bool non_negative = true) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> d(n);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (double& v : d) {
            v = g(rng);
            if (non_negative) v = std::fabs(v);
            norm += v * v;
        }
    } while (norm < 1e-12);
    norm = std::sqrt(norm);
    for (double& v : d) v /= norm;
    return d;
}

} // namespace tds::test

#endif
