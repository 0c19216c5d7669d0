#ifndef TDS_CHARFUN_HPP
#define TDS_CHARFUN_HPP

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expr.hpp"

namespace tds {

using Complex = std::complex<double>;

// Parametric point in the non-negative orthant, aligned with the owning
// CharFun's parameter order.
using ParamPoint = std::vector<double>;

// One term s^power * coeff(tau) * exp(-s * delay(tau)). Coeff and delay are
// parameter-only expressions.
struct QPTerm {
    int power = 0;
    Expr coeff;
    Expr delay;
};

// Real polynomial by ascending coefficients.
struct Poly {
    std::vector<double> coeffs;

    int degree() const { return int(coeffs.size()) - 1; }
    Complex eval(Complex s) const {
        Complex r = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) r = r * s + coeffs[i];
        return r;
    }
    double coeff_abs_sum() const {
        double a = 0.0;
        for (double c : coeffs) a += std::fabs(c);
        return a;
    }
};

// Delay group of a retarded characteristic function: P(s) * exp(-s * tau_i)
// where tau_i is either a plain parameter or a numeric constant.
struct RetardedTerm {
    Poly P;
    std::optional<std::size_t> param_index; // nullopt: fixed numeric delay
    double const_delay = 0.0;
};

struct RetardedForm {
    int m = 1;
    std::vector<RetardedTerm> terms;
};

// Retarded form pinned to a ray tau(theta) = tau0 + theta*dir:
// f(s, theta) = s^m + sum_i f_i(s) e^{-s theta a_i}, f_i(s) = P_i(s) e^{-s tau_i0}.
struct RayRetarded {
    int m = 1;
    struct Term {
        Poly P;
        double tau0 = 0.0; // delay value at theta = 0
        double a = 0.0;    // direction component for this delay
    };
    std::vector<Term> terms;

    Complex eval(Complex s, double theta) const;
};

struct HypothesisIssue {
    int term_index = -1;
    std::string reason;
};

struct HypothesisReport {
    bool pass = true;
    std::vector<HypothesisIssue> issues;
};

// CharFun bound to one parameter point: per-term numeric (alpha, beta) pairs.
// All inner loops (sweeps, contours) evaluate through this.
class BoundCharFun {
public:
    Complex eval(Complex s) const;
    Complex eval_axis(double omega) const { return eval(Complex(0.0, omega)); }

    int m = 1;
    struct TermVal {
        int power;
        double alpha;
        double beta;
    };
    std::vector<TermVal> terms;
};

// Monic quasi-polynomial characteristic function
//   f(s, tau) = s^m + sum_i s^{p_i} alpha_i(tau) e^{-s beta_i(tau)}.
// Immutable after construction; all operations are const and pure.
class CharFun {
public:
    CharFun(int m, std::vector<QPTerm> terms, std::vector<std::string> param_names,
            std::vector<double> lower_bounds = {});

    int m() const { return m_; }
    std::size_t num_params() const { return param_names_.size(); }
    const std::vector<std::string>& param_names() const { return param_names_; }
    const std::vector<QPTerm>& terms() const { return terms_; }
    const std::vector<double>& lower_bounds() const { return lower_bounds_; }

    // f at arbitrary complex s. Delays must evaluate >= 0 at tau.
    Complex eval_s(Complex s, const ParamPoint& tau) const;
    // f(j omega, tau).
    Complex eval_axis(double omega, const ParamPoint& tau) const;

    // Parametric gradient: component k is df/dtau_k at s = j omega.
    std::vector<Complex> grad_axis(double omega, const ParamPoint& tau) const;

    // <grad f(j omega, tau), dir> for a real tangent vector.
    Complex directional_derivative(double omega, const ParamPoint& tau,
                                   std::span<const double> dir) const;

    BoundCharFun bind_point(const ParamPoint& tau) const;

    // Structure test for the retarded template: constant coefficients and
    // delays that are plain parameters or numeric constants. Returns nullopt
    // when the test fails.
    std::optional<RetardedForm> to_retarded() const;
    static RayRetarded with_ray(const RetardedForm& rf, const ParamPoint& tau0,
                                std::span<const double> dir);

    HypothesisReport check_hypotheses() const;

    // Per-power upper bounds A_i >= sum_k |alpha_{i,k}(tau)| over a parameter
    // box. Index i runs over 0..m-1.
    std::vector<double> coeff_abs_bounds(std::span<const Interval> box) const;

    bool admissible(const ParamPoint& tau) const;
    void require_admissible(const ParamPoint& tau) const;

    // Delay groups: indices of terms sharing a structurally identical delay
    // expression. Used by the line/region bound machinery.
    const std::vector<std::vector<std::size_t>>& delay_groups() const { return groups_; }

    const CompiledExpr& coeff_fn(std::size_t i) const { return coeff_c_[i]; }
    const CompiledExpr& delay_fn(std::size_t i) const { return delay_c_[i]; }
    // d(coeff_i)/d(param_k), d(delay_i)/d(param_k)
    const CompiledExpr& coeff_grad(std::size_t i, std::size_t k) const {
        return coeff_d_[i * param_names_.size() + k];
    }
    const CompiledExpr& delay_grad(std::size_t i, std::size_t k) const {
        return delay_d_[i * param_names_.size() + k];
    }

private:
    int m_;
    std::vector<QPTerm> terms_;
    std::vector<std::string> param_names_;
    std::vector<double> lower_bounds_;

    std::vector<CompiledExpr> coeff_c_, delay_c_;
    std::vector<CompiledExpr> coeff_d_, delay_d_; // term-major, param-minor
    std::vector<std::vector<std::size_t>> groups_;
};

// Integer power of a complex number by repeated multiplication.
inline Complex cpow_int(Complex s, int n) {
    Complex r = 1.0;
    for (int i = 0; i < n; i++) r *= s;
    return r;
}

} // namespace tds

#endif
