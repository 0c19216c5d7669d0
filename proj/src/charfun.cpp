#include "charfun.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tds {

namespace {
constexpr double kDelayTol = 1e-12;
}

CharFun::CharFun(int m, std::vector<QPTerm> terms, std::vector<std::string> param_names,
                 std::vector<double> lower_bounds)
    : m_(m), terms_(std::move(terms)), param_names_(std::move(param_names)),
      lower_bounds_(std::move(lower_bounds)) {
    if (m_ < 1) throw Error(ErrorCode::Invalid, "leading power m must be >= 1");
    std::set<std::string> declared(param_names_.begin(), param_names_.end());
    if (declared.size() != param_names_.size())
        throw Error(ErrorCode::Invalid, "duplicate parameter name");
    if (declared.count("s"))
        throw Error(ErrorCode::Invalid, "'s' cannot be used as a parameter name");
    if (lower_bounds_.empty()) lower_bounds_.assign(param_names_.size(), 0.0);
    if (lower_bounds_.size() != param_names_.size())
        throw Error(ErrorCode::Invalid, "lower_bounds length does not match params");

    for (std::size_t i = 0; i < terms_.size(); i++) {
        const QPTerm& t = terms_[i];
        if (t.power < 0)
            throw Error(ErrorCode::Invalid, "term " + std::to_string(i) + ": negative power");
        for (const Expr* e : {&t.coeff, &t.delay}) {
            for (const std::string& v : e->free_vars()) {
                if (v == "s")
                    throw Error(ErrorCode::Invalid,
                                "term " + std::to_string(i) +
                                    ": coefficient/delay expressions must not use 's'");
                if (!declared.count(v))
                    throw Error(ErrorCode::Invalid, "term " + std::to_string(i) +
                                                        ": unbound variable '" + v + "'");
            }
        }
        coeff_c_.emplace_back(t.coeff, param_names_);
        delay_c_.emplace_back(t.delay, param_names_);
        for (const std::string& p : param_names_) {
            coeff_d_.emplace_back(t.coeff.diff(p), param_names_);
            delay_d_.emplace_back(t.delay.diff(p), param_names_);
        }
    }

    // group terms by structurally identical delay expressions
    for (std::size_t i = 0; i < terms_.size(); i++) {
        bool placed = false;
        for (auto& g : groups_) {
            if (terms_[g.front()].delay.same_tree(terms_[i].delay)) {
                g.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) groups_.push_back({i});
    }
}

bool CharFun::admissible(const ParamPoint& tau) const {
    if (tau.size() != param_names_.size()) return false;
    for (std::size_t k = 0; k < tau.size(); k++)
        if (!std::isfinite(tau[k]) || tau[k] < lower_bounds_[k] - kDelayTol) return false;
    return true;
}

void CharFun::require_admissible(const ParamPoint& tau) const {
    if (tau.size() != param_names_.size())
        throw Error(ErrorCode::Invalid, "parameter point has dimension " +
                                            std::to_string(tau.size()) + ", expected " +
                                            std::to_string(param_names_.size()));
    if (!admissible(tau))
        throw Error(ErrorCode::Precondition, "parameter point outside the admissible domain");
}

BoundCharFun CharFun::bind_point(const ParamPoint& tau) const {
    require_admissible(tau);
    BoundCharFun b;
    b.m = m_;
    b.terms.reserve(terms_.size());
    std::span<const double> tv(tau);
    for (std::size_t i = 0; i < terms_.size(); i++) {
        double alpha = coeff_c_[i].eval_real(tv);
        double beta = delay_c_[i].eval_real(tv);
        if (beta < -kDelayTol)
            throw Error(ErrorCode::Precondition,
                        "term " + std::to_string(i) + ": delay evaluates to " +
                            std::to_string(beta) + " < 0 at the given point");
        b.terms.push_back({terms_[i].power, alpha, std::max(beta, 0.0)});
    }
    return b;
}

Complex BoundCharFun::eval(Complex s) const {
    Complex r = cpow_int(s, m);
    for (const TermVal& t : terms)
        r += t.alpha * cpow_int(s, t.power) * std::exp(-s * t.beta);
    return r;
}

Complex RayRetarded::eval(Complex s, double theta) const {
    Complex r = cpow_int(s, m);
    for (const Term& t : terms) r += t.P.eval(s) * std::exp(-s * (t.tau0 + theta * t.a));
    return r;
}

Complex CharFun::eval_s(Complex s, const ParamPoint& tau) const {
    return bind_point(tau).eval(s);
}

Complex CharFun::eval_axis(double omega, const ParamPoint& tau) const {
    return eval_s(Complex(0.0, omega), tau);
}

std::vector<Complex> CharFun::grad_axis(double omega, const ParamPoint& tau) const {
    require_admissible(tau);
    const std::size_t n = param_names_.size();
    std::vector<Complex> g(n, Complex(0.0, 0.0));
    Complex s(0.0, omega);
    std::span<const double> tv(tau);
    for (std::size_t i = 0; i < terms_.size(); i++) {
        double alpha = coeff_c_[i].eval_real(tv);
        double beta = delay_c_[i].eval_real(tv);
        if (beta < -kDelayTol)
            throw Error(ErrorCode::Precondition,
                        "term " + std::to_string(i) + ": negative delay at evaluation point");
        Complex base = cpow_int(s, terms_[i].power) * std::exp(-s * beta);
        for (std::size_t k = 0; k < n; k++) {
            double da = coeff_d_[i * n + k].eval_real(tv);
            double db = delay_d_[i * n + k].eval_real(tv);
            g[k] += base * (da - s * alpha * db);
        }
    }
    return g;
}

Complex CharFun::directional_derivative(double omega, const ParamPoint& tau,
                                        std::span<const double> dir) const {
    if (dir.size() != param_names_.size())
        throw Error(ErrorCode::Invalid, "direction dimension mismatch");
    std::vector<Complex> g = grad_axis(omega, tau);
    Complex r = 0.0;
    for (std::size_t k = 0; k < g.size(); k++) r += g[k] * dir[k];
    return r;
}

std::optional<RetardedForm> CharFun::to_retarded() const {
    RetardedForm rf;
    rf.m = m_;
    // delay key -> retarded term index
    struct Key {
        bool is_param;
        std::size_t param;
        double value;
    };
    std::vector<Key> keys;

    for (std::size_t i = 0; i < terms_.size(); i++) {
        const QPTerm& t = terms_[i];
        if (t.power >= m_) return std::nullopt; // not the retarded template
        if (!t.coeff.free_vars().empty()) return std::nullopt;
        double alpha = t.coeff.constant_value();

        Key key{};
        auto vars = t.delay.free_vars();
        if (vars.empty()) {
            double beta = t.delay.constant_value();
            if (beta < -kDelayTol) return std::nullopt;
            key = {false, 0, std::max(beta, 0.0)};
        } else if (vars.size() == 1) {
            // delay must be semantically the parameter itself
            const std::string& v = *vars.begin();
            std::size_t idx = 0;
            while (idx < param_names_.size() && param_names_[idx] != v) idx++;
            if (idx == param_names_.size()) return std::nullopt;
            for (double probe : {0.17, 1.3, 2.9, 5.11, 9.7}) {
                double got = t.delay.eval_real({{v, probe}});
                if (std::fabs(got - probe) > 1e-12 * std::max(1.0, probe)) return std::nullopt;
            }
            key = {true, idx, 0.0};
        } else {
            return std::nullopt;
        }

        std::size_t slot = keys.size();
        for (std::size_t j = 0; j < keys.size(); j++) {
            if (keys[j].is_param == key.is_param &&
                (key.is_param ? keys[j].param == key.param : keys[j].value == key.value)) {
                slot = j;
                break;
            }
        }
        if (slot == keys.size()) {
            keys.push_back(key);
            RetardedTerm rt;
            if (key.is_param)
                rt.param_index = key.param;
            else
                rt.const_delay = key.value;
            rf.terms.push_back(std::move(rt));
        }
        Poly& P = rf.terms[slot].P;
        if (int(P.coeffs.size()) <= t.power) P.coeffs.resize(std::size_t(t.power) + 1, 0.0);
        P.coeffs[std::size_t(t.power)] += alpha;
    }
    return rf;
}

RayRetarded CharFun::with_ray(const RetardedForm& rf, const ParamPoint& tau0,
                              std::span<const double> dir) {
    RayRetarded rr;
    rr.m = rf.m;
    for (const RetardedTerm& t : rf.terms) {
        RayRetarded::Term rt;
        rt.P = t.P;
        if (t.param_index) {
            rt.tau0 = tau0.at(*t.param_index);
            rt.a = dir[*t.param_index];
        } else {
            rt.tau0 = t.const_delay;
            rt.a = 0.0;
        }
        rr.terms.push_back(std::move(rt));
    }
    return rr;
}

HypothesisReport CharFun::check_hypotheses() const {
    HypothesisReport rep;
    const std::size_t n = param_names_.size();
    for (std::size_t i = 0; i < terms_.size(); i++) {
        const QPTerm& t = terms_[i];
        if (t.power >= m_) {
            rep.pass = false;
            rep.issues.push_back(
                {int(i), "power " + std::to_string(t.power) + " >= m = " + std::to_string(m_) +
                             " (neutral-type structure; outside the retarded template)"});
        }
        // sample delay sign over the declared domain (deterministic lattice)
        bool negative = false;
        double bad = 0.0;
        std::vector<double> pt(n, 0.0);
        const double levels[] = {0.0, 0.35, 1.0, 3.7, 10.0};
        std::size_t combos = 1;
        for (std::size_t k = 0; k < n && combos < 4096; k++) combos *= 5;
        for (std::size_t c = 0; c < combos && !negative; c++) {
            std::size_t code = c;
            for (std::size_t k = 0; k < n; k++) {
                pt[k] = lower_bounds_[k] + levels[code % 5];
                code /= 5;
            }
            double beta = delay_c_[i].eval_real(std::span<const double>(pt));
            if (beta < -kDelayTol) {
                negative = true;
                bad = beta;
            }
        }
        if (negative) {
            rep.pass = false;
            rep.issues.push_back({int(i), "delay '" + t.delay.str() +
                                              "' evaluates negative (" + std::to_string(bad) +
                                              ") inside the declared domain"});
        }
    }
    return rep;
}

std::vector<double> CharFun::coeff_abs_bounds(std::span<const Interval> box) const {
    if (box.size() != param_names_.size())
        throw Error(ErrorCode::Invalid, "parameter box dimension mismatch");
    std::vector<double> A(std::size_t(m_), 0.0);
    for (std::size_t i = 0; i < terms_.size(); i++) {
        if (terms_[i].power >= m_)
            throw Error(ErrorCode::Invalid,
                        "coefficient bounds need the retarded template (term power >= m)");
        Interval a = coeff_c_[i].eval_interval(box);
        if (!std::isfinite(a.mag()))
            throw Error(ErrorCode::Sweep, "unbounded coefficient over the parameter box");
        A[std::size_t(terms_[i].power)] += a.mag();
    }
    return A;
}

} // namespace tds
