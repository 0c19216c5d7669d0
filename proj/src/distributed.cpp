#include "distributed.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tds {

namespace {
constexpr std::size_t kMaxKernelDegree = 12;
constexpr std::size_t kMaxDim = 8;

double factorial(std::size_t n) {
    double r = 1.0;
    for (std::size_t i = 2; i <= n; i++) r *= double(i);
    return r;
}
} // namespace

void DistributedModel::validate() const {
    if (dim == 0) throw Error(ErrorCode::Invalid, "model dimension must be >= 1");
    if (dim > kMaxDim)
        throw Error(ErrorCode::Invalid,
                    "model dimension " + std::to_string(dim) + " exceeds the supported cap " +
                        std::to_string(kMaxDim));
    auto check_matrix = [&](const std::vector<double>& M, const char* what) {
        if (M.size() != dim * dim)
            throw Error(ErrorCode::Invalid,
                        std::string(what) + ": expected " + std::to_string(dim * dim) +
                            " entries, got " + std::to_string(M.size()));
    };
    check_matrix(A0, "A0");
    for (const auto& t : discrete) {
        check_matrix(t.A, "discrete term matrix");
        if (const double* v = std::get_if<double>(&t.delay); v && *v < 0.0)
            throw Error(ErrorCode::Invalid, "discrete delay must be non-negative");
    }
    for (const auto& t : distributed) {
        check_matrix(t.A, "distributed term matrix");
        if (t.kernel.empty())
            throw Error(ErrorCode::Invalid, "distributed kernel has no coefficients");
        if (t.kernel.size() - 1 > kMaxKernelDegree)
            throw Error(ErrorCode::Invalid, "kernel degree exceeds the supported cap " +
                                                std::to_string(kMaxKernelDegree));
        const double* lo = std::get_if<double>(&t.lower);
        const double* hi = std::get_if<double>(&t.upper);
        if (lo && *lo < 0.0)
            throw Error(ErrorCode::Invalid, "distributed lower limit must be >= 0");
        if (lo && hi && !(*lo < *hi))
            throw Error(ErrorCode::Invalid, "distributed limits must satisfy lower < upper");
    }
}

double kernel_laplace_switch_threshold(std::size_t kernel_degree) {
    // The closed antiderivative subtracts two values of e^{-s xi} T_l(s xi)
    // that agree to O((s xi)^{l+1} / (l+1)!); below |s xi| ~ l + 2 the lost
    // digits exceed what the series costs, so switch there.
    return double(kernel_degree) + 2.0;
}

Complex kernel_laplace(const std::vector<double>& gamma, double a, double b, Complex s) {
    if (gamma.empty()) return 0.0;
    if (gamma.size() - 1 > kMaxKernelDegree)
        throw Error(ErrorCode::Invalid, "kernel degree exceeds the supported cap");
    const std::size_t deg = gamma.size() - 1;
    const double xmax = std::max(std::fabs(a), std::fabs(b));
    const double z = std::abs(s) * xmax;

    if (z < kernel_laplace_switch_threshold(deg)) {
        // I(s) = sum_t (-s)^t / t! * M_t,  M_t = sum_l g_l (b^{t+l+1}-a^{t+l+1})/(t+l+1)
        Complex acc = 0.0;
        Complex st = 1.0; // (-s)^t / t!
        for (int t = 0; t < 80; t++) {
            double Mt = 0.0;
            for (std::size_t l = 0; l <= deg; l++) {
                double p = double(t) + double(l) + 1.0;
                Mt += gamma[l] * (std::pow(b, p) - std::pow(a, p)) / p;
            }
            Complex term = st * Mt;
            acc += term;
            if (std::abs(term) <= 1e-16 * std::abs(acc) && t > 2) break;
            st *= -s / double(t + 1);
        }
        return acc;
    }

    // closed form: I(s) = sum_l g_l [ e^{-s a} P_l(s,a) - e^{-s b} P_l(s,b) ],
    // P_l(s,xi) = sum_{k=0}^{l} (l!/k!) xi^k s^{k-l-1}
    auto P = [&](std::size_t l, double xi) {
        Complex acc = 0.0;
        Complex sp = 1.0; // s^k
        const double lf = factorial(l);
        double kf = 1.0;
        double xik = 1.0;
        for (std::size_t k = 0; k <= l; k++) {
            acc += (lf / kf) * xik * sp / cpow_int(s, int(l) + 1);
            sp *= s;
            xik *= xi;
            kf *= double(k + 1);
        }
        return acc;
    };
    Complex acc = 0.0;
    const Complex ea = std::exp(-s * a), eb = std::exp(-s * b);
    for (std::size_t l = 0; l <= deg; l++) {
        if (gamma[l] == 0.0) continue;
        acc += gamma[l] * (ea * P(l, a) - eb * P(l, b));
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Symbolic conversion

namespace {

// Sum of terms coeff(tau) * s^spow * e^{-s * (sum mult_i * atom_i)}, where an
// atom is a named delay parameter or a numeric delay constant. Keys are exact
// (integer multiplicities), so like terms always combine.
struct LExpr {
    // key: (spow, multiplicity vector over atoms)
    std::map<std::pair<int, std::vector<int>>, Expr> terms;

    void add(int spow, std::vector<int> mult, const Expr& coeff) {
        if (coeff.is_constant() && coeff.constant_value() == 0.0) return;
        auto key = std::make_pair(spow, std::move(mult));
        auto it = terms.find(key);
        if (it == terms.end())
            terms.emplace(std::move(key), coeff);
        else {
            it->second = it->second + coeff;
            if (it->second.is_constant() && it->second.constant_value() == 0.0) terms.erase(it);
        }
    }
};

LExpr mul(const LExpr& x, const LExpr& y, std::size_t n_atoms) {
    LExpr r;
    for (const auto& [kx, cx] : x.terms) {
        for (const auto& [ky, cy] : y.terms) {
            std::vector<int> mult(n_atoms, 0);
            for (std::size_t i = 0; i < n_atoms; i++) mult[i] = kx.second[i] + ky.second[i];
            r.add(kx.first + ky.first, std::move(mult), cx * cy);
        }
    }
    return r;
}

void add_scaled(LExpr& dst, const LExpr& src, double scale) {
    if (scale == 0.0) return;
    for (const auto& [k, c] : src.terms) dst.add(k.first, k.second, Expr::constant(scale) * c);
}

LExpr determinant(const std::vector<LExpr>& M, std::size_t dim, std::size_t n_atoms) {
    std::vector<std::size_t> rows(dim), cols(dim);
    for (std::size_t i = 0; i < dim; i++) rows[i] = cols[i] = i;

    struct Rec {
        const std::vector<LExpr>& M;
        std::size_t dim, n_atoms;
        LExpr minor(std::vector<std::size_t> r, std::vector<std::size_t> c) {
            if (r.size() == 1) return M[r[0] * dim + c[0]];
            LExpr acc;
            for (std::size_t i = 0; i < r.size(); i++) {
                const LExpr& e = M[r[i] * dim + c[0]];
                if (e.terms.empty()) continue;
                std::vector<std::size_t> rr;
                for (std::size_t j = 0; j < r.size(); j++)
                    if (j != i) rr.push_back(r[j]);
                LExpr sub = minor(rr, std::vector<std::size_t>(c.begin() + 1, c.end()));
                LExpr prod = mul(e, sub, n_atoms);
                add_scaled(acc, prod, (i % 2 == 0) ? 1.0 : -1.0);
            }
            return acc;
        }
    };
    return Rec{M, dim, n_atoms}.minor(rows, cols);
}

} // namespace

ConvertedCharFun model_to_charfun(const DistributedModel& dm) {
    dm.validate();
    const std::size_t dim = dm.dim;

    // collect delay atoms (parameters first, in order of appearance, then
    // distinct numeric delays)
    std::vector<std::string> params;
    std::vector<double> numerics;
    auto atom_of = [&](const DelaySpec& d) -> std::pair<bool, std::size_t> {
        if (const std::string* name = std::get_if<std::string>(&d)) {
            for (std::size_t i = 0; i < params.size(); i++)
                if (params[i] == *name) return {true, i};
            params.push_back(*name);
            return {true, params.size() - 1};
        }
        double v = std::get<double>(d);
        for (std::size_t i = 0; i < numerics.size(); i++)
            if (numerics[i] == v) return {false, i};
        numerics.push_back(v);
        return {false, numerics.size() - 1};
    };
    for (const auto& t : dm.discrete) atom_of(t.delay);
    for (const auto& t : dm.distributed) {
        atom_of(t.lower);
        atom_of(t.upper);
    }
    const std::size_t n_atoms = params.size() + numerics.size();
    auto atom_index = [&](const DelaySpec& d) {
        auto [is_param, idx] = atom_of(d);
        return is_param ? idx : params.size() + idx;
    };
    auto atom_expr = [&](std::size_t idx) {
        return idx < params.size() ? Expr::variable(params[idx])
                                   : Expr::constant(numerics[idx - params.size()]);
    };
    auto atom_is_zero = [&](std::size_t idx) {
        return idx >= params.size() && numerics[idx - params.size()] == 0.0;
    };

    // entry (i,j) of sI - A0 - sum A1 e^{-s tau} - sum A2 I(s)
    std::vector<LExpr> M(dim * dim);
    for (std::size_t i = 0; i < dim; i++) {
        for (std::size_t j = 0; j < dim; j++) {
            LExpr& e = M[i * dim + j];
            if (i == j) e.add(1, std::vector<int>(n_atoms, 0), Expr::constant(1.0));
            e.add(0, std::vector<int>(n_atoms, 0), Expr::constant(-dm.A0[i * dim + j]));
        }
    }
    for (const auto& t : dm.discrete) {
        std::size_t ai = atom_index(t.delay);
        for (std::size_t i = 0; i < dim; i++)
            for (std::size_t j = 0; j < dim; j++) {
                double v = t.A[i * dim + j];
                if (v == 0.0) continue;
                std::vector<int> mult(n_atoms, 0);
                if (!atom_is_zero(ai)) mult[ai] = 1;
                M[i * dim + j].add(0, std::move(mult), Expr::constant(-v));
            }
    }
    for (const auto& t : dm.distributed) {
        const std::size_t deg = t.kernel.size() - 1;
        // I(s) as LExpr: for each limit xi in {lower(+), upper(-)}:
        //   sum_l g_l * sign * sum_{k<=l} (l!/k!) xi^k s^{k-l-1} e^{-s xi}
        LExpr I;
        for (int which = 0; which < 2; which++) {
            const DelaySpec& lim = which == 0 ? t.lower : t.upper;
            const double sign = which == 0 ? 1.0 : -1.0;
            std::size_t ai = atom_index(lim);
            Expr xi = atom_expr(ai);
            for (std::size_t l = 0; l <= deg; l++) {
                if (t.kernel[l] == 0.0) continue;
                const double lf = factorial(l);
                double kf = 1.0;
                for (std::size_t k = 0; k <= l; k++) {
                    Expr coeff = Expr::constant(sign * t.kernel[l] * lf / kf) * Expr::pow(xi, long(k));
                    std::vector<int> mult(n_atoms, 0);
                    if (!atom_is_zero(ai)) mult[ai] = 1;
                    I.add(int(k) - int(l) - 1, std::move(mult), coeff);
                    kf *= double(k + 1);
                }
            }
        }
        for (std::size_t i = 0; i < dim; i++)
            for (std::size_t j = 0; j < dim; j++) {
                double v = t.A[i * dim + j];
                if (v == 0.0) continue;
                add_scaled(M[i * dim + j], I, -v);
            }
    }

    LExpr det = determinant(M, dim, n_atoms);

    int min_pow = 0;
    for (const auto& [k, c] : det.terms) min_pow = std::min(min_pow, k.first);
    const int d = -min_pow;

    // assemble the quasi-polynomial; leading power is dim + d and must be monic
    const int m_top = int(dim) + d;
    std::vector<QPTerm> qpterms;
    bool monic_seen = false;
    for (const auto& [k, c] : det.terms) {
        const int power = k.first + d;
        bool delay_free = true;
        Expr delay = Expr::constant(0.0);
        for (std::size_t ai = 0; ai < n_atoms; ai++) {
            for (int rep = 0; rep < k.second[ai]; rep++) {
                delay = delay + atom_expr(ai);
                delay_free = false;
            }
        }
        if (delay_free && power == m_top) {
            if (!(c.is_constant() && std::fabs(c.constant_value() - 1.0) < 1e-12))
                throw Error(ErrorCode::Internal,
                            "cleared determinant is not monic: leading coefficient " + c.str());
            monic_seen = true;
            continue;
        }
        if (power >= m_top)
            throw Error(ErrorCode::Internal, "delay term at or above the monic power");
        QPTerm term;
        term.power = power;
        term.coeff = c;
        term.delay = delay;
        qpterms.push_back(std::move(term));
    }
    if (!monic_seen)
        throw Error(ErrorCode::Internal, "monic leading term missing after clearing");

    ConvertedCharFun out{CharFun(m_top, std::move(qpterms), params), {d, d}};
    return out;
}

} // namespace tds
