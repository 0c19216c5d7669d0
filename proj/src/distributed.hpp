#ifndef TDS_DISTRIBUTED_HPP
#define TDS_DISTRIBUTED_HPP

#include <string>
#include <variant>
#include <vector>

#include "charfun.hpp"

namespace tds {

// A delay quantity in a state model: fixed numeric value or a named parameter.
using DelaySpec = std::variant<double, std::string>;

// x' = A0 x + sum_i A1[i] x(t - tau_i)
//        + sum_j A2[j] integral_{lo_j}^{hi_j} gamma_j(xi) x(t - xi) dxi,
// gamma_j polynomial with real coefficients (ascending powers).
struct DistributedModel {
    std::size_t dim = 0;
    std::vector<double> A0; // row-major dim x dim

    struct DiscreteTerm {
        std::vector<double> A;
        DelaySpec delay;
    };
    struct DistributedTerm {
        std::vector<double> A;
        DelaySpec lower, upper;
        std::vector<double> kernel; // gamma coefficients, ascending
    };

    std::vector<DiscreteTerm> discrete;
    std::vector<DistributedTerm> distributed;

    void validate() const;
};

// I(s) = integral_a^b gamma(xi) e^{-s xi} dxi for polynomial gamma. Closed
// antiderivative away from s = 0, termwise-integrated Taylor series when
// |s| * max(|a|,|b|) is below a degree-dependent threshold (the closed form
// cancels catastrophically there).
Complex kernel_laplace(const std::vector<double>& gamma, double a, double b, Complex s);

// Threshold used for the series/closed-form switch.
double kernel_laplace_switch_threshold(std::size_t kernel_degree);

struct ConversionReport {
    int cleared_power = 0;         // multiplied by s^cleared_power
    int spurious_origin_zeros = 0; // zeros the clearing step adds at s = 0
};

struct ConvertedCharFun {
    CharFun cf;
    ConversionReport report;
};

// det(sI - A0 - sum A1 e^{-s tau} - sum A2 I(s)), with the rational-in-s
// factors introduced by distributed kernels cleared by multiplying through
// with s^d. The result is a monic quasi-polynomial over the model's named
// delay parameters.
ConvertedCharFun model_to_charfun(const DistributedModel& dm);

} // namespace tds

#endif
