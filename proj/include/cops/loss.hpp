#pragma once

#include <cmath>
#include <stdexcept>

namespace cops {

// The two pairwise losses used by both the label-fit terms and the coupling
// term. Square: (u - v)^2. Sigmoid: 1 / (1 + exp(u v)), a smooth agreement
// loss in (0, 1) that decays when u and v share a sign.
enum class LossKind { square, sigmoid };

inline const char* loss_name(LossKind k) {
    return k == LossKind::square ? "square" : "sigmoid";
}

namespace detail {

// 1 / (1 + e^t) without overflow for any t; saturates to 1 or 0 at the tails.
inline double logistic_neg(double t) {
    if (t >= 0.0) {
        double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

} // namespace detail

inline double loss_value(LossKind k, double u, double v) {
    if (k == LossKind::square) {
        double d = u - v;
        return d * d;
    }
    return detail::logistic_neg(u * v);
}

// d/du. For the sigmoid loss, with s = loss value, the derivative collapses
// to -s (1 - s) v, which is finite for all inputs and underflows cleanly to 0
// in the saturated tails.
inline double loss_partial_u(LossKind k, double u, double v) {
    if (k == LossKind::square) return 2.0 * (u - v);
    double s = detail::logistic_neg(u * v);
    return -s * (1.0 - s) * v;
}

// d/dv; the square loss is antisymmetric in its arguments' roles, the sigmoid
// loss symmetric, so only the trailing factor changes.
inline double loss_partial_v(LossKind k, double u, double v) {
    if (k == LossKind::square) return -2.0 * (u - v);
    double s = detail::logistic_neg(u * v);
    return -s * (1.0 - s) * u;
}

} // namespace cops
