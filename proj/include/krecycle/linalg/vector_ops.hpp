#ifndef KRECYCLE_LINALG_VECTOR_OPS_HPP
#define KRECYCLE_LINALG_VECTOR_OPS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "krecycle/errors.hpp"

namespace krecycle {

using Vector = std::vector<double>;

namespace detail {
using EigenVec = Eigen::Map<Eigen::VectorXd>;
using EigenConstVec = Eigen::Map<const Eigen::VectorXd>;
inline EigenConstVec map(std::span<const double> x) { return {x.data(), static_cast<Eigen::Index>(x.size())}; }
inline EigenVec map(std::span<double> x) { return {x.data(), static_cast<Eigen::Index>(x.size())}; }
} // namespace detail

inline double dot(std::span<const double> x, std::span<const double> y) {
    detail::require(x.size() == y.size(), "dot: dimension mismatch");
    return detail::map(x).dot(detail::map(y));
}

inline double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

/// y += a * x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    detail::require(x.size() == y.size(), "axpy: dimension mismatch");
    detail::map(y) += a * detail::map(x);
}

inline void scale(double a, std::span<double> x) {
    for (auto &v : x) v *= a;
}

inline Vector subtract(std::span<const double> x, std::span<const double> y) {
    detail::require(x.size() == y.size(), "subtract: dimension mismatch");
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

} // namespace krecycle

#endif
