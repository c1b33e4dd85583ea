#pragma once

#include "idie/types.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace idie {

/// Induced sup-norm of a matrix: the largest absolute row sum.
template <typename Derived>
typename Derived::Scalar induced_sup_norm(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() == 0) return typename Derived::Scalar(0);
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// T(t) = exp(A t), by scaling and squaring with Pade approximants.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
propagator(const Eigen::MatrixBase<Derived>& generator, typename Derived::Scalar t) {
    using Scalar = typename Derived::Scalar;
    using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (generator.rows() != generator.cols()) throw StructuralError("semigroup generator must be square");
    if (t < Scalar(0)) throw DomainError("semigroup evaluated at negative time");
    if (t == Scalar(0)) return Dense::Identity(generator.rows(), generator.cols());
    const Dense scaled = generator * t;
    return scaled.exp();
}

/// T(t) x.
template <typename DerivedA, typename DerivedX>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1>
evolve(const Eigen::MatrixBase<DerivedA>& generator, typename DerivedA::Scalar t, const Eigen::MatrixBase<DerivedX>& x) {
    if (generator.cols() != x.rows()) throw StructuralError("state dimension does not match the generator");
    if (t == typename DerivedA::Scalar(0)) {
        if (generator.rows() != generator.cols()) throw StructuralError("semigroup generator must be square");
        return x;
    }
    return propagator(generator, t) * x;
}

/// sup_{0 <= t <= b} ||T(t)|| on a finite horizon (growth rate recorded as 0).
struct SemigroupBound {
    double M = 1.0;
    double omega = 0.0;
    double horizon = 0.0;
    std::size_t sample_count = 0;
};

inline constexpr double kSemigroupSafetyFactor = 1.0 + 1e-6;

/// M = max(1, sup of ||exp(A t)|| over a uniform grid of [0, b], with local
/// maxima polished by golden-section search) times a 1 + 1e-6 safety factor.
template <typename Derived>
SemigroupBound operator_norm_bound(const Eigen::MatrixBase<Derived>& generator, double horizon,
                                   std::size_t samples = 1024) {
    if (!(horizon > 0.0)) throw DomainError("semigroup bound needs a positive horizon");
    if (samples < 2) throw DomainError("semigroup bound needs at least two samples");
    const Matrix a = generator.template cast<double>();
    auto norm_at = [&](double t) { return induced_sup_norm(propagator(a, t)); };

    const double dt = horizon / static_cast<double>(samples - 1);
    std::vector<double> grid(samples);
    for (std::size_t i = 0; i < samples; ++i)
        grid[i] = norm_at(i + 1 == samples ? horizon : dt * static_cast<double>(i));
    double best = *std::max_element(grid.begin(), grid.end());

    // Peaks between grid points: refine every interior local maximum near the top.
    const double cutoff = best * (1.0 - 1e-2);
    constexpr double kGolden = 0.6180339887498949;
    for (std::size_t i = 1; i + 1 < samples; ++i) {
        if (grid[i] < cutoff || grid[i] < grid[i - 1] || grid[i] < grid[i + 1]) continue;
        if (grid[i] == grid[i - 1] && grid[i] == grid[i + 1]) continue;
        double lo = dt * static_cast<double>(i - 1);
        double hi = std::min(horizon, dt * static_cast<double>(i + 1));
        double x1 = hi - kGolden * (hi - lo);
        double x2 = lo + kGolden * (hi - lo);
        double f1 = norm_at(x1);
        double f2 = norm_at(x2);
        for (int it = 0; it < 80 && hi - lo > 1e-15 * horizon; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + kGolden * (hi - lo);
                f2 = norm_at(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - kGolden * (hi - lo);
                f1 = norm_at(x1);
            }
        }
        best = std::max({best, f1, f2});
    }

    SemigroupBound out;
    out.M = std::max(1.0, best) * kSemigroupSafetyFactor;
    out.omega = 0.0;
    out.horizon = horizon;
    out.sample_count = samples;
    return out;
}

}  // namespace idie
