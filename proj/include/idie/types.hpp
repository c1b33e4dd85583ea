#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace idie {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Argument outside the interval on which an object is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Inputs whose shapes or schedules do not line up.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Picard iteration stopped at max_iterations without meeting the tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(std::size_t segment, std::size_t iterations, double last_gap)
        : std::runtime_error("Picard iteration did not converge on segment " + std::to_string(segment) +
                             " after " + std::to_string(iterations) +
                             " iterations (last gap " + std::to_string(last_gap) + ")"),
          segment_(segment), iterations_(iterations), last_gap_(last_gap) {}

    std::size_t segment() const noexcept { return segment_; }
    std::size_t iterations() const noexcept { return iterations_; }
    double last_gap() const noexcept { return last_gap_; }

private:
    std::size_t segment_;
    std::size_t iterations_;
    double last_gap_;
};

/// Maximal-solution sweep blew up or failed to settle.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// sup norm on R^n; the only vector norm used in the library.
template <typename Derived>
typename Derived::Scalar sup_norm(const Eigen::MatrixBase<Derived>& x) {
    return x.size() == 0 ? typename Derived::Scalar(0) : x.template lpNorm<Eigen::Infinity>();
}

}  // namespace idie
