#include "idie/counter_rng.hpp"
#include "idie/semigroup.hpp"

#include <doctest.h>

#include <cmath>

using namespace idie;

namespace {

// exp(A t) x for A = V diag(lambda) V^{-1}; the eigen-decomposition is given,
// not recomputed, so this does not share code with the Pade path.
Vector spectral(const Matrix& v, const Vector& lambda, double t, const Vector& x) {
    const Vector c = v.partialPivLu().solve(x);
    return v * (lambda.array() * t).exp().matrix().cwiseProduct(c);
}

Matrix random_matrix(CounterRng& rng, Index n, double lo, double hi) {
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

}  // namespace

TEST_CASE("closed-form propagators") {
    const Vector x = (Vector(2) << 0.3, -1.2).finished();
    CHECK((evolve(Matrix::Zero(2, 2), 3.7, x) - x).norm() == 0.0);

    const Matrix one = Matrix::Identity(1, 1);
    CHECK(evolve(one, 1.0, Vector::Ones(1))(0) == doctest::Approx(2.718281828459045).epsilon(1e-14));

    Matrix nil(2, 2);
    nil << 0, 1, 0, 0;
    const Vector y = evolve(nil, 1.0, (Vector(2) << 0, 1).finished());
    CHECK(y(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(y(1) == doctest::Approx(1.0).epsilon(1e-15));

    Matrix rot(2, 2);
    rot << 0, -1, 1, 0;
    const Matrix r = propagator(rot, 0.9);
    CHECK(r(0, 0) == doctest::Approx(std::cos(0.9)).epsilon(1e-14));
    CHECK(r(1, 0) == doctest::Approx(std::sin(0.9)).epsilon(1e-14));
}

TEST_CASE("shape and domain errors") {
    CHECK_THROWS_AS(propagator(Matrix::Zero(2, 3), 1.0), StructuralError);
    CHECK_THROWS_AS(propagator(Matrix::Zero(2, 2), -1.0), DomainError);
    CHECK_THROWS_AS(evolve(Matrix::Zero(2, 2), 1.0, Vector::Zero(3)), StructuralError);
    CHECK_THROWS_AS(operator_norm_bound(Matrix::Zero(1, 1), 0.0), DomainError);
}

TEST_CASE("evolve agrees with a spectral oracle") {
    CounterRng rng(11, 0);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix v = random_matrix(rng, 4, -1.0, 1.0) + 2.0 * Matrix::Identity(4, 4);
        Vector lambda(4);
        for (Index i = 0; i < 4; ++i) lambda(i) = rng.uniform(-2.0, 2.0);
        const Matrix a = v * lambda.asDiagonal() * v.inverse();
        Vector x(4);
        for (Index i = 0; i < 4; ++i) x(i) = rng.uniform(-1.0, 1.0);
        const double t = rng.uniform(0.0, 1.0);
        const Vector want = spectral(v, lambda, t, x);
        CHECK(sup_norm(evolve(a, t, x) - want) <= 1e-9 * sup_norm(want));
    }
}

TEST_CASE("semigroup law") {
    CounterRng rng(5, 1);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix a = random_matrix(rng, 3, -1.0, 1.0);
        a *= 2.0 / std::max(1.0, induced_sup_norm(a));
        Vector x(3);
        for (Index i = 0; i < 3; ++i) x(i) = rng.uniform(-5.0, 5.0);
        const double s = rng.uniform(0.0, 1.0);
        const double t = rng.uniform(0.0, 1.0);
        CHECK(sup_norm(evolve(a, s, evolve(a, t, x)) - evolve(a, s + t, x)) <= 1e-10 * (1.0 + sup_norm(x)));
    }
}

TEST_CASE("operator_norm_bound") {
    CHECK(operator_norm_bound(Matrix::Zero(2, 2), 2.0).M == doctest::Approx(1.0).epsilon(1e-6));
    const auto e2 = operator_norm_bound(Matrix::Identity(1, 1), 2.0);
    CHECK(e2.M >= std::exp(2.0));
    CHECK(e2.M <= std::exp(2.0) * (1.0 + 1e-6) * (1.0 + 1e-14));
    CHECK(e2.omega == 0.0);
    CHECK(operator_norm_bound(-Matrix::Identity(1, 1), 2.0).M == doctest::Approx(1.0).epsilon(1e-6));

    // Transient growth peaks inside the interval: ||exp(A t)|| = e^{-t} (1 + 5 t)
    // for A = [[-1, 5], [0, -1]], maximal at t = 0.8 with value 5 e^{-0.8}.
    Matrix a(2, 2);
    a << -1, 5, 0, -1;
    const double peak = 5.0 * std::exp(-0.8);
    const auto b = operator_norm_bound(a, 3.0, 16);
    CHECK(b.M >= peak);
    CHECK(b.M <= peak * (1.0 + 2e-6));
}

TEST_CASE("induced sup norm is the max absolute row sum") {
    Matrix m(2, 2);
    m << 1, -3, 2, 0.5;
    CHECK(induced_sup_norm(m) == 4.0);
}
