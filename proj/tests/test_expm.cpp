#include "swdae/expm.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace swdae;

TEST_CASE("closed-form exponentials")
{
    CHECK((expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);

    const Matrix d = expm(Matrix{{-1, 0}, {0, 0}});
    CHECK(d(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(d(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(d(0, 1)) + std::abs(d(1, 0)) == 0.0);

    const double tau = 2.75;
    const Matrix shift = expm(Matrix{{0, 1}, {0, 0}}, tau);
    CHECK((shift - Matrix{{1, tau}, {0, 1}}).norm() <= 1e-14);

    CHECK(expm(Matrix::Zero(0, 0)).size() == 0);
}

TEST_CASE("symmetric matrices match the eigen-decomposition")
{
    swdae::testing::Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const Index n = swdae::testing::uniform_int(rng, 1, 8);
        const double scale = swdae::testing::uniform(rng, 0.01, 20.0);
        const Matrix x = swdae::testing::random_matrix(n, n, rng);
        const Matrix s = scale * (x + x.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
        const Vector ex = eig.eigenvalues().array().exp();
        const Matrix oracle = eig.eigenvectors() * ex.asDiagonal() * eig.eigenvectors().transpose();
        CHECK(relative_error(expm(s), oracle) <= 1e-11 * std::max(1.0, oracle.norm()));
    }
}

TEST_CASE("nilpotent series truncates")
{
    swdae::testing::Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = swdae::testing::uniform_int(rng, 1, 6);
        const Matrix nil = 3.0 * swdae::testing::nilpotent_block(n, rng);
        Matrix series = Matrix::Identity(n, n);
        Matrix term = Matrix::Identity(n, n);
        for (Index k = 1; k < n; ++k) {
            term = term * nil / static_cast<double>(k);
            series += term;
        }
        CHECK(relative_error(expm(nil), series) <= 1e-12);
    }
}

TEST_CASE("semigroup and inverse")
{
    swdae::testing::Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const Index n = swdae::testing::uniform_int(rng, 1, 6);
        const Matrix a = swdae::testing::random_matrix(n, n, rng);
        const double s = swdae::testing::uniform(rng, 0.0, 3.0);
        const double t = swdae::testing::uniform(rng, 0.0, 3.0);
        CHECK(relative_error(expm(a, s) * expm(a, t), expm(a, s + t)) <= 1e-12);
        CHECK(relative_error(expm(a, t) * expm(a, -t), Matrix::Identity(n, n)) <= 1e-12);
    }
}

TEST_CASE("non-finite input is rejected")
{
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = std::nan("");
    CHECK_THROWS_AS(expm(a), Error);
}
