#pragma once
// Shared fixtures for the unit and acceptance tests.

#include "swdae/input.hpp"
#include "swdae/reform.hpp"

#include <random>
#include <string>

namespace swdae::testing {

using Rng = std::mt19937_64;

inline std::string fixture(const std::string& name)
{
    return std::string(SWDAE_FIXTURES) + "/" + name;
}

inline double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Index uniform_int(Rng& rng, Index lo, Index hi)
{
    return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

inline Matrix random_matrix(Index rows, Index cols, Rng& rng)
{
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            m(i, j) = uniform(rng, -1.0, 1.0);
    return m;
}

inline Matrix random_orthogonal(Index n, Rng& rng)
{
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            m(i, j) = g(rng);
    Eigen::HouseholderQR<Matrix> qr(m);
    return qr.householderQ() * Matrix::Identity(n, n);
}

// Condition number at most 4.
inline Matrix well_conditioned(Index n, Rng& rng)
{
    Vector d(n);
    for (Index i = 0; i < n; ++i)
        d(i) = uniform(rng, 0.5, 2.0);
    return random_orthogonal(n, rng) * d.asDiagonal() * random_orthogonal(n, rng);
}

// Strictly upper triangular with entries bounded away from zero on the
// superdiagonal, so the nilpotency index equals the size.
inline Matrix nilpotent_block(Index size, Rng& rng)
{
    Matrix n = Matrix::Zero(size, size);
    for (Index i = 0; i < size; ++i)
        for (Index j = i + 1; j < size; ++j)
            n(i, j) = j == i + 1 ? uniform(rng, 0.5, 1.5) : uniform(rng, -0.5, 0.5);
    return n;
}

struct PencilSample {
    Matrix E;
    Matrix A;
    Index n_j{0};
    Index n_n{0};
};

// E = X blkdiag(I, N) Y, A = X blkdiag(J, I) Y with well-conditioned X, Y.
inline PencilSample random_regular_pencil(Index n, Index n_j, Rng& rng, double j_scale = 1.0)
{
    const Index n_n = n - n_j;
    const Matrix x = well_conditioned(n, rng);
    const Matrix y = well_conditioned(n, rng);
    Matrix e_core = Matrix::Zero(n, n);
    Matrix a_core = Matrix::Zero(n, n);
    e_core.topLeftCorner(n_j, n_j).setIdentity();
    e_core.bottomRightCorner(n_n, n_n) = nilpotent_block(n_n, rng);
    a_core.topLeftCorner(n_j, n_j) = j_scale * random_matrix(n_j, n_j, rng);
    a_core.bottomRightCorner(n_n, n_n).setIdentity();
    return {x * e_core * y, x * a_core * y, n_j, n_n};
}

inline ModeSystem random_mode(Index n, Index m, Index p, Rng& rng)
{
    // Keep at least one differential state so flows are nontrivial.
    const Index n_j = uniform_int(rng, 1, n);
    const PencilSample s = random_regular_pencil(n, n_j, rng);
    return {s.E, s.A, random_matrix(n, m, rng), random_matrix(p, n, rng)};
}

inline SwitchedDAE random_model(Rng& rng, Index n_max, std::size_t modes_max, Index n_min = 2)
{
    const Index n = uniform_int(rng, n_min, n_max);
    const Index m = uniform_int(rng, 1, 2);
    const Index p = uniform_int(rng, 1, 2);
    const auto count = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<Index>(modes_max)));
    std::vector<ModeSystem> modes;
    for (std::size_t j = 0; j < count; ++j)
        modes.push_back(random_mode(n, m, p, rng));
    return make_switched_dae(std::move(modes));
}

// Starts at 0, K in [0, k_max] switches with durations in [0.3, 1].
inline SwitchingSignal random_signal(Rng& rng, std::size_t mode_count, std::size_t k_max)
{
    SwitchingSignal q;
    q.t0 = 0.0;
    const auto K = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<Index>(k_max)));
    double t = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
        q.entries.push_back({t, static_cast<std::size_t>(uniform_int(rng, 0, static_cast<Index>(mode_count) - 1))});
        t += uniform(rng, 0.3, 1.0);
    }
    q.t_end = t;
    return q;
}

// One fresh polynomial-exponential piece per switching interval.
inline InputSignal random_input(Rng& rng, Index channels, const SwitchingSignal& q, int degree)
{
    std::vector<InputPiece> pieces;
    for (const SwitchEntry& e : q.entries) {
        InputPiece piece;
        piece.start = e.t;
        for (Index i = 0; i < channels; ++i) {
            InputTerm poly;
            for (int d = 0; d <= degree; ++d)
                poly.coeffs.push_back(uniform(rng, -1.0, 1.0));
            InputTerm wave{{uniform(rng, -1.0, 1.0)}, uniform(rng, -2.0, 2.0)};
            piece.channels.push_back({poly, wave});
        }
        pieces.push_back(std::move(piece));
    }
    return InputSignal(std::move(pieces));
}

// All modes E = I with A_j = -2 I + perturbations, so the coupled Lyapunov
// operator stays stable.
inline SwitchedDAE random_stable_ode_model(Rng& rng, Index n, std::size_t mode_count, Index m = 1, Index p = 1)
{
    const Matrix base = -2.0 * Matrix::Identity(n, n) + 0.4 * random_matrix(n, n, rng);
    std::vector<ModeSystem> modes;
    for (std::size_t j = 0; j < mode_count; ++j) {
        const Matrix a = j == 0 ? base : Matrix(base + 0.3 * random_matrix(n, n, rng));
        modes.push_back({Matrix::Identity(n, n), a, random_matrix(n, m, rng), random_matrix(p, n, rng)});
    }
    return make_switched_dae(std::move(modes));
}

inline std::vector<ModeSystem> desk_modes()
{
    ModeSystem m1;
    m1.E = Matrix{{1, 0}, {0, 0}};
    m1.A = Matrix{{-1, 0}, {0, 1}};
    m1.B = Matrix{{1}, {1}};
    m1.C = Matrix{{1, 0}};
    ModeSystem m2;
    m2.E = Matrix{{0, 1}, {0, 0}};
    m2.A = Matrix::Identity(2, 2);
    m2.B = Matrix{{0}, {1}};
    m2.C = Matrix{{1, 0}};
    return {m1, m2};
}

inline SwitchingSignal desk_signal()
{
    SwitchingSignal q;
    q.t0 = 0.0;
    q.t_end = 2.0;
    q.entries = {{0.0, 0}, {1.0, 1}};
    return q;
}

inline Matrix e(Index n, Index i)
{
    return Matrix::Identity(n, n).col(i);
}

}  // namespace swdae::testing
