#include "swdae/gramian.hpp"

#include "support.hpp"

#include <doctest.h>

#include <complex>

using namespace swdae;
namespace st = swdae::testing;
using st::e;

namespace {

// Solution of A P + P A^T + B B^T = 0 through the eigendecomposition of A.
Matrix lyapunov_oracle(const Matrix& a, const Matrix& b)
{
    using Cplx = Eigen::MatrixXcd;
    Eigen::ComplexEigenSolver<Cplx> es(a.cast<std::complex<double>>());
    const Cplx v = es.eigenvectors();
    const Cplx v_inv = v.inverse();
    const Cplx g = v_inv * b.cast<std::complex<double>>() * b.transpose().cast<std::complex<double>>() * v_inv.adjoint();
    const Eigen::VectorXcd lambda = es.eigenvalues();
    Cplx x(g.rows(), g.cols());
    for (Index i = 0; i < g.rows(); ++i)
        for (Index j = 0; j < g.cols(); ++j)
            x(i, j) = -g(i, j) / (lambda(i) + std::conj(lambda(j)));
    return (v * x * v.adjoint()).real();
}

GleMatrices scalar_mats(double a, double b, double c)
{
    GleMatrices m;
    m.Acal = Matrix::Constant(1, 1, a);
    m.F = {Matrix::Zero(1, 1)};
    m.Btilde = {Matrix::Constant(1, 1, b)};
    m.Ctilde = {Matrix::Constant(1, 1, c)};
    return m;
}

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& err) {
        return err.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
}

// E = diag(I_2, 0), A = [[J, c], [0, 1]]: every mode has im(Pi) = span(e1, e2).
SwitchedDAE shared_consistent_space_model(st::Rng& rng, std::size_t mode_count)
{
    std::vector<ModeSystem> modes;
    const Matrix base = -2.0 * Matrix::Identity(2, 2) + 0.4 * st::random_matrix(2, 2, rng);
    for (std::size_t j = 0; j < mode_count; ++j) {
        Matrix a = Matrix::Identity(3, 3);
        a.topLeftCorner(2, 2) = base + 0.3 * st::random_matrix(2, 2, rng);
        a.topRightCorner(2, 1) = st::random_matrix(2, 1, rng);
        Matrix ee = Matrix::Identity(3, 3);
        ee(2, 2) = 0.0;
        modes.push_back({ee, a, st::random_matrix(3, 1, rng), st::random_matrix(1, 3, rng)});
    }
    return make_switched_dae(std::move(modes));
}

}  // namespace

TEST_CASE("scalar Lyapunov equation")
{
    const GramianPair g = solve_gle(scalar_mats(-1.0, 1.0, 1.0));
    CHECK(g.P(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g.Q(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g.operator_spectrum_ok);
}

TEST_CASE("scalar two-mode model")
{
    const JumpOdeSystem jos = build_jump_ode(load_switched_dae_file(st::fixture("scalar_two_mode.json")));
    const GramianPair g = solve_gle(gle_matrices(jos));
    CHECK(std::abs(g.P(0, 0) - 2.0) <= 1e-12);
    CHECK(std::abs(g.Q(0, 0) - 2.0) <= 1e-12);
    CHECK(g.residual_P <= 1e-12);

    const Balancing bal = balance(g, 1);
    CHECK(bal.hankel(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(std::abs(bal.V(0, 0)) - 1.0) <= 1e-12);
    CHECK(std::abs(std::abs(bal.W(0, 0)) - 1.0) <= 1e-12);

    SwitchingSignal q;
    q.t0 = 0.0;
    q.t_end = 2.0;
    q.entries = {{0.0, 0}, {0.8, 1}, {1.3, 0}};
    CHECK(containment_report(jos, g, {q}).passed());
    const ComparisonReport cmp = reduce_and_compare(jos, bal, q, InputSignal::constant(Vector::Ones(1)), {0.05});
    CHECK(cmp.max_output_error <= 1e-8);
}

TEST_CASE("DESK operator is singular")
{
    const JumpOdeSystem jos = build_jump_ode(make_switched_dae(st::desk_modes()));
    CHECK(kind_of([&] { solve_gle(gle_matrices(jos)); }) == ErrorKind::OperatorSingular);
}

TEST_CASE("single mode reproduces the classical Gramians")
{
    st::Rng rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = st::uniform_int(rng, 1, 6);
        const SwitchedDAE sys = st::random_stable_ode_model(rng, n, 1, 2, 2);
        const JumpOdeSystem jos = build_jump_ode(sys);
        const GramianPair g = solve_gle(gle_matrices(jos));
        const ModeSystem& mode = sys.modes.front();
        CHECK(relative_error(g.P, lyapunov_oracle(mode.A, mode.B)) <= 1e-8);
        CHECK(relative_error(g.Q, lyapunov_oracle(mode.A.transpose(), mode.C.transpose())) <= 1e-8);
        CHECK(g.residual_P <= 1e-10);
        CHECK(g.residual_Q <= 1e-10);
    }
}

TEST_CASE("duality swaps P and Q")
{
    st::Rng rng(67);
    for (int trial = 0; trial < 10; ++trial) {
        const JumpOdeSystem jos = build_jump_ode(st::random_stable_ode_model(rng, 4, 3, 2, 1));
        const GleMatrices mats = gle_matrices(jos);
        GleMatrices dual;
        dual.Acal = mats.Acal.transpose();
        for (const Matrix& f : mats.F)
            dual.F.push_back(f.transpose());
        for (const Matrix& c : mats.Ctilde)
            dual.Btilde.push_back(c.transpose());
        for (const Matrix& b : mats.Btilde)
            dual.Ctilde.push_back(b.transpose());
        const GramianPair g = solve_gle(mats);
        const GramianPair h = solve_gle(dual);
        CHECK(relative_error(h.P, g.Q) <= 1e-9);
        CHECK(relative_error(h.Q, g.P) <= 1e-9);
    }
}

TEST_CASE("solutions are symmetric and PSD")
{
    st::Rng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        const JumpOdeSystem jos = build_jump_ode(st::random_stable_ode_model(rng, 5, 2));
        const GramianPair g = solve_gle(gle_matrices(jos));
        for (const Matrix* x : {&g.P, &g.Q}) {
            CHECK((*x - x->transpose()).norm() <= 1e-12 * x->norm());
            Eigen::SelfAdjointEigenSolver<Matrix> eig(*x);
            CHECK(eig.eigenvalues()(0) >= -1e-10 * x->norm());
        }
    }
}

TEST_CASE("zero inputs give a zero reachability Gramian")
{
    GleMatrices m = scalar_mats(-1.0, 0.0, 1.0);
    const GramianPair g = solve_gle(m);
    CHECK(g.P.norm() == 0.0);
    CHECK(kind_of([&] { balance(g, 1); }) == ErrorKind::RankTooLow);
}

TEST_CASE("indefinite solutions are rejected")
{
    // Unstable operator: 2 P + 1 = 0 gives P = -1/2.
    CHECK(kind_of([] { solve_gle(scalar_mats(1.0, 1.0, 1.0)); }) == ErrorKind::NotPSD);
}

TEST_CASE("dense solver cap")
{
    GramianOptions opts;
    opts.max_n = 0;
    CHECK(kind_of([&] { solve_gle(scalar_mats(-1.0, 1.0, 1.0), opts); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("restriction to the differential subspace")
{
    SUBCASE("ODE modes restrict to themselves")
    {
        st::Rng rng(73);
        const JumpOdeSystem jos = build_jump_ode(st::random_stable_ode_model(rng, 3, 2));
        const DifferentialRestriction res = restrict_to_differential(jos, gle_matrices(jos));
        CHECK(res.basis == Matrix::Identity(3, 3));
        CHECK(relative_error(res.lift(solve_gle(res.mats)).P, solve_gle(gle_matrices(jos)).P) <= 1e-12);
    }
    SUBCASE("shared semi-explicit structure gives a scalar problem")
    {
        std::vector<ModeSystem> modes;
        for (const double a : {-1.0, -2.0})
            modes.push_back({Matrix{{1, 0}, {0, 0}}, Matrix{{a, 0}, {0, 1}}, Matrix{{1}, {1}}, Matrix{{1, 1}}});
        const JumpOdeSystem jos = build_jump_ode(make_switched_dae(modes));
        CHECK(kind_of([&] { solve_gle(gle_matrices(jos)); }) == ErrorKind::OperatorSingular);
        const DifferentialRestriction res = restrict_to_differential(jos, gle_matrices(jos));
        REQUIRE(res.mats.n() == 1);
        const GramianPair g = res.lift(solve_gle(res.mats));
        CHECK(relative_error(g.P, Matrix{{2, 0}, {0, 0}}) <= 1e-12);
        CHECK(relative_error(g.Q, Matrix{{2, 0}, {0, 0}}) <= 1e-12);
    }
    SUBCASE("different consistent spaces are refused")
    {
        std::vector<ModeSystem> modes{
            {Matrix{{1, 0}, {0, 0}}, Matrix{{-1, 0}, {0, 1}}, Matrix{{1}, {1}}, Matrix{{1, 1}}},
            {Matrix{{0, 0}, {0, 1}}, Matrix{{1, 0}, {0, -1}}, Matrix{{1}, {1}}, Matrix{{1, 1}}},
        };
        const JumpOdeSystem jos = build_jump_ode(make_switched_dae(modes));
        CHECK(kind_of([&] { restrict_to_differential(jos, gle_matrices(jos)); }) ==
              ErrorKind::HeterogeneousDifferentialSubspaces);
    }
}

TEST_CASE("Gramian images contain the reachable and observable sets")
{
    st::Rng rng(79);
    for (int trial = 0; trial < 5; ++trial) {
        const JumpOdeSystem jos = build_jump_ode(st::random_stable_ode_model(rng, 4, 3));
        const GramianPair g = solve_gle(gle_matrices(jos));
        std::vector<SwitchingSignal> signals;
        for (int s = 0; s < 10; ++s)
            signals.push_back(st::random_signal(rng, jos.mode_count(), 3));
        const ContainmentReport report = containment_report(jos, g, signals);
        CHECK(report.entries.size() == signals.size());
        CHECK(report.passed());
    }
}

TEST_CASE("fewer jump neighbors never enlarge im(P)")
{
    st::Rng rng(83);
    const JumpOdeSystem jos = build_jump_ode(shared_consistent_space_model(rng, 2));
    const GleMatrices all = gle_matrices(jos);
    const GleMatrices single = gle_matrices(jos, {{1}, {0}}, {{1}, {0}});
    const DifferentialRestriction ra = restrict_to_differential(jos, all);
    const DifferentialRestriction rs = restrict_to_differential(jos, single);
    const GramianPair ga = ra.lift(solve_gle(ra.mats));
    const GramianPair gs = rs.lift(solve_gle(rs.mats));
    CHECK(contains(image(ga.P), image(gs.P)).holds);
    CHECK(contains(image(ga.Q), image(gs.Q)).holds);
}

TEST_CASE("balancing")
{
    GramianPair g;
    g.P = Matrix{{4, 0}, {0, 1e-6}};
    g.Q = g.P;
    const Balancing bal = balance(g, 1);
    CHECK(bal.hankel(0) == doctest::Approx(4.0));
    CHECK(bal.hankel(1) == doctest::Approx(1e-6));
    CHECK(std::abs(bal.V(1, 0)) <= 1e-12);
    CHECK(std::abs(bal.W(1, 0)) <= 1e-12);
    CHECK((bal.W.transpose() * bal.V - Matrix::Identity(1, 1)).norm() <= 1e-12);
    CHECK(kind_of([&] { balance(g, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("full-order balancing is an exact transform")
{
    st::Rng rng(89);
    for (int trial = 0; trial < 5; ++trial) {
        const JumpOdeSystem jos = build_jump_ode(st::random_stable_ode_model(rng, 4, 2, 1, 2));
        const GramianPair g = solve_gle(gle_matrices(jos));
        const Balancing bal = balance(g, jos.n());
        CHECK((bal.W.transpose() * bal.V - Matrix::Identity(jos.n(), jos.n())).norm() <= 1e-10);
        for (Index i = 1; i < bal.hankel.size(); ++i)
            CHECK(bal.hankel(i) <= bal.hankel(i - 1));
        const SwitchingSignal q = st::random_signal(rng, jos.mode_count(), 3);
        const ComparisonReport cmp = reduce_and_compare(jos, bal, q, st::random_input(rng, 1, q, 2), {0.05});
        CHECK(cmp.relative_output_error() <= 1e-8);
        CHECK(cmp.projector_defect <= 1e-10);
    }
}

TEST_CASE("restricted balancing of a descriptor model is exact at full differential order")
{
    st::Rng rng(97);
    for (int trial = 0; trial < 5; ++trial) {
        const JumpOdeSystem jos = build_jump_ode(shared_consistent_space_model(rng, 2));
        const DifferentialRestriction res = restrict_to_differential(jos, gle_matrices(jos));
        const GramianPair g = res.lift(solve_gle(res.mats));
        const Balancing bal = balance(g, 2);
        const SwitchingSignal q = st::random_signal(rng, jos.mode_count(), 3);
        const ComparisonReport cmp = reduce_and_compare(jos, bal, q, st::random_input(rng, 1, q, 2), {0.05});
        CHECK(cmp.relative_output_error() <= 1e-8);
        CHECK(cmp.max_impulse_difference <= 1e-8);
        CHECK(cmp.projector_defect <= 1e-10);
    }
}

TEST_CASE("truncating a negligible Hankel value")
{
    // Balanced by construction: with A symmetric and C = B^T both Lyapunov
    // equations read A S + S A = -b b^T for S = diag(2, 1e-8).
    const Vector sigma{{2.0, 1e-8}};
    const Vector b{{1.0, std::sqrt(2e-8)}};
    Matrix a(2, 2);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j)
            a(i, j) = -b(i) * b(j) / (sigma(i) + sigma(j));
    ModeSystem mode{Matrix::Identity(2, 2), a, b, b.transpose()};
    const JumpOdeSystem jos = build_jump_ode(make_switched_dae({mode}));
    const GramianPair g = solve_gle(gle_matrices(jos));
    const Balancing bal = balance(g, 1);
    CHECK(bal.hankel(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(bal.hankel(1) == doctest::Approx(1e-8).epsilon(1e-6));
    SwitchingSignal q;
    q.t0 = 0.0;
    q.t_end = 10.0;
    q.entries = {{0.0, 0}};
    const ComparisonReport cmp = reduce_and_compare(jos, bal, q, InputSignal::constant(Vector::Ones(1)), {0.05});
    CHECK(cmp.relative_output_error() <= 1e-5);
}
