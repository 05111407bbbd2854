#include "swdae/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swdae {

namespace {

double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vector random_unit(Index n, Rng& rng)
{
    std::normal_distribution<double> g;
    Vector v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = g(rng);
    return v / v.norm();
}

double peak_response(const Trajectory& traj)
{
    double peak = 0.0;
    for (const Sample& s : traj.samples)
        peak = std::max(peak, s.y.lpNorm<Eigen::Infinity>());
    for (const ImpulseRecord& imp : traj.impulses)
        for (const Vector& c : imp.coefficients)
            peak = std::max(peak, c.size() ? c.lpNorm<Eigen::Infinity>() : 0.0);
    return peak;
}

SimOptions step(double dt)
{
    SimOptions opts;
    opts.dt = dt;
    return opts;
}

}  // namespace

InputSignal random_input(Index channels, const SwitchingSignal& q, int degree, Rng& rng)
{
    std::vector<InputPiece> pieces;
    for (const SwitchEntry& entry : q.entries) {
        InputPiece piece;
        piece.start = entry.t;
        for (Index i = 0; i < channels; ++i) {
            InputTerm poly;
            for (int d = 0; d <= degree; ++d)
                poly.coeffs.push_back(uniform(rng, -1.0, 1.0));
            const InputTerm wave{{uniform(rng, -1.0, 1.0)}, uniform(rng, -2.0, 2.0)};
            piece.channels.push_back({poly, wave});
        }
        pieces.push_back(std::move(piece));
    }
    return InputSignal(std::move(pieces));
}

double ProjectorResiduals::worst() const
{
    return std::max({idempotent, selector, nilpotent, annihilate});
}

ProjectorResiduals projector_residuals(const DecoupledMode& d)
{
    const double pi = std::max(1.0, d.Pi.norm());
    const double eimp = std::max(1.0, d.Eimp.norm());
    ProjectorResiduals r;
    r.idempotent = (d.Pi * d.Pi - d.Pi).norm() / pi;
    r.selector = (d.PiDiff * d.mode.E - d.Pi).norm() / pi;
    r.nilpotent = matrix_power(d.Eimp, std::max(d.nu, 1)).norm() / std::pow(eimp, std::max(d.nu, 1));
    r.annihilate = (d.Pi * d.Eimp).norm() / (pi * eimp);
    return r;
}

double impulsive_equivalence_error(const JumpOdeSystem& jos, const SwitchingSignal& q, const InputSignal& u,
                                   const SimOptions& opts)
{
    const Trajectory a = simulate(jos, q, u, opts);
    const Trajectory b = simulate_impulsive(jos, q, u, opts);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        worst = std::max(worst, relative_error(b.samples[i].z, a.samples[i].z));
    return worst;
}

double ReachOracleResult::worst_angle() const
{
    return std::max(sampled_in_computed.angle, computed_in_sampled.angle);
}

ReachOracleResult reach_oracle(const JumpOdeSystem& jos, const SwitchingSignal& q, Rng& rng,
                               const OracleOptions& opts, double tol_rank)
{
    const Index n = jos.n();
    const auto runs = static_cast<Index>(opts.samples_per_dim) * std::max<Index>(n, 1);
    Matrix finals(n, runs);
    for (Index i = 0; i < runs; ++i) {
        const InputSignal u = random_input(jos.m(), q, opts.input_degree, rng);
        finals.col(i) = simulate(jos, q, u, step(opts.dt)).samples.back().z;
    }
    Eigen::JacobiSVD<Matrix> svd(finals);
    const double reference = std::max(1.0, svd.singularValues().size() ? svd.singularValues()(0) : 0.0);
    const Subspace sampled = image(finals, reference, opts.span_tol);
    const Subspace computed = reach_recursion(jos, q, tol_rank).reachable();

    ReachOracleResult r;
    r.sampled_dim = sampled.dim();
    r.computed_dim = computed.dim();
    r.sampled_in_computed = contains(computed, sampled, 1e-6);
    r.computed_in_sampled = contains(sampled, computed, 1e-6);
    return r;
}

ObsOracleResult obs_oracle(const JumpOdeSystem& jos, const SwitchingSignal& q, Rng& rng, std::size_t visible_runs,
                           const OracleOptions& opts, double tol_rank)
{
    const ObsResult obs = unobs_recursion(jos, q, tol_rank);
    const Subspace& hidden = obs.unobservable();
    const Subspace visible = obs.observable();
    const InputSignal rest = InputSignal::zero(jos.m(), q.t0);

    auto run_from = [&](const Vector& z0) {
        SimOptions sim = step(opts.dt);
        sim.initial_state = z0;
        return peak_response(simulate(jos, q, rest, sim));
    };

    ObsOracleResult r;
    for (Index i = 0; i < hidden.dim(); ++i) {
        r.max_hidden_response = std::max(r.max_hidden_response, run_from(hidden.basis().col(i)));
        ++r.hidden_runs;
    }
    if (visible.is_zero())
        return r;

    r.min_visible_response = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < visible_runs; ++i) {
        const double alpha = uniform(rng, 0.1, 1.0);
        Vector z0 = alpha * visible.basis() * random_unit(visible.dim(), rng);
        if (!hidden.is_zero())
            z0 += std::sqrt(1.0 - alpha * alpha) * hidden.basis() * random_unit(hidden.dim(), rng);
        r.min_visible_response = std::min(r.min_visible_response, run_from(z0));
        ++r.visible_runs;
    }
    return r;
}

}  // namespace swdae
