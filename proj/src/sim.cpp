#include "swdae/sim.hpp"

#include "swdae/expm.hpp"
#include "swdae/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace swdae {

namespace {

constexpr std::array<double, 6> kGaussNodes{-0.93246951420315202781, -0.66120938646626451366,
                                            -0.23861918608319690863, 0.23861918608319690863,
                                            0.66120938646626451366,  0.93246951420315202781};
constexpr std::array<double, 6> kGaussWeights{0.17132449237917034504, 0.36076157304813860757,
                                              0.46791393457269104739, 0.46791393457269104739,
                                              0.36076157304813860757, 0.17132449237917034504};

// Exact one-step propagator for z' = A z + B u over steps of a given length.
class Stepper {
public:
    Stepper(const Matrix& a, const Matrix& b) : a_(a), b_(b) {}

    // z(s + h) from z(s), with the convolution integral by quadrature.
    Vector step(const Vector& z, double s, double h, const InputSignal& u) const
    {
        const Entry& e = entry(h);
        Vector out = e.phi * z;
        if (b_.cols() == 0)
            return out;
        for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
            const double node = s + 0.5 * h * (1.0 + kGaussNodes[i]);
            out += e.kernels[i] * u.value(node, Side::Right);
        }
        return out;
    }

private:
    struct Entry {
        Matrix phi;
        std::array<Matrix, 6> kernels;
    };

    const Entry& entry(double h) const
    {
        auto it = cache_.find(h);
        if (it != cache_.end())
            return it->second;
        Entry e;
        e.phi = expm(a_, h);
        for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
            const double offset = 0.5 * h * (1.0 + kGaussNodes[i]);
            e.kernels[i] = (0.5 * h * kGaussWeights[i]) * (expm(a_, h - offset) * b_);
        }
        return cache_.emplace(h, std::move(e)).first->second;
    }

    const Matrix& a_;
    const Matrix& b_;
    mutable std::map<double, Entry> cache_;
};

// t_a = g_0 < ... < g_N = t_b, uniform between input breakpoints.
std::vector<double> interval_grid(double t_a, double t_b, double dt, const InputSignal& u)
{
    std::vector<double> cuts{t_a};
    for (double b : u.breakpoints_in(t_a, t_b))
        cuts.push_back(b);
    cuts.push_back(t_b);

    std::vector<double> grid{t_a};
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double len = cuts[c + 1] - cuts[c];
        const auto steps = std::max<long>(1, static_cast<long>(std::ceil(len / dt - 1e-9)));
        for (long i = 1; i < steps; ++i)
            grid.push_back(cuts[c] + len * static_cast<double>(i) / static_cast<double>(steps));
        grid.push_back(cuts[c + 1]);
    }
    return grid;
}

Vector stack_for(const InputSignal& u, int nu, double t, Side side)
{
    return nu == 0 ? Vector::Zero(0) : u.stack(t, nu, side);
}

void check_run(std::size_t mode_count, Index r, Index m, const SwitchingSignal& q, const InputSignal& u, int max_nu,
               const SimOptions& opts)
{
    q.validate(mode_count);
    if (!(opts.dt > 0.0) || !std::isfinite(opts.dt))
        fail(ErrorKind::InvalidArgument, "dt must be a positive finite number");
    if (u.channels() != m)
        fail(ErrorKind::DimensionMismatch, "input has " + std::to_string(u.channels()) + " channels, model has " +
                                               std::to_string(m) + " inputs");
    u.require_covers(q.t0, q.t_end);
    u.require_order(std::max(max_nu - 1, 0));
    if (opts.initial_state && opts.initial_state->size() != r)
        fail(ErrorKind::DimensionMismatch, "initial state has " + std::to_string(opts.initial_state->size()) +
                                               " entries, expected " + std::to_string(r));
}

int max_nu(const FlowModel& model)
{
    int nu = 0;
    for (const auto& mode : model.modes)
        nu = std::max(nu, mode.nu);
    return nu;
}

}  // namespace

FlowModel flow_model(const JumpOdeSystem& jos)
{
    FlowModel model;
    model.r = jos.n();
    model.m = jos.m();
    model.p = jos.p();
    for (const DecoupledMode& d : jos.modes()) {
        FlowMode f;
        f.A = d.Adiff;
        f.B = d.Bdiff;
        f.C = d.Cdiff;
        f.D = d.D;
        f.Pi = d.Pi;
        f.PiIn = d.Pi;
        f.JumpB = d.JumpB;
        f.ImpState = d.ImpC;
        f.ImpFull = d.ImpC;
        f.nu = d.nu;
        model.modes.push_back(std::move(f));
    }
    return model;
}

Trajectory simulate(const FlowModel& model, const SwitchingSignal& q, const InputSignal& u, const SimOptions& opts)
{
    check_run(model.modes.size(), model.r, model.m, q, u, max_nu(model), opts);

    Trajectory traj;
    Vector z = opts.initial_state.value_or(Vector::Zero(model.r));
    const std::size_t K = q.switch_count();

    for (std::size_t k = 0; k <= K; ++k) {
        const std::size_t j = q.mode(k);
        const FlowMode& cur = model.modes[j];
        const double t_a = q.time(k);
        const double t_b = k < K ? q.time(k + 1) : q.t_end;

        if (k > 0) {
            const std::size_t i = q.mode(k - 1);
            const FlowMode& prev = model.modes[i];
            SwitchRecord rec;
            rec.k = k;
            rec.t = t_a;
            rec.from = i;
            rec.to = j;
            rec.u_minus = stack_for(u, prev.nu, t_a, Side::Left);
            rec.u_plus = stack_for(u, cur.nu, t_a, Side::Right);
            rec.z_minus = z;
            rec.y_minus = prev.C * z + prev.D * rec.u_minus;

            const Vector jump_in = prev.JumpB * rec.u_minus;
            rec.z_plus = cur.Pi * z + cur.PiIn * jump_in;
            rec.y_plus = cur.C * rec.z_plus + cur.D * rec.u_plus;

            if (cur.nu > 1) {
                ImpulseRecord imp;
                imp.k = k;
                imp.t = t_a;
                const Vector own_in = cur.JumpB * rec.u_plus;
                const Vector all = cur.ImpState * z + cur.ImpFull * (jump_in - own_in);
                imp.scale = cur.ImpState.norm() * z.norm() + cur.ImpFull.norm() * (jump_in.norm() + own_in.norm());
                for (int order = 1; order < cur.nu; ++order) {
                    Vector c = all.segment((order - 1) * model.p, model.p);
                    imp.numerically_zero.push_back(c.norm() <= opts.zero_tol * imp.scale);
                    imp.coefficients.push_back(std::move(c));
                }
                traj.impulses.push_back(std::move(imp));
            }
            z = rec.z_plus;
            traj.switches.push_back(std::move(rec));
        }

        const Stepper stepper(cur.A, cur.B);
        const std::vector<double> grid = interval_grid(t_a, t_b, opts.dt, u);
        traj.samples.push_back({t_a, z, cur.C * z + cur.D * stack_for(u, cur.nu, t_a, Side::Right)});
        for (std::size_t g = 1; g < grid.size(); ++g) {
            z = stepper.step(z, grid[g - 1], grid[g] - grid[g - 1], u);
            const bool last = g + 1 == grid.size();
            if (last && k < K)
                break;
            const Side side = last ? Side::Left : Side::Right;
            traj.samples.push_back({grid[g], z, cur.C * z + cur.D * stack_for(u, cur.nu, grid[g], side)});
        }
    }
    return traj;
}

Trajectory simulate(const JumpOdeSystem& jos, const SwitchingSignal& q, const InputSignal& u, const SimOptions& opts)
{
    return simulate(flow_model(jos), q, u, opts);
}

Trajectory simulate_impulsive(const JumpOdeSystem& jos, const SwitchingSignal& q, const InputSignal& u,
                              const SimOptions& opts)
{
    check_run(jos.mode_count(), jos.n(), jos.m(), q, u, jos.max_nu(), opts);

    Trajectory traj;
    const Index m = jos.m();
    const std::size_t K = q.switch_count();
    Vector z = opts.initial_state.value_or(Vector::Zero(jos.n()));

    for (std::size_t k = 0; k <= K; ++k) {
        const std::size_t j = q.mode(k);
        const DecoupledMode& cur = jos.mode(j);
        const double t_a = q.time(k);
        const double t_b = k < K ? q.time(k + 1) : q.t_end;

        // State right after t_a: the Dirac part of the augmented input
        // contributes B~ [0; U(t_a-)] on top of the state jump Pi z(t_a-).
        Vector base = z;
        if (k > 0) {
            const std::size_t i = q.mode(k - 1);
            const Matrix& b_aug = jos.aug_input(j, i);
            SwitchRecord rec;
            rec.k = k;
            rec.t = t_a;
            rec.from = i;
            rec.to = j;
            rec.u_minus = stack_for(u, jos.mode(i).nu, t_a, Side::Left);
            rec.u_plus = stack_for(u, cur.nu, t_a, Side::Right);
            rec.z_minus = z;
            rec.y_minus = jos.mode(i).Cdiff * z + jos.mode(i).D * rec.u_minus;
            base = cur.Pi * z + b_aug.rightCols(b_aug.cols() - m) * rec.u_minus;
            rec.z_plus = base;
            rec.y_plus = cur.Cdiff * base + cur.D * rec.u_plus;
            traj.switches.push_back(std::move(rec));
        }

        // z(t) = e^{A (t - t_a)} base + convolution, the latter accumulated
        // from zero on the grid.
        const Stepper stepper(cur.Adiff, cur.Bdiff);
        const std::vector<double> grid = interval_grid(t_a, t_b, opts.dt, u);
        Vector conv = Vector::Zero(jos.n());
        traj.samples.push_back({t_a, base, cur.Cdiff * base + cur.D * stack_for(u, cur.nu, t_a, Side::Right)});
        for (std::size_t g = 1; g < grid.size(); ++g) {
            conv = stepper.step(conv, grid[g - 1], grid[g] - grid[g - 1], u);
            z = expm(cur.Adiff, grid[g] - t_a) * base + conv;
            const bool last = g + 1 == grid.size();
            if (last && k < K)
                break;
            const Side side = last ? Side::Left : Side::Right;
            traj.samples.push_back({grid[g], z, cur.Cdiff * z + cur.D * stack_for(u, cur.nu, grid[g], side)});
        }
    }
    return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    const Index r = traj.samples.empty() ? 0 : traj.samples.front().z.size();
    const Index p = traj.samples.empty() ? 0 : traj.samples.front().y.size();
    std::vector<std::string> cells{"t"};
    for (Index i = 0; i < r; ++i)
        cells.push_back("z_" + std::to_string(i + 1));
    for (Index i = 0; i < p; ++i)
        cells.push_back("y_" + std::to_string(i + 1));
    write_csv_row(os, cells);
    for (const Sample& s : traj.samples) {
        cells.assign({format_double(s.t)});
        for (Index i = 0; i < s.z.size(); ++i)
            cells.push_back(format_double(s.z(i)));
        for (Index i = 0; i < s.y.size(); ++i)
            cells.push_back(format_double(s.y(i)));
        write_csv_row(os, cells);
    }
}

void write_impulses_csv(std::ostream& os, const Trajectory& traj)
{
    Index p = 0;
    for (const auto& imp : traj.impulses)
        if (!imp.coefficients.empty())
            p = imp.coefficients.front().size();
    std::vector<std::string> cells{"t", "k", "order"};
    for (Index i = 0; i < p; ++i)
        cells.push_back("c_" + std::to_string(i + 1));
    cells.push_back("numerically_zero");
    write_csv_row(os, cells);
    for (const auto& imp : traj.impulses) {
        for (std::size_t o = 0; o < imp.coefficients.size(); ++o) {
            cells.assign({format_double(imp.t), std::to_string(imp.k), std::to_string(o + 1)});
            for (Index i = 0; i < imp.coefficients[o].size(); ++i)
                cells.push_back(format_double(imp.coefficients[o](i)));
            cells.push_back(imp.numerically_zero[o] ? "1" : "0");
            write_csv_row(os, cells);
        }
    }
}

}  // namespace swdae
