#include "swdae/sets.hpp"

#include "swdae/expm.hpp"

#include <algorithm>

namespace swdae {

namespace {

Subspace jump_input_image(const DecoupledMode& cur, const DecoupledMode& prev, double tol)
{
    if (prev.JumpB.cols() == 0)
        return Subspace::zero(cur.n(), tol);
    return image(cur.Pi * prev.JumpB, cur.Pi.norm() * prev.scales.jump_b, tol);
}

Subspace diff_input_image(const DecoupledMode& mode, double tol)
{
    return image(mode.Bdiff, mode.scales.b_diff, tol);
}

Subspace diff_output_kernel(const DecoupledMode& mode, double tol)
{
    return kernel(mode.Cdiff, mode.scales.c_diff, tol);
}

Subspace impulse_kernel(const DecoupledMode& mode, double tol)
{
    return kernel(mode.ImpC, mode.scales.imp_c, tol);
}

Subspace flow(const DecoupledMode& mode, double t, const Subspace& l)
{
    return map(expm(mode.Adiff, t), l);
}

Subspace jump(const DecoupledMode& mode, const Subspace& l, bool with_jumps)
{
    return with_jumps ? map(mode.Pi, l) : l;
}

Subspace pull_back(const DecoupledMode& mode, const Subspace& l, bool with_jumps)
{
    return with_jumps ? preimage(mode.Pi, l) : l;
}

void require_signal(const JumpOdeSystem& jos, const SwitchingSignal& q)
{
    q.validate(jos.mode_count());
}

void add(PropertyReport& report, std::string label, ContainmentVerdict verdict)
{
    report.checks.push_back({std::move(label), verdict});
}

}  // namespace

LocalReach local_reachable(const DecoupledMode& mode, double tol)
{
    Subspace r = smallest_invariant(mode.Adiff, diff_input_image(mode, tol), mode.scales.a_diff);
    Subspace rt = mode.JumpB.cols() == 0 ? r : sum(r, image(mode.JumpB, mode.scales.jump_b, tol));
    return {std::move(r), std::move(rt)};
}

Subspace local_unobservable(const DecoupledMode& mode, double tol)
{
    return largest_invariant_in(diff_output_kernel(mode, tol), mode.Adiff, mode.scales.a_diff);
}

ReachResult reach_recursion(const JumpOdeSystem& jos, const SwitchingSignal& q, double tol)
{
    require_signal(jos, q);
    const std::size_t K = q.switch_count();
    ReachResult out;
    LocalReach first = local_reachable(jos.mode(q.mode(0)), tol);
    out.M.push_back(std::move(first.R));
    out.Mtilde.push_back(std::move(first.Rtilde));

    Subspace last_carry_source = Subspace::zero(jos.n(), tol);
    for (std::size_t k = 1; k <= K; ++k) {
        const DecoupledMode& mode = jos.mode(q.mode(k));
        const LocalReach local = local_reachable(mode, tol);
        const Subspace projected = map(mode.Pi, out.Mtilde.back());
        const Subspace carry = flow(mode, q.duration(k), projected);
        out.M.push_back(sum(local.R, carry));
        out.Mtilde.push_back(sum(local.Rtilde, carry));
        last_carry_source = projected;
    }

    if (K > 0) {
        const DecoupledMode& mode = jos.mode(q.mode(K));
        const Subspace stretched =
            sum(local_reachable(mode, tol).R, flow(mode, 2.0 * q.duration(K), last_carry_source));
        const ContainmentVerdict v = equals(stretched, out.M.back());
        out.final_duration_invariant = v.holds;
        out.final_duration_angle = v.angle;
    }
    return out;
}

ObsResult unobs_recursion(const JumpOdeSystem& jos, const SwitchingSignal& q, double tol)
{
    require_signal(jos, q);
    const std::size_t K = q.switch_count();
    std::vector<Subspace> chain(K + 1);
    chain[K] = local_unobservable(jos.mode(q.mode(K)), tol);
    for (std::size_t k = K; k-- > 0;) {
        const DecoupledMode& mode = jos.mode(q.mode(k));
        const DecoupledMode& next = jos.mode(q.mode(k + 1));
        const Subspace admissible = intersect(preimage(next.Pi, chain[k + 1]), impulse_kernel(next, tol));
        chain[k] = intersect(local_unobservable(mode, tol), flow(mode, -q.duration(k), admissible));
    }
    return {std::move(chain)};
}

Subspace augmented_reachable(const JumpOdeSystem& jos, const SwitchingSignal& q, bool with_jumps, double tol)
{
    require_signal(jos, q);
    const DecoupledMode& first = jos.mode(q.mode(0));
    Subspace m = smallest_invariant(first.Adiff, diff_input_image(first, tol), first.scales.a_diff);
    for (std::size_t k = 1; k <= q.switch_count(); ++k) {
        const DecoupledMode& mode = jos.mode(q.mode(k));
        const DecoupledMode& prev = jos.mode(q.mode(k - 1));
        const Subspace inputs = sum(diff_input_image(mode, tol), jump_input_image(mode, prev, tol));
        const Subspace local = smallest_invariant(mode.Adiff, inputs, mode.scales.a_diff);
        m = sum(local, flow(mode, q.duration(k), jump(mode, m, with_jumps)));
    }
    return m;
}

std::vector<Subspace> augmented_unobservable_chain(const JumpOdeSystem& jos, const SwitchingSignal& q,
                                                   bool with_jumps, double tol)
{
    require_signal(jos, q);
    const std::size_t K = q.switch_count();
    std::vector<Subspace> chain(K + 1);
    chain[K] = local_unobservable(jos.mode(q.mode(K)), tol);
    for (std::size_t k = K; k-- > 0;) {
        const DecoupledMode& mode = jos.mode(q.mode(k));
        const DecoupledMode& next = jos.mode(q.mode(k + 1));
        const Subspace outputs = intersect(diff_output_kernel(mode, tol), impulse_kernel(next, tol));
        const Subspace local = largest_invariant_in(outputs, mode.Adiff, mode.scales.a_diff);
        chain[k] = intersect(local, flow(mode, -q.duration(k), pull_back(next, chain[k + 1], with_jumps)));
    }
    return chain;
}

bool PropertyReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const SubspaceCheck& c) { return c.verdict.holds; });
}

double PropertyReport::worst_angle() const
{
    double worst = 0.0;
    for (const SubspaceCheck& c : checks)
        worst = std::max(worst, c.verdict.angle);
    return worst;
}

PropertyReport verify_theorem1(const JumpOdeSystem& jos, const SwitchingSignal& q, double tol_rank,
                               double tol_angle)
{
    PropertyReport report{"augmented-input reachable set contains M_K", {}};
    const ReachResult reach = reach_recursion(jos, q, tol_rank);
    const Subspace outer = augmented_reachable(jos, q, true, tol_rank);
    add(report, "M_K", contains(outer, reach.reachable(), tol_angle));
    for (std::size_t k = 0; k < reach.M.size(); ++k)
        add(report, "M_" + std::to_string(k) + " in Mtilde_" + std::to_string(k),
            contains(reach.Mtilde[k], reach.M[k], tol_angle));
    return report;
}

PropertyReport verify_theorem2(const JumpOdeSystem& jos, const SwitchingSignal& q, double tol_rank,
                               double tol_angle)
{
    PropertyReport report{"augmented-output unobservable chain equals N_k", {}};
    for (const double factor : {1.0, 2.0}) {
        const SwitchingSignal scaled = factor == 1.0 ? q : q.scaled_durations(factor);
        const ObsResult obs = unobs_recursion(jos, scaled, tol_rank);
        const std::vector<Subspace> aug = augmented_unobservable_chain(jos, scaled, true, tol_rank);
        const std::string suffix = factor == 1.0 ? "" : " (durations x2)";
        for (std::size_t k = 0; k < aug.size(); ++k)
            add(report, "N_" + std::to_string(k) + suffix, equals(aug[k], obs.N[k], tol_angle));
    }
    return report;
}

PropertyReport verify_nojump_inclusion(const JumpOdeSystem& jos, const SwitchingSignal& q, double tol_rank,
                                       double tol_angle)
{
    PropertyReport report{"jump-free system bounds reachable and observable sets", {}};
    const Subspace reach = augmented_reachable(jos, q, true, tol_rank);
    const Subspace reach_free = augmented_reachable(jos, q, false, tol_rank);
    add(report, "R in R-free", contains(reach_free, reach, tol_angle));

    const Subspace unobs = augmented_unobservable_chain(jos, q, true, tol_rank).front();
    const Subspace unobs_free = augmented_unobservable_chain(jos, q, false, tol_rank).front();
    // O within O-free is the same as N-free within N.
    add(report, "O in O-free", contains(unobs, unobs_free, tol_angle));
    return report;
}

}  // namespace swdae
