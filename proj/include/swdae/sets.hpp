#pragma once
//
// Reachable and unobservable subspaces of the switched jump-ODE along a
// fixed switching signal, and numerical checks of the inclusions that relate
// them to the augmented-input / augmented-output companion systems and to
// the jump-free system.
//

#include "swdae/reform.hpp"
#include "swdae/subspace.hpp"

#include <string>
#include <vector>

namespace swdae {

struct LocalReach {
    Subspace R;       // <Adiff | im Bdiff>
    Subspace Rtilde;  // R + im JumpB
};

LocalReach local_reachable(const DecoupledMode& mode, double tol = kDefaultRankTol);
// <ker Cdiff | Adiff>
Subspace local_unobservable(const DecoupledMode& mode, double tol = kDefaultRankTol);

struct ReachResult {
    // Index k holds the sets at the end of interval k, k = 0..K.
    std::vector<Subspace> M;
    std::vector<Subspace> Mtilde;
    // Whether M_K survives doubling the final interval, with the angle found.
    bool final_duration_invariant{true};
    double final_duration_angle{0.0};

    const Subspace& reachable() const { return M.back(); }
};

ReachResult reach_recursion(const JumpOdeSystem& jos, const SwitchingSignal& q, double tol = kDefaultRankTol);

struct ObsResult {
    // Index k holds N_k, k = 0..K.
    std::vector<Subspace> N;

    const Subspace& unobservable() const { return N.front(); }
    Subspace observable() const { return orth_complement(N.front()); }
};

ObsResult unobs_recursion(const JumpOdeSystem& jos, const SwitchingSignal& q, double tol = kDefaultRankTol);

struct SubspaceCheck {
    std::string label;
    ContainmentVerdict verdict;
};

struct PropertyReport {
    std::string name;
    std::vector<SubspaceCheck> checks;

    bool passed() const;
    double worst_angle() const;
};

// M_K is contained in the reachable set of the augmented-input system.
PropertyReport verify_theorem1(const JumpOdeSystem& jos, const SwitchingSignal& q, double tol_rank = kDefaultRankTol,
                               double tol_angle = kDefaultAngleTol);
// N_k equals the unobservable chain of the augmented-output system at every
// k, for the given durations and for all durations doubled.
PropertyReport verify_theorem2(const JumpOdeSystem& jos, const SwitchingSignal& q, double tol_rank = kDefaultRankTol,
                               double tol_angle = kDefaultAngleTol);
// Reachable and observable sets of the augmented system with jumps against
// the same system with every Pi_j replaced by I.
PropertyReport verify_nojump_inclusion(const JumpOdeSystem& jos, const SwitchingSignal& q,
                                       double tol_rank = kDefaultRankTol, double tol_angle = kDefaultAngleTol);

// Chains of the augmented companions, exposed for the Gramian checks.
// `with_jumps = false` replaces every Pi_j by I.
Subspace augmented_reachable(const JumpOdeSystem& jos, const SwitchingSignal& q, bool with_jumps,
                             double tol = kDefaultRankTol);
std::vector<Subspace> augmented_unobservable_chain(const JumpOdeSystem& jos, const SwitchingSignal& q,
                                                   bool with_jumps, double tol = kDefaultRankTol);

}  // namespace swdae
