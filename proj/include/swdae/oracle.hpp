#pragma once
//
// Simulation-based cross-checks of the subspace recursions and of the
// decoupling, shared by the `verify` command and the acceptance suite.
//

#include "swdae/sets.hpp"
#include "swdae/sim.hpp"

#include <cstdint>
#include <random>

namespace swdae {

using Rng = std::mt19937_64;

// One polynomial (given degree) plus one exponential term per channel and
// per switching interval, coefficients in [-1, 1], rates in [-2, 2].
InputSignal random_input(Index channels, const SwitchingSignal& q, int degree, Rng& rng);

struct ProjectorResiduals {
    double idempotent{0.0};  // ||Pi^2 - Pi|| / ||Pi||
    double selector{0.0};    // ||PiDiff E - Pi|| / ||Pi||
    double nilpotent{0.0};   // ||Eimp^nu|| / ||Eimp||^nu
    double annihilate{0.0};  // ||Pi Eimp|| / (||Pi|| ||Eimp||)

    double worst() const;
};

ProjectorResiduals projector_residuals(const DecoupledMode& mode);

// max over samples of ||z_impulsive - z|| / max(1, ||z||)
double impulsive_equivalence_error(const JumpOdeSystem& jos, const SwitchingSignal& q, const InputSignal& u,
                                   const SimOptions& opts = {});

struct OracleOptions {
    std::size_t samples_per_dim{20};
    int input_degree{4};
    double dt{0.05};
    // Relative singular-value cut for the span of sampled states.
    double span_tol{1e-9};
};

struct ReachOracleResult {
    Index sampled_dim{0};
    Index computed_dim{0};
    // Sampled span within M_K and M_K within the sampled span.
    ContainmentVerdict sampled_in_computed;
    ContainmentVerdict computed_in_sampled;

    double worst_angle() const;
};

// Terminal states of samples_per_dim * n random-input runs against M_K.
ReachOracleResult reach_oracle(const JumpOdeSystem& jos, const SwitchingSignal& q, Rng& rng,
                               const OracleOptions& opts = {}, double tol_rank = kDefaultRankTol);

struct ObsOracleResult {
    std::size_t hidden_runs{0};
    std::size_t visible_runs{0};
    // Largest output or impulse magnitude over the runs started on N_0 basis vectors.
    double max_hidden_response{0.0};
    // Smallest (over runs) of the largest output or impulse magnitude for
    // random unit initial states with an O_q-component of norm >= 0.1.
    double min_visible_response{0.0};
};

ObsOracleResult obs_oracle(const JumpOdeSystem& jos, const SwitchingSignal& q, Rng& rng, std::size_t visible_runs,
                           const OracleOptions& opts = {}, double tol_rank = kDefaultRankTol);

}  // namespace swdae
