#pragma once
//
// Coupled generalized Lyapunov equations of the jump-free switched system,
// Gramian image checks against the reachable/observable sets, and
// square-root balanced truncation of the jump-ODE system.
//

#include "swdae/reform.hpp"
#include "swdae/sets.hpp"
#include "swdae/sim.hpp"

#include <vector>

namespace swdae {

struct GramianOptions {
    // Residual bound relative to max(1, ||sum B B^T||) (resp. C^T C).
    double tol{1e-10};
    // The dense solve works on an n^2 x n^2 system.
    Index max_n{48};
};

struct GramianPair {
    Matrix P;
    Matrix Q;
    double residual_P{0.0};
    double residual_Q{0.0};
    bool operator_spectrum_ok{false};
    double min_eig_P{0.0};
    double min_eig_Q{0.0};
};

// Frobenius norm of the GLE left-hand side at X (`dual` selects the Q equation).
double gle_residual(const GleMatrices& mats, const Matrix& x, bool dual);

// Throws OperatorSingular when the Lyapunov-type operator is not invertible
// and NotPSD when a solution is indefinite beyond -1e-10 ||X||.
GramianPair solve_gle(const GleMatrices& mats, const GramianOptions& opts = {});

// Coordinates of the common consistent subspace im(Pi_j).
struct DifferentialRestriction {
    GleMatrices mats;
    Matrix basis;  // n x n_J, orthonormal, spans im(Pi_j)
    Matrix left;   // n x n_J, Pi_1^T basis; lifts covariant quantities

    // P = basis P_r basis^T, Q = left Q_r left^T.
    GramianPair lift(const GramianPair& restricted) const;
};

// Throws HeterogeneousDifferentialSubspaces unless every mode has the same
// n_J and the same im(Pi_j).
DifferentialRestriction restrict_to_differential(const JumpOdeSystem& jos, const GleMatrices& mats,
                                                 double tol_angle = kDefaultAngleTol);

struct ContainmentEntry {
    std::size_t signal{0};
    ContainmentVerdict reach;
    ContainmentVerdict observe;
};

struct ContainmentReport {
    std::vector<ContainmentEntry> entries;

    bool passed() const;
    double worst_angle() const;
};

// For every signal: M_K within im(P) and O_q within im(Q).
ContainmentReport containment_report(const JumpOdeSystem& jos, const GramianPair& gram,
                                     const std::vector<SwitchingSignal>& signals, double tol_rank = kDefaultRankTol,
                                     double tol_angle = kDefaultAngleTol);

struct Balancing {
    Matrix V;  // n x r
    Matrix W;  // n x r, W^T V = I
    Vector hankel;
    Index numerical_rank{0};
};

// Singular values of L_Q^T L_P, nonincreasing.
Vector hankel_values(const GramianPair& gram);

// Square-root method with eigenvalue-based factors. Throws RankTooLow when r
// exceeds the numerical rank of L_Q^T L_P.
Balancing balance(const GramianPair& gram, Index r, double tol_rank = kDefaultRankTol);

// Petrov-Galerkin projection of every mode. Jump inputs, feedthrough and the
// full impulse maps keep their original size.
FlowModel reduce(const JumpOdeSystem& jos, const Balancing& bal);

struct ComparisonReport {
    double max_output_error{0.0};
    double l2_output_error{0.0};
    double max_output{0.0};
    double max_impulse_difference{0.0};
    // max_j ||Pi_hat_j^2 - Pi_hat_j||
    double projector_defect{0.0};

    double relative_output_error() const { return max_output_error / std::max(1.0, max_output); }
};

ComparisonReport reduce_and_compare(const JumpOdeSystem& jos, const Balancing& bal, const SwitchingSignal& q,
                                    const InputSignal& u, const SimOptions& opts = {});

}  // namespace swdae
