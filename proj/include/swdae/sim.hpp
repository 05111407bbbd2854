#pragma once
//
// Exact per-interval simulation of the switched ODE with jumps and impulses.
//
// Flows use the matrix exponential; the input convolution is integrated with
// 6-point Gauss-Legendre quadrature on substeps no longer than dt. Switching
// instants are always grid points: the sample at t_k holds the right limit,
// and the left limit is kept in the matching SwitchRecord.
//

#include "swdae/input.hpp"
#include "swdae/reform.hpp"

#include <optional>
#include <ostream>

namespace swdae {

// One mode of a (possibly projected) jump-ODE system in r state coordinates.
// `PiIn`, `JumpB` and `ImpFull` act on the n-dimensional space in which the
// jump inputs live; for the unreduced system r = n and PiIn = Pi.
struct FlowMode {
    Matrix A;         // r x r
    Matrix B;         // r x m
    Matrix C;         // p x r
    Matrix D;         // p x (m nu)
    Matrix Pi;        // r x r, state part of the jump
    Matrix PiIn;      // r x n, maps jump inputs into the state
    Matrix JumpB;     // n x (m nu)
    Matrix ImpState;  // p (nu-1) x r
    Matrix ImpFull;   // p (nu-1) x n
    int nu{0};
};

struct FlowModel {
    std::vector<FlowMode> modes;
    Index r{0};
    Index m{0};
    Index p{0};
};

FlowModel flow_model(const JumpOdeSystem& jos);

struct SimOptions {
    double dt{0.01};
    // z(t0+); zero when absent.
    std::optional<Vector> initial_state;
    // Impulse coefficients with norm <= zero_tol * scale are flagged.
    double zero_tol{1e-12};
};

struct Sample {
    double t{0.0};
    Vector z;
    Vector y;
};

struct SwitchRecord {
    std::size_t k{0};
    double t{0.0};
    std::size_t from{0};
    std::size_t to{0};
    Vector z_minus, z_plus;
    Vector y_minus, y_plus;
    Vector u_minus;  // U_{q_{k-1}}(t_k-)
    Vector u_plus;   // U_{q_k}(t_k+)
};

struct ImpulseRecord {
    std::size_t k{0};
    double t{0.0};
    // coefficients[i - 1] multiplies the i-th derivative of the Dirac impulse at t.
    std::vector<Vector> coefficients;
    std::vector<bool> numerically_zero;
    double scale{0.0};
};

struct Trajectory {
    std::vector<Sample> samples;
    std::vector<SwitchRecord> switches;
    std::vector<ImpulseRecord> impulses;
};

Trajectory simulate(const FlowModel& model, const SwitchingSignal& q, const InputSignal& u,
                    const SimOptions& opts = {});
Trajectory simulate(const JumpOdeSystem& jos, const SwitchingSignal& q, const InputSignal& u,
                    const SimOptions& opts = {});

// Same trajectory computed from the state-jump system with augmented input
// [u; delta_{t_k} U_{q_{k-1}}(t_k-)]: states only jump by Pi, the Dirac part
// of the input is integrated in closed form. No impulse records are produced.
Trajectory simulate_impulsive(const JumpOdeSystem& jos, const SwitchingSignal& q, const InputSignal& u,
                              const SimOptions& opts = {});

// t,z_1..z_r,y_1..y_p
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
// t,k,order,c_1..c_p,numerically_zero
void write_impulses_csv(std::ostream& os, const Trajectory& traj);

}  // namespace swdae
