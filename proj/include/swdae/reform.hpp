#pragma once
//
// Switched descriptor model, switching signals, and the derived system
// families: the switched ODE with jumps/impulses, its augmented-input and
// augmented-output companions, and the per-mode data of the generalized
// Lyapunov equations.
//

#include "swdae/pencil.hpp"

#include <cstddef>
#include <filesystem>
#include <string_view>
#include <vector>

namespace swdae {

struct SwitchedDAE {
    std::vector<ModeSystem> modes;
    Index n{0};
    Index m{0};
    Index p{0};

    std::size_t mode_count() const noexcept { return modes.size(); }
};

// Validates shared dimensions and regularity of every mode.
SwitchedDAE make_switched_dae(std::vector<ModeSystem> modes, const PencilOptions& opts = {});

// Model document: {"n":..,"m":..,"p":..,"modes":[{"E":[[..]],"A":..,"B":..,"C":..}, ..]}
// Unknown keys are ignored, so decoupled exports can be read back in.
SwitchedDAE load_switched_dae(std::string_view json_text, const PencilOptions& opts = {});
SwitchedDAE load_switched_dae_file(const std::filesystem::path& path, const PencilOptions& opts = {});

struct SwitchEntry {
    double t{0.0};
    std::size_t mode{0};  // 0-based
};

// q(t) = entries[k].mode on [entries[k].t, entries[k+1].t), the last entry
// holding until t_end.
struct SwitchingSignal {
    double t0{0.0};
    double t_end{1.0};
    std::vector<SwitchEntry> entries;

    // K: number of switching instants after t0.
    std::size_t switch_count() const noexcept { return entries.empty() ? 0 : entries.size() - 1; }
    double time(std::size_t k) const { return entries.at(k).t; }
    std::size_t mode(std::size_t k) const { return entries.at(k).mode; }
    // tau_k = t_{k+1} - t_k with t_{K+1} = t_end.
    double duration(std::size_t k) const;

    // Throws InvalidArgument for malformed entries, OutOfHorizon when
    // t_end does not lie beyond the last switch.
    void validate(std::size_t mode_count, bool allow_repeated_modes = true) const;

    // Same modes, every interval (including the last) stretched by `factor`.
    SwitchingSignal scaled_durations(double factor) const;
};

// Signal document: {"t0":..,"t_end":..,"entries":[{"t":..,"mode":1}, ..]} with 1-based modes.
SwitchingSignal load_switching_signal(std::string_view json_text);
SwitchingSignal load_switching_signal_file(const std::filesystem::path& path);

class JumpOdeSystem {
public:
    JumpOdeSystem() = default;
    explicit JumpOdeSystem(std::vector<DecoupledMode> modes);

    const std::vector<DecoupledMode>& modes() const noexcept { return modes_; }
    const DecoupledMode& mode(std::size_t j) const { return modes_.at(j); }
    std::size_t mode_count() const noexcept { return modes_.size(); }
    Index n() const noexcept { return modes_.empty() ? 0 : modes_.front().n(); }
    Index m() const noexcept { return modes_.empty() ? 0 : modes_.front().m(); }
    Index p() const noexcept { return modes_.empty() ? 0 : modes_.front().p(); }
    int max_nu() const noexcept;

    // [Bdiff_j, Pi_j JumpB_i] for current mode j and predecessor i.
    const Matrix& aug_input(std::size_t j, std::size_t i) const;
    // [Cdiff_j; ImpC_i] for current mode j and successor i.
    const Matrix& aug_output(std::size_t j, std::size_t i) const;

private:
    std::vector<DecoupledMode> modes_;
    std::vector<Matrix> aug_b_;
    std::vector<Matrix> aug_c_;
};

JumpOdeSystem build_jump_ode(const SwitchedDAE& sys, const PencilOptions& opts = {});

struct GleMatrices {
    Matrix Acal;                 // A_1^diff
    std::vector<Matrix> F;       // A_j^diff - A_1^diff
    std::vector<Matrix> Btilde;  // [Bdiff_j, Pi_j JumpB_i for each listed predecessor i]
    std::vector<Matrix> Ctilde;  // [Cdiff_j; ImpC_i for each listed successor i]

    Index n() const noexcept { return Acal.rows(); }
};

// Every mode is treated as a potential predecessor and successor of every
// mode (itself included).
GleMatrices gle_matrices(const JumpOdeSystem& jos);
// Explicit neighbor lists: predecessors[j] / successors[j] for mode j.
GleMatrices gle_matrices(const JumpOdeSystem& jos, const std::vector<std::vector<std::size_t>>& predecessors,
                         const std::vector<std::vector<std::size_t>>& successors);

}  // namespace swdae
