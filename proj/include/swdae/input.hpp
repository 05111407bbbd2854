#pragma once
//
// Piecewise polynomial-exponential input signals with exact derivatives.
//

#include "swdae/pencil.hpp"

#include <filesystem>
#include <limits>
#include <string_view>
#include <vector>

namespace swdae {

// (c_0 + c_1 s + ... + c_d s^d) e^{rate s}, s = t - piece start
struct InputTerm {
    std::vector<double> coeffs;
    double rate{0.0};
};

struct InputPiece {
    double start{0.0};
    // channels[i] lists the terms summed into u_i.
    std::vector<std::vector<InputTerm>> channels;
};

enum class Side { Left, Right };

class InputSignal {
public:
    static constexpr int kUnlimitedOrder = std::numeric_limits<int>::max();

    InputSignal() = default;
    // Pieces must have strictly increasing starts and equal channel counts.
    // The last piece extends to `end`.
    InputSignal(std::vector<InputPiece> pieces, int max_derivative_order = kUnlimitedOrder,
                double end = std::numeric_limits<double>::infinity());

    static InputSignal zero(Index channels, double start = 0.0);
    static InputSignal constant(const Vector& value, double start = 0.0);

    Index channels() const noexcept { return channels_; }
    int max_derivative_order() const noexcept { return max_order_; }
    double start() const { return pieces_.empty() ? 0.0 : pieces_.front().start; }
    double end() const noexcept { return end_; }
    const std::vector<InputPiece>& pieces() const noexcept { return pieces_; }

    // d^order u / dt^order evaluated on the requested side of t.
    // Throws OutOfHorizon when no piece covers that side of t and
    // InvalidArgument when `order` exceeds max_derivative_order.
    Vector derivative(double t, int order, Side side = Side::Right) const;
    Vector value(double t, Side side = Side::Right) const { return derivative(t, 0, side); }
    // [u; u'; ...; u^{(count-1)}]
    Vector stack(double t, int count, Side side) const;

    // Throws InvalidArgument unless derivatives up to `order` are available.
    void require_order(int order) const;
    // Throws OutOfHorizon unless [t0, t1] is covered.
    void require_covers(double t0, double t1) const;

    // Piece starts strictly inside (t0, t1).
    std::vector<double> breakpoints_in(double t0, double t1) const;

private:
    const InputPiece& piece_at(double t, Side side) const;

    std::vector<InputPiece> pieces_;
    Index channels_{0};
    int max_order_{kUnlimitedOrder};
    double end_{std::numeric_limits<double>::infinity()};
};

// U(t) = [u; u'; ...; u^{(nu-1)}] for the given mode; empty when nu = 0.
Vector input_stack(const InputSignal& u, const DecoupledMode& mode, double t, Side side);

// {"max_derivative_order":.., "end":.., "pieces":[{"start":..,
//   "channels":[[{"coeffs":[..],"rate":..}, ..], ..]}, ..]}
// Both top-level numbers are optional.
InputSignal load_input_signal(std::string_view json_text);
InputSignal load_input_signal_file(const std::filesystem::path& path);

}  // namespace swdae
