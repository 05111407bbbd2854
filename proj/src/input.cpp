#include "swdae/input.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace swdae {

using detail::json;

namespace {

// k-th derivative of p(s) e^{rate s} is q(s) e^{rate s} with q = (D + rate)^k p.
double term_derivative(const InputTerm& term, double s, int order)
{
    std::vector<double> q = term.coeffs;
    for (int k = 0; k < order && !q.empty(); ++k) {
        std::vector<double> next(q.size(), 0.0);
        for (std::size_t i = 0; i < q.size(); ++i) {
            next[i] += term.rate * q[i];
            if (i > 0)
                next[i - 1] += static_cast<double>(i) * q[i];
        }
        if (term.rate == 0.0)
            next.pop_back();
        q = std::move(next);
    }
    double poly = 0.0;
    for (auto it = q.rbegin(); it != q.rend(); ++it)
        poly = poly * s + *it;
    return term.rate == 0.0 ? poly : poly * std::exp(term.rate * s);
}

std::string time_str(double t)
{
    std::ostringstream os;
    os.precision(17);
    os << t;
    return os.str();
}

}  // namespace

InputSignal::InputSignal(std::vector<InputPiece> pieces, int max_derivative_order, double end)
    : pieces_(std::move(pieces)), max_order_(max_derivative_order), end_(end)
{
    if (pieces_.empty())
        fail(ErrorKind::InvalidArgument, "input signal has no pieces");
    if (max_order_ < 0)
        fail(ErrorKind::InvalidArgument, "max_derivative_order must be nonnegative");
    channels_ = static_cast<Index>(pieces_.front().channels.size());
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const InputPiece& piece = pieces_[k];
        if (!std::isfinite(piece.start))
            fail(ErrorKind::NonFinite, "input piece " + std::to_string(k + 1) + " has a non-finite start");
        if (k > 0 && !(piece.start > pieces_[k - 1].start))
            fail(ErrorKind::InvalidArgument, "input piece starts must be strictly increasing");
        if (static_cast<Index>(piece.channels.size()) != channels_)
            fail(ErrorKind::DimensionMismatch, "input piece " + std::to_string(k + 1) + " has " +
                                                   std::to_string(piece.channels.size()) + " channels, expected " +
                                                   std::to_string(channels_));
        for (const auto& channel : piece.channels)
            for (const auto& term : channel) {
                if (!std::isfinite(term.rate) ||
                    !std::all_of(term.coeffs.begin(), term.coeffs.end(), [](double c) { return std::isfinite(c); }))
                    fail(ErrorKind::NonFinite, "input piece " + std::to_string(k + 1) + " has non-finite terms");
            }
    }
    if (!(end_ > pieces_.back().start))
        fail(ErrorKind::InvalidArgument, "input end must lie beyond the last piece start");
}

InputSignal InputSignal::zero(Index channels, double start)
{
    InputPiece piece;
    piece.start = start;
    piece.channels.resize(static_cast<std::size_t>(channels));
    return InputSignal({std::move(piece)});
}

InputSignal InputSignal::constant(const Vector& value, double start)
{
    InputPiece piece;
    piece.start = start;
    for (Index i = 0; i < value.size(); ++i)
        piece.channels.push_back({InputTerm{{value(i)}, 0.0}});
    return InputSignal({std::move(piece)});
}

const InputPiece& InputSignal::piece_at(double t, Side side) const
{
    const bool inside = side == Side::Right ? (t >= start() && t < end_) : (t > start() && t <= end_);
    if (!inside)
        fail(ErrorKind::OutOfHorizon, "input is not defined " + std::string(side == Side::Right ? "right" : "left") +
                                          " of t = " + time_str(t));
    // Last piece whose start is <= t (right side) or < t (left side).
    auto it = side == Side::Right
                  ? std::upper_bound(pieces_.begin(), pieces_.end(), t,
                                     [](double x, const InputPiece& p) { return x < p.start; })
                  : std::lower_bound(pieces_.begin(), pieces_.end(), t,
                                     [](const InputPiece& p, double x) { return p.start < x; });
    return *std::prev(it);
}

Vector InputSignal::derivative(double t, int order, Side side) const
{
    require_order(order);
    const InputPiece& piece = piece_at(t, side);
    const double s = t - piece.start;
    Vector out = Vector::Zero(channels_);
    for (Index i = 0; i < channels_; ++i)
        for (const InputTerm& term : piece.channels[static_cast<std::size_t>(i)])
            out(i) += term_derivative(term, s, order);
    return out;
}

Vector InputSignal::stack(double t, int count, Side side) const
{
    Vector out(channels_ * count);
    for (int k = 0; k < count; ++k)
        out.segment(k * channels_, channels_) = derivative(t, k, side);
    return out;
}

void InputSignal::require_order(int order) const
{
    if (order > max_order_)
        fail(ErrorKind::InvalidArgument, "derivative of order " + std::to_string(order) +
                                             " requested but the input provides at most " +
                                             std::to_string(max_order_));
}

void InputSignal::require_covers(double t0, double t1) const
{
    if (pieces_.empty() || t0 < start() || t1 > end_)
        fail(ErrorKind::OutOfHorizon, "input covers [" + time_str(start()) + ", " + time_str(end_) +
                                          "] but [" + time_str(t0) + ", " + time_str(t1) + "] is needed");
}

std::vector<double> InputSignal::breakpoints_in(double t0, double t1) const
{
    std::vector<double> out;
    for (const InputPiece& piece : pieces_)
        if (piece.start > t0 && piece.start < t1)
            out.push_back(piece.start);
    return out;
}

Vector input_stack(const InputSignal& u, const DecoupledMode& mode, double t, Side side)
{
    if (mode.nu == 0)
        return Vector::Zero(0);
    if (u.channels() != mode.m())
        fail(ErrorKind::DimensionMismatch, "input has " + std::to_string(u.channels()) + " channels, mode has " +
                                               std::to_string(mode.m()) + " inputs");
    return u.stack(t, mode.nu, side);
}

InputSignal load_input_signal(std::string_view json_text)
{
    const json doc = detail::parse_json(json_text, "input");
    int max_order = InputSignal::kUnlimitedOrder;
    if (doc.contains("max_derivative_order"))
        max_order = static_cast<int>(detail::as_index(doc["max_derivative_order"], "input.max_derivative_order"));
    double end = std::numeric_limits<double>::infinity();
    if (doc.contains("end"))
        end = detail::as_double(doc["end"], "input.end");

    const json& pieces_doc = detail::require_field(doc, "pieces", "input");
    if (!pieces_doc.is_array() || pieces_doc.empty())
        fail(ErrorKind::ParseError, "input.pieces: expected a nonempty array");

    std::vector<InputPiece> pieces;
    for (std::size_t k = 0; k < pieces_doc.size(); ++k) {
        const std::string ctx = "input piece " + std::to_string(k + 1);
        const json& pd = pieces_doc[k];
        InputPiece piece;
        piece.start = detail::as_double(detail::require_field(pd, "start", ctx), ctx + ".start");
        const json& channels = detail::require_field(pd, "channels", ctx);
        if (!channels.is_array())
            fail(ErrorKind::ParseError, ctx + ".channels: expected an array");
        for (std::size_t i = 0; i < channels.size(); ++i) {
            const std::string cctx = ctx + ".channels[" + std::to_string(i) + "]";
            if (!channels[i].is_array())
                fail(ErrorKind::ParseError, cctx + ": expected an array of terms");
            std::vector<InputTerm> terms;
            for (const json& td : channels[i]) {
                InputTerm term;
                const json& coeffs = detail::require_field(td, "coeffs", cctx);
                if (!coeffs.is_array())
                    fail(ErrorKind::ParseError, cctx + ".coeffs: expected an array");
                for (const json& c : coeffs)
                    term.coeffs.push_back(detail::as_double(c, cctx + ".coeffs"));
                if (td.contains("rate"))
                    term.rate = detail::as_double(td["rate"], cctx + ".rate");
                terms.push_back(std::move(term));
            }
            piece.channels.push_back(std::move(terms));
        }
        pieces.push_back(std::move(piece));
    }
    return InputSignal(std::move(pieces), max_order, end);
}

InputSignal load_input_signal_file(const std::filesystem::path& path)
{
    return load_input_signal(detail::read_text_file(path));
}

}  // namespace swdae
