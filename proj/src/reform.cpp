#include "swdae/reform.hpp"

#include "json_util.hpp"

#include <cmath>

namespace swdae {

using detail::json;

SwitchedDAE make_switched_dae(std::vector<ModeSystem> modes, const PencilOptions& opts)
{
    if (modes.empty())
        fail(ErrorKind::InvalidArgument, "a switched model needs at least one mode");
    SwitchedDAE sys;
    sys.n = modes.front().n();
    sys.m = modes.front().m();
    sys.p = modes.front().p();
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const std::string label = "mode " + std::to_string(j + 1);
        try {
            modes[j].validate();
        } catch (const Error& e) {
            fail(e.kind(), label + ": " + e.message());
        }
        if (modes[j].n() != sys.n || modes[j].m() != sys.m || modes[j].p() != sys.p)
            fail(ErrorKind::DimensionMismatch, label + ": dimensions (n, m, p) differ from mode 1");
        const auto verdict = is_regular(modes[j].E, modes[j].A, opts);
        if (!verdict.regular)
            fail(ErrorKind::NotRegular, label + ": " + verdict.report);
    }
    sys.modes = std::move(modes);
    return sys;
}

SwitchedDAE load_switched_dae(std::string_view json_text, const PencilOptions& opts)
{
    const json doc = detail::parse_json(json_text, "model");
    const Index n = detail::as_index(detail::require_field(doc, "n", "model"), "model.n");
    const Index m = detail::as_index(detail::require_field(doc, "m", "model"), "model.m");
    const Index p = detail::as_index(detail::require_field(doc, "p", "model"), "model.p");
    const json& modes_doc = detail::require_field(doc, "modes", "model");
    if (!modes_doc.is_array() || modes_doc.empty())
        fail(ErrorKind::ParseError, "model.modes: expected a nonempty array");

    std::vector<ModeSystem> modes;
    for (std::size_t j = 0; j < modes_doc.size(); ++j) {
        const std::string ctx = "mode " + std::to_string(j + 1);
        const json& md = modes_doc[j];
        ModeSystem mode;
        mode.E = detail::as_matrix(detail::require_field(md, "E", ctx), n, n, ctx + ".E");
        mode.A = detail::as_matrix(detail::require_field(md, "A", ctx), n, n, ctx + ".A");
        mode.B = detail::as_matrix(detail::require_field(md, "B", ctx), n, m, ctx + ".B");
        mode.C = detail::as_matrix(detail::require_field(md, "C", ctx), p, n, ctx + ".C");
        modes.push_back(std::move(mode));
    }
    return make_switched_dae(std::move(modes), opts);
}

SwitchedDAE load_switched_dae_file(const std::filesystem::path& path, const PencilOptions& opts)
{
    return load_switched_dae(detail::read_text_file(path), opts);
}

double SwitchingSignal::duration(std::size_t k) const
{
    const double end = k + 1 < entries.size() ? entries[k + 1].t : t_end;
    return end - entries.at(k).t;
}

void SwitchingSignal::validate(std::size_t mode_count, bool allow_repeated_modes) const
{
    if (entries.empty())
        fail(ErrorKind::InvalidArgument, "switching signal has no entries");
    if (!std::isfinite(t0) || !std::isfinite(t_end))
        fail(ErrorKind::NonFinite, "switching signal horizon is not finite");
    if (entries.front().t != t0)
        fail(ErrorKind::InvalidArgument, "first switching entry must start at t0");
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (!std::isfinite(entries[k].t))
            fail(ErrorKind::NonFinite, "switching time " + std::to_string(k) + " is not finite");
        if (entries[k].mode >= mode_count)
            fail(ErrorKind::InvalidArgument, "switching entry " + std::to_string(k) + " names mode " +
                                                 std::to_string(entries[k].mode + 1) + " of " +
                                                 std::to_string(mode_count));
        if (k > 0) {
            if (!(entries[k].t > entries[k - 1].t))
                fail(ErrorKind::InvalidArgument, "switching times must increase strictly");
            if (!allow_repeated_modes && entries[k].mode == entries[k - 1].mode)
                fail(ErrorKind::InvalidArgument, "repeated consecutive mode at entry " + std::to_string(k));
        }
    }
    if (!(t_end > entries.back().t))
        fail(ErrorKind::OutOfHorizon, "horizon end t_end must lie after the last switching time");
}

SwitchingSignal SwitchingSignal::scaled_durations(double factor) const
{
    SwitchingSignal out = *this;
    double t = t0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        out.entries[k].t = t;
        t += factor * duration(k);
    }
    out.t_end = t;
    return out;
}

SwitchingSignal load_switching_signal(std::string_view json_text)
{
    const json doc = detail::parse_json(json_text, "signal");
    SwitchingSignal q;
    q.t0 = detail::as_double(detail::require_field(doc, "t0", "signal"), "signal.t0");
    q.t_end = detail::as_double(detail::require_field(doc, "t_end", "signal"), "signal.t_end");
    const json& entries = detail::require_field(doc, "entries", "signal");
    if (!entries.is_array())
        fail(ErrorKind::ParseError, "signal.entries: expected an array");
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const std::string ctx = "signal.entries[" + std::to_string(k) + "]";
        SwitchEntry e;
        e.t = detail::as_double(detail::require_field(entries[k], "t", ctx), ctx + ".t");
        const Index mode = detail::as_index(detail::require_field(entries[k], "mode", ctx), ctx + ".mode");
        if (mode < 1)
            fail(ErrorKind::ParseError, ctx + ".mode: modes are numbered from 1");
        e.mode = static_cast<std::size_t>(mode - 1);
        q.entries.push_back(e);
    }
    return q;
}

SwitchingSignal load_switching_signal_file(const std::filesystem::path& path)
{
    return load_switching_signal(detail::read_text_file(path));
}

JumpOdeSystem::JumpOdeSystem(std::vector<DecoupledMode> modes) : modes_(std::move(modes))
{
    const std::size_t count = modes_.size();
    aug_b_.resize(count * count);
    aug_c_.resize(count * count);
    for (std::size_t j = 0; j < count; ++j) {
        const DecoupledMode& cur = modes_[j];
        for (std::size_t i = 0; i < count; ++i) {
            const DecoupledMode& other = modes_[i];
            aug_b_[j * count + i] = hcat(cur.Bdiff, cur.Pi * other.JumpB);
            aug_c_[j * count + i] = vcat(cur.Cdiff, other.ImpC);
        }
    }
}

int JumpOdeSystem::max_nu() const noexcept
{
    int nu = 0;
    for (const auto& m : modes_)
        nu = std::max(nu, m.nu);
    return nu;
}

const Matrix& JumpOdeSystem::aug_input(std::size_t j, std::size_t i) const
{
    return aug_b_.at(j * modes_.size() + i);
}

const Matrix& JumpOdeSystem::aug_output(std::size_t j, std::size_t i) const
{
    return aug_c_.at(j * modes_.size() + i);
}

JumpOdeSystem build_jump_ode(const SwitchedDAE& sys, const PencilOptions& opts)
{
    std::vector<DecoupledMode> modes;
    modes.reserve(sys.mode_count());
    for (std::size_t j = 0; j < sys.mode_count(); ++j) {
        try {
            modes.push_back(decouple(sys.modes[j], opts));
        } catch (const Error& e) {
            fail(e.kind(), "mode " + std::to_string(j + 1) + ": " + e.message());
        }
    }
    return JumpOdeSystem(std::move(modes));
}

GleMatrices gle_matrices(const JumpOdeSystem& jos)
{
    std::vector<std::size_t> all(jos.mode_count());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = i;
    const std::vector<std::vector<std::size_t>> neighbors(jos.mode_count(), all);
    return gle_matrices(jos, neighbors, neighbors);
}

GleMatrices gle_matrices(const JumpOdeSystem& jos, const std::vector<std::vector<std::size_t>>& predecessors,
                         const std::vector<std::vector<std::size_t>>& successors)
{
    const std::size_t count = jos.mode_count();
    if (count == 0)
        fail(ErrorKind::InvalidArgument, "gle_matrices: empty system");
    if (predecessors.size() != count || successors.size() != count)
        fail(ErrorKind::DimensionMismatch, "gle_matrices: neighbor lists must have one entry per mode");

    GleMatrices g;
    g.Acal = jos.mode(0).Adiff;
    for (std::size_t j = 0; j < count; ++j) {
        const DecoupledMode& cur = jos.mode(j);
        g.F.push_back(j == 0 ? Matrix::Zero(jos.n(), jos.n()) : Matrix(cur.Adiff - g.Acal));

        Index cols = cur.Bdiff.cols();
        for (std::size_t i : predecessors[j])
            cols += jos.mode(i).JumpB.cols();
        Matrix b(jos.n(), cols);
        b.leftCols(cur.Bdiff.cols()) = cur.Bdiff;
        Index at = cur.Bdiff.cols();
        for (std::size_t i : predecessors[j]) {
            const Matrix& jump = jos.mode(i).JumpB;
            b.middleCols(at, jump.cols()) = cur.Pi * jump;
            at += jump.cols();
        }
        g.Btilde.push_back(std::move(b));

        Index rows = cur.Cdiff.rows();
        for (std::size_t i : successors[j])
            rows += jos.mode(i).ImpC.rows();
        Matrix c(rows, jos.n());
        c.topRows(cur.Cdiff.rows()) = cur.Cdiff;
        at = cur.Cdiff.rows();
        for (std::size_t i : successors[j]) {
            const Matrix& imp = jos.mode(i).ImpC;
            c.middleRows(at, imp.rows()) = imp;
            at += imp.rows();
        }
        g.Ctilde.push_back(std::move(c));
    }
    return g;
}

}  // namespace swdae
