#include "swdae/gramian.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace swdae;

namespace {

// Entries are (t, mode) pairs with 0-based modes.
SwitchingSignal make_signal(double t0, double t_end, const std::vector<std::pair<double, std::size_t>>& entries)
{
    SwitchingSignal q;
    q.t0 = t0;
    q.t_end = t_end;
    for (const auto& [t, mode] : entries)
        q.entries.push_back({t, mode});
    return q;
}

// pieces: [(start, [[(coeffs, rate), ...] per channel])]
using TermSpec = std::pair<std::vector<double>, double>;
using PieceSpec = std::pair<double, std::vector<std::vector<TermSpec>>>;

InputSignal make_input(const std::vector<PieceSpec>& pieces, int max_order)
{
    std::vector<InputPiece> out;
    for (const auto& [start, channels] : pieces) {
        InputPiece piece;
        piece.start = start;
        for (const auto& terms : channels) {
            std::vector<InputTerm> channel;
            for (const auto& [coeffs, rate] : terms)
                channel.push_back({coeffs, rate});
            piece.channels.push_back(std::move(channel));
        }
        out.push_back(std::move(piece));
    }
    return InputSignal(std::move(out), max_order);
}

std::vector<Matrix> bases(const std::vector<Subspace>& chain)
{
    std::vector<Matrix> out;
    for (const Subspace& s : chain)
        out.push_back(s.basis());
    return out;
}

SimOptions sim_options(double dt, std::optional<Vector> initial_state)
{
    SimOptions opts;
    opts.dt = dt;
    opts.initial_state = std::move(initial_state);
    return opts;
}

py::dict trajectory_dict(const Trajectory& traj)
{
    const auto count = static_cast<Index>(traj.samples.size());
    const Index r = count ? traj.samples.front().z.size() : 0;
    const Index p = count ? traj.samples.front().y.size() : 0;
    Vector t(count);
    Matrix z(count, r);
    Matrix y(count, p);
    for (Index i = 0; i < count; ++i) {
        const Sample& s = traj.samples[static_cast<std::size_t>(i)];
        t(i) = s.t;
        z.row(i) = s.z.transpose();
        y.row(i) = s.y.transpose();
    }
    py::list switches;
    for (const SwitchRecord& sw : traj.switches) {
        py::dict d;
        d["t"] = sw.t;
        d["from_mode"] = sw.from;
        d["to_mode"] = sw.to;
        d["z_minus"] = sw.z_minus;
        d["z_plus"] = sw.z_plus;
        switches.append(d);
    }
    py::list impulses;
    for (const ImpulseRecord& imp : traj.impulses) {
        py::dict d;
        d["t"] = imp.t;
        d["coefficients"] = imp.coefficients;
        d["numerically_zero"] = imp.numerically_zero;
        impulses.append(d);
    }
    py::dict out;
    out["t"] = t;
    out["z"] = z;
    out["y"] = y;
    out["switches"] = switches;
    out["impulses"] = impulses;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Switched DAE reformulation, reachable/unobservable sets and Gramian-based reduction.";

    py::register_exception<Error>(m, "SwdaeError", PyExc_RuntimeError);

    py::class_<ModeSystem>(m, "ModeSystem")
        .def(py::init([](Matrix e, Matrix a, Matrix b, Matrix c) {
                 return ModeSystem{std::move(e), std::move(a), std::move(b), std::move(c)};
             }),
             py::arg("E"), py::arg("A"), py::arg("B"), py::arg("C"))
        .def_readonly("E", &ModeSystem::E)
        .def_readonly("A", &ModeSystem::A)
        .def_readonly("B", &ModeSystem::B)
        .def_readonly("C", &ModeSystem::C);

    py::class_<SwitchedDAE>(m, "SwitchedDAE")
        .def(py::init([](std::vector<ModeSystem> modes) { return make_switched_dae(std::move(modes)); }),
             py::arg("modes"))
        .def_readonly("modes", &SwitchedDAE::modes)
        .def_readonly("n", &SwitchedDAE::n)
        .def_readonly("m", &SwitchedDAE::m)
        .def_readonly("p", &SwitchedDAE::p);

    m.def("load_model", [](const std::filesystem::path& path) { return load_switched_dae_file(path); },
          py::arg("path"));
    m.def("load_model_json", [](const std::string& text) { return load_switched_dae(text); }, py::arg("text"));

    py::class_<DecoupledMode>(m, "DecoupledMode")
        .def_readonly("Pi", &DecoupledMode::Pi)
        .def_readonly("PiDiff", &DecoupledMode::PiDiff)
        .def_readonly("PiImp", &DecoupledMode::PiImp)
        .def_readonly("Adiff", &DecoupledMode::Adiff)
        .def_readonly("Bdiff", &DecoupledMode::Bdiff)
        .def_readonly("Cdiff", &DecoupledMode::Cdiff)
        .def_readonly("Eimp", &DecoupledMode::Eimp)
        .def_readonly("Bimp", &DecoupledMode::Bimp)
        .def_readonly("Cimp", &DecoupledMode::Cimp)
        .def_readonly("JumpB", &DecoupledMode::JumpB)
        .def_readonly("ImpC", &DecoupledMode::ImpC)
        .def_readonly("D", &DecoupledMode::D)
        .def_readonly("nu", &DecoupledMode::nu)
        .def_property_readonly("n_J", [](const DecoupledMode& d) { return d.qwf.n_j; });

    m.def("decouple", [](const ModeSystem& mode) { return decouple(mode); }, py::arg("mode"));
    m.def("is_regular", [](const Matrix& e, const Matrix& a) { return is_regular(e, a).regular; }, py::arg("E"),
          py::arg("A"));

    py::class_<JumpOdeSystem>(m, "JumpOdeSystem")
        .def_property_readonly("modes", &JumpOdeSystem::modes)
        .def_property_readonly("n", &JumpOdeSystem::n)
        .def_property_readonly("m", &JumpOdeSystem::m)
        .def_property_readonly("p", &JumpOdeSystem::p);
    m.def("build_jump_ode", [](const SwitchedDAE& sys) { return build_jump_ode(sys); }, py::arg("model"));

    py::class_<SwitchingSignal>(m, "SwitchingSignal")
        .def(py::init(&make_signal), py::arg("t0"), py::arg("t_end"), py::arg("entries"))
        .def_readonly("t0", &SwitchingSignal::t0)
        .def_readonly("t_end", &SwitchingSignal::t_end)
        .def_property_readonly("entries",
                               [](const SwitchingSignal& q) {
                                   std::vector<std::pair<double, std::size_t>> out;
                                   for (const SwitchEntry& e : q.entries)
                                       out.emplace_back(e.t, e.mode);
                                   return out;
                               })
        .def("duration", &SwitchingSignal::duration, py::arg("k"));
    m.def("load_signal", [](const std::filesystem::path& path) { return load_switching_signal_file(path); },
          py::arg("path"));

    py::enum_<Side>(m, "Side").value("Left", Side::Left).value("Right", Side::Right);
    py::class_<InputSignal>(m, "InputSignal")
        .def(py::init(&make_input), py::arg("pieces"), py::arg("max_derivative_order") = InputSignal::kUnlimitedOrder)
        .def_static("constant", &InputSignal::constant, py::arg("value"), py::arg("start") = 0.0)
        .def_static("zero", &InputSignal::zero, py::arg("channels"), py::arg("start") = 0.0)
        .def("derivative", &InputSignal::derivative, py::arg("t"), py::arg("order"), py::arg("side") = Side::Right)
        .def_property_readonly("channels", &InputSignal::channels);
    m.def("load_input", [](const std::filesystem::path& path) { return load_input_signal_file(path); },
          py::arg("path"));

    m.def(
        "simulate",
        [](const JumpOdeSystem& jos, const SwitchingSignal& q, const InputSignal& u, double dt,
           std::optional<Vector> z0) { return trajectory_dict(simulate(jos, q, u, sim_options(dt, std::move(z0)))); },
        py::arg("system"), py::arg("signal"), py::arg("input"), py::arg("dt") = 0.01,
        py::arg("initial_state") = py::none());
    m.def(
        "simulate_impulsive",
        [](const JumpOdeSystem& jos, const SwitchingSignal& q, const InputSignal& u, double dt,
           std::optional<Vector> z0) {
            return trajectory_dict(simulate_impulsive(jos, q, u, sim_options(dt, std::move(z0))));
        },
        py::arg("system"), py::arg("signal"), py::arg("input"), py::arg("dt") = 0.01,
        py::arg("initial_state") = py::none());

    m.def(
        "reach_recursion",
        [](const JumpOdeSystem& jos, const SwitchingSignal& q, double tol) {
            const ReachResult r = reach_recursion(jos, q, tol);
            py::dict out;
            out["M"] = bases(r.M);
            out["Mtilde"] = bases(r.Mtilde);
            out["final_duration_invariant"] = r.final_duration_invariant;
            return out;
        },
        py::arg("system"), py::arg("signal"), py::arg("tol_rank") = kDefaultRankTol);
    m.def(
        "unobs_recursion",
        [](const JumpOdeSystem& jos, const SwitchingSignal& q, double tol) {
            const ObsResult r = unobs_recursion(jos, q, tol);
            py::dict out;
            out["N"] = bases(r.N);
            out["observable"] = r.observable().basis();
            return out;
        },
        py::arg("system"), py::arg("signal"), py::arg("tol_rank") = kDefaultRankTol);

    py::class_<GleMatrices>(m, "GleMatrices")
        .def_readonly("Acal", &GleMatrices::Acal)
        .def_readonly("F", &GleMatrices::F)
        .def_readonly("Btilde", &GleMatrices::Btilde)
        .def_readonly("Ctilde", &GleMatrices::Ctilde);
    m.def("gle_matrices", [](const JumpOdeSystem& jos) { return gle_matrices(jos); }, py::arg("system"));

    py::class_<GramianPair>(m, "GramianPair")
        .def_readonly("P", &GramianPair::P)
        .def_readonly("Q", &GramianPair::Q)
        .def_readonly("residual_P", &GramianPair::residual_P)
        .def_readonly("residual_Q", &GramianPair::residual_Q);
    m.def(
        "solve_gle",
        [](const GleMatrices& mats, double tol, Index max_n) { return solve_gle(mats, {tol, max_n}); },
        py::arg("mats"), py::arg("tol") = GramianOptions{}.tol, py::arg("max_n") = GramianOptions{}.max_n);
    m.def(
        "solve_gle_restricted",
        [](const JumpOdeSystem& jos, double tol, Index max_n) {
            const DifferentialRestriction res = restrict_to_differential(jos, gle_matrices(jos));
            return res.lift(solve_gle(res.mats, {tol, max_n}));
        },
        py::arg("system"), py::arg("tol") = GramianOptions{}.tol, py::arg("max_n") = GramianOptions{}.max_n);

    py::class_<Balancing>(m, "Balancing")
        .def_readonly("V", &Balancing::V)
        .def_readonly("W", &Balancing::W)
        .def_readonly("hankel", &Balancing::hankel)
        .def_readonly("numerical_rank", &Balancing::numerical_rank);
    m.def("balance", &balance, py::arg("gramians"), py::arg("r"), py::arg("tol_rank") = kDefaultRankTol);
    m.def(
        "reduce_and_compare",
        [](const JumpOdeSystem& jos, const Balancing& bal, const SwitchingSignal& q, const InputSignal& u,
           double dt) {
            const ComparisonReport c = reduce_and_compare(jos, bal, q, u, sim_options(dt, std::nullopt));
            py::dict out;
            out["max_output_error"] = c.max_output_error;
            out["relative_output_error"] = c.relative_output_error();
            out["max_impulse_difference"] = c.max_impulse_difference;
            return out;
        },
        py::arg("system"), py::arg("balancing"), py::arg("signal"), py::arg("input"), py::arg("dt") = 0.01);
}
