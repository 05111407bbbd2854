#include "swdae/cli.hpp"

#include "json_util.hpp"
#include "swdae/gramian.hpp"
#include "swdae/io.hpp"
#include "swdae/oracle.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace swdae::cli {

namespace {

using detail::json;

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

void emit(const RunConfig& cfg, const std::string& name, const std::string& content)
{
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec)
        fail(ErrorKind::InvalidArgument, "cannot create output directory " + cfg.out_dir.string());
    atomic_write(cfg.out_dir / name, content);
}

std::string matrix_csv(const Matrix& m, const std::string& prefix)
{
    std::ostringstream os;
    write_matrix_csv(os, m, prefix);
    return os.str();
}

SimOptions step(double dt)
{
    SimOptions opts;
    opts.dt = dt;
    return opts;
}

PencilOptions pencil_options(const RunConfig& cfg)
{
    PencilOptions opts;
    opts.tol_rank = cfg.tol_rank;
    return opts;
}

struct Loaded {
    SwitchedDAE sys;
    JumpOdeSystem jos;
};

Loaded load_model(const RunConfig& cfg)
{
    SwitchedDAE sys = load_switched_dae_file(cfg.model, pencil_options(cfg));
    JumpOdeSystem jos = build_jump_ode(sys, pencil_options(cfg));
    return {std::move(sys), std::move(jos)};
}

SwitchingSignal load_signal(const RunConfig& cfg, const JumpOdeSystem& jos)
{
    SwitchingSignal q = load_switching_signal_file(cfg.signal);
    q.validate(jos.mode_count());
    return q;
}

InputSignal load_input_or_zero(const RunConfig& cfg, const JumpOdeSystem& jos, const SwitchingSignal& q)
{
    if (cfg.input.empty())
        return InputSignal::zero(jos.m(), q.t0);
    return load_input_signal_file(cfg.input);
}

// Lines go to the console and into a report file.
class Report {
public:
    explicit Report(std::ostream& out) : out_(out) {}

    void line(const std::string& text)
    {
        out_ << text << '\n';
        text_ += text;
        text_ += '\n';
    }
    const std::string& text() const noexcept { return text_; }

private:
    std::ostream& out_;
    std::string text_;
};

std::string mode_label(std::size_t j)
{
    return "mode " + std::to_string(j + 1);
}

int cmd_check(const RunConfig& cfg, std::ostream& out)
{
    const Loaded m = load_model(cfg);
    Report rep(out);
    rep.line("model: n=" + std::to_string(m.sys.n) + " m=" + std::to_string(m.sys.m) + " p=" +
             std::to_string(m.sys.p) + " modes=" + std::to_string(m.sys.mode_count()));
    for (std::size_t j = 0; j < m.jos.mode_count(); ++j) {
        const DecoupledMode& d = m.jos.mode(j);
        const ProjectorResiduals r = projector_residuals(d);
        rep.line(mode_label(j) + ": regular=yes n_J=" + std::to_string(d.qwf.n_j) + " n_N=" +
                 std::to_string(d.qwf.n_n) + " nu=" + std::to_string(d.nu) + " idempotent=" + sci(r.idempotent) +
                 " selector=" + sci(r.selector) + " nilpotent=" + sci(r.nilpotent) +
                 " annihilate=" + sci(r.annihilate));
    }
    emit(cfg, "check.txt", rep.text());
    return kOk;
}

int cmd_reform(const RunConfig& cfg, std::ostream& out)
{
    const Loaded m = load_model(cfg);
    json doc;
    doc["n"] = m.sys.n;
    doc["m"] = m.sys.m;
    doc["p"] = m.sys.p;
    doc["modes"] = json::array();
    for (const DecoupledMode& d : m.jos.modes()) {
        json mode;
        mode["E"] = detail::to_json(d.mode.E);
        mode["A"] = detail::to_json(d.mode.A);
        mode["B"] = detail::to_json(d.mode.B);
        mode["C"] = detail::to_json(d.mode.C);
        mode["n_J"] = d.qwf.n_j;
        mode["nu"] = d.nu;
        mode["Pi"] = detail::to_json(d.Pi);
        mode["PiDiff"] = detail::to_json(d.PiDiff);
        mode["PiImp"] = detail::to_json(d.PiImp);
        mode["Adiff"] = detail::to_json(d.Adiff);
        mode["Bdiff"] = detail::to_json(d.Bdiff);
        mode["Cdiff"] = detail::to_json(d.Cdiff);
        mode["Eimp"] = detail::to_json(d.Eimp);
        mode["Bimp"] = detail::to_json(d.Bimp);
        mode["Cimp"] = detail::to_json(d.Cimp);
        mode["JumpB"] = detail::to_json(d.JumpB);
        mode["ImpC"] = detail::to_json(d.ImpC);
        mode["D"] = detail::to_json(d.D);
        doc["modes"].push_back(std::move(mode));
    }
    emit(cfg, "reform.json", doc.dump(2) + "\n");
    out << "wrote " << (cfg.out_dir / "reform.json").string() << '\n';
    return kOk;
}

int cmd_reach(const RunConfig& cfg, std::ostream& out)
{
    const Loaded m = load_model(cfg);
    const SwitchingSignal q = load_signal(cfg, m.jos);
    const ReachResult reach = reach_recursion(m.jos, q, cfg.tol_rank);
    Report rep(out);
    for (std::size_t k = 0; k < reach.M.size(); ++k) {
        rep.line("k=" + std::to_string(k) + " t=" + format_double(q.time(k)) + " " + mode_label(q.mode(k)) +
                 " dim_M=" + std::to_string(reach.M[k].dim()) + " dim_Mtilde=" + std::to_string(reach.Mtilde[k].dim()));
        emit(cfg, "reach_M_" + std::to_string(k) + ".csv", matrix_csv(reach.M[k].basis(), "b"));
        emit(cfg, "reach_Mtilde_" + std::to_string(k) + ".csv", matrix_csv(reach.Mtilde[k].basis(), "b"));
    }
    rep.line(std::string("final duration doubling leaves M_K unchanged: ") +
             (reach.final_duration_invariant ? "yes" : "no") + " angle=" + sci(reach.final_duration_angle));
    emit(cfg, "reach_summary.txt", rep.text());
    return kOk;
}

int cmd_obs(const RunConfig& cfg, std::ostream& out)
{
    const Loaded m = load_model(cfg);
    const SwitchingSignal q = load_signal(cfg, m.jos);
    const ObsResult obs = unobs_recursion(m.jos, q, cfg.tol_rank);
    Report rep(out);
    for (std::size_t k = 0; k < obs.N.size(); ++k) {
        rep.line("k=" + std::to_string(k) + " t=" + format_double(q.time(k)) + " " + mode_label(q.mode(k)) +
                 " dim_N=" + std::to_string(obs.N[k].dim()));
        emit(cfg, "obs_N_" + std::to_string(k) + ".csv", matrix_csv(obs.N[k].basis(), "b"));
    }
    const Subspace visible = obs.observable();
    rep.line("dim_O=" + std::to_string(visible.dim()));
    emit(cfg, "obs_observable.csv", matrix_csv(visible.basis(), "b"));
    emit(cfg, "obs_summary.txt", rep.text());
    return kOk;
}

GramianPair gramians_for(const RunConfig& cfg, const JumpOdeSystem& jos)
{
    GramianOptions opts;
    opts.tol = cfg.tol_solver;
    const GleMatrices mats = gle_matrices(jos);
    if (!cfg.restrict_differential)
        return solve_gle(mats, opts);
    const DifferentialRestriction res = restrict_to_differential(jos, mats, cfg.tol_check);
    return res.lift(solve_gle(res.mats, opts));
}

std::string joined(const Vector& v)
{
    std::string s;
    for (Index i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + format_double(v(i));
    return s;
}

int cmd_gramians(const RunConfig& cfg, std::ostream& out)
{
    const Loaded m = load_model(cfg);
    const GramianPair g = gramians_for(cfg, m.jos);
    emit(cfg, "P.csv", matrix_csv(g.P, "c"));
    emit(cfg, "Q.csv", matrix_csv(g.Q, "c"));
    Report rep(out);
    rep.line("residual_P=" + format_double(g.residual_P));
    rep.line("residual_Q=" + format_double(g.residual_Q));
    const Vector ep = Eigen::SelfAdjointEigenSolver<Matrix>(g.P).eigenvalues();
    const Vector eq = Eigen::SelfAdjointEigenSolver<Matrix>(g.Q).eigenvalues();
    if (ep.size() > 0) {
        rep.line("eig_P=[" + format_double(ep.minCoeff()) + "," + format_double(ep.maxCoeff()) + "]");
        rep.line("eig_Q=[" + format_double(eq.minCoeff()) + "," + format_double(eq.maxCoeff()) + "]");
    }
    rep.line("hankel=" + joined(hankel_values(g)));
    rep.line(std::string("residuals_within_tol=") + (g.operator_spectrum_ok ? "yes" : "no"));
    emit(cfg, "gramians_summary.txt", rep.text());
    return g.operator_spectrum_ok ? kOk : kNumericalFailure;
}

int cmd_reduce(const RunConfig& cfg, std::ostream& out)
{
    const Loaded m = load_model(cfg);
    const SwitchingSignal q = load_signal(cfg, m.jos);
    const InputSignal u = load_input_or_zero(cfg, m.jos, q);
    const GramianPair g = gramians_for(cfg, m.jos);
    const Balancing bal = balance(g, *cfg.order, cfg.tol_rank);
    const FlowModel red = reduce(m.jos, bal);

    json doc;
    doc["r"] = red.r;
    doc["m"] = red.m;
    doc["p"] = red.p;
    doc["V"] = detail::to_json(bal.V);
    doc["W"] = detail::to_json(bal.W);
    doc["hankel"] = std::vector<double>(bal.hankel.data(), bal.hankel.data() + bal.hankel.size());
    doc["modes"] = json::array();
    for (const FlowMode& f : red.modes) {
        json mode;
        mode["A"] = detail::to_json(f.A);
        mode["B"] = detail::to_json(f.B);
        mode["C"] = detail::to_json(f.C);
        mode["D"] = detail::to_json(f.D);
        mode["Pi"] = detail::to_json(f.Pi);
        mode["PiIn"] = detail::to_json(f.PiIn);
        mode["JumpB"] = detail::to_json(f.JumpB);
        mode["ImpState"] = detail::to_json(f.ImpState);
        mode["ImpFull"] = detail::to_json(f.ImpFull);
        mode["nu"] = f.nu;
        doc["modes"].push_back(std::move(mode));
    }
    emit(cfg, "reduced_model.json", doc.dump(2) + "\n");

    const ComparisonReport cmp = reduce_and_compare(m.jos, bal, q, u, step(cfg.dt));
    Report rep(out);
    rep.line("order=" + std::to_string(red.r) + " of " + std::to_string(m.jos.n()));
    rep.line("hankel=" + joined(bal.hankel));
    rep.line("max_output_error=" + format_double(cmp.max_output_error));
    rep.line("relative_output_error=" + format_double(cmp.relative_output_error()));
    rep.line("l2_output_error=" + format_double(cmp.l2_output_error));
    rep.line("max_impulse_difference=" + format_double(cmp.max_impulse_difference));
    rep.line("projector_defect=" + format_double(cmp.projector_defect));
    emit(cfg, "comparison.txt", rep.text());
    return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out)
{
    const Loaded m = load_model(cfg);
    const SwitchingSignal q = load_signal(cfg, m.jos);
    const InputSignal u = load_input_or_zero(cfg, m.jos, q);
    const Trajectory traj = simulate(m.jos, q, u, step(cfg.dt));
    std::ostringstream states;
    write_trajectory_csv(states, traj);
    std::ostringstream impulses;
    write_impulses_csv(impulses, traj);
    emit(cfg, "trajectory.csv", states.str());
    emit(cfg, "impulses.csv", impulses.str());
    out << "samples=" << traj.samples.size() << " switches=" << traj.switches.size()
        << " impulse_records=" << traj.impulses.size() << '\n';
    return kOk;
}

class Verdicts {
public:
    explicit Verdicts(Report& rep) : rep_(rep) {}

    void check(bool ok, const std::string& what)
    {
        rep_.line(std::string(ok ? "PASS " : "FAIL ") + what);
        failed_ = failed_ || !ok;
    }
    void skip(const std::string& what) { rep_.line("SKIP " + what); }
    void info(const std::string& what) { rep_.line("INFO " + what); }
    bool failed() const noexcept { return failed_; }

private:
    Report& rep_;
    bool failed_{false};
};

void report_property(Verdicts& v, const std::string& prefix, const PropertyReport& report)
{
    for (const SubspaceCheck& c : report.checks)
        v.check(c.verdict.holds, prefix + " " + c.label + " angle=" + sci(c.verdict.angle));
}

int cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    const Loaded m = load_model(cfg);
    const SwitchingSignal q = load_signal(cfg, m.jos);
    Rng rng(cfg.seed);
    const InputSignal u = cfg.input.empty() ? random_input(m.jos.m(), q, 3, rng) : load_input_signal_file(cfg.input);

    Report rep(out);
    Verdicts v(rep);
    for (std::size_t j = 0; j < m.jos.mode_count(); ++j) {
        const double worst = projector_residuals(m.jos.mode(j)).worst();
        v.check(worst <= 1e-9, "pencil " + mode_label(j) + " worst_identity_residual=" + sci(worst));
    }

    const double equivalence = impulsive_equivalence_error(m.jos, q, u, step(cfg.dt));
    v.check(equivalence <= 1e-8, "impulsive-input equivalence max_relative_state_error=" + sci(equivalence));

    OracleOptions oracle;
    const ReachOracleResult reach = reach_oracle(m.jos, q, rng, oracle, cfg.tol_rank);
    v.check(reach.sampled_dim == reach.computed_dim && reach.worst_angle() <= 1e-6,
            "reachable-set oracle dim_sampled=" + std::to_string(reach.sampled_dim) +
                " dim_M_K=" + std::to_string(reach.computed_dim) + " angle=" + sci(reach.worst_angle()));

    const ObsOracleResult obs = obs_oracle(m.jos, q, rng, 10, oracle, cfg.tol_rank);
    v.check(obs.max_hidden_response <= 1e-8, "unobservable-set oracle runs=" + std::to_string(obs.hidden_runs) +
                                                 " max_response=" + sci(obs.max_hidden_response));
    if (obs.visible_runs > 0)
        v.check(obs.min_visible_response >= 1e-4, "observable-set oracle runs=" + std::to_string(obs.visible_runs) +
                                                      " min_peak_response=" + sci(obs.min_visible_response));
    else
        v.skip("observable-set oracle: nothing is observable along this signal");

    report_property(v, "augmented-input reach", verify_theorem1(m.jos, q, cfg.tol_rank, cfg.tol_check));
    report_property(v, "augmented-output unobs", verify_theorem2(m.jos, q, cfg.tol_rank, cfg.tol_check));
    report_property(v, "jump-free bound", verify_nojump_inclusion(m.jos, q, cfg.tol_rank, cfg.tol_check));

    const ReachResult chains = reach_recursion(m.jos, q, cfg.tol_rank);
    v.info(std::string("final duration doubling leaves M_K unchanged: ") +
           (chains.final_duration_invariant ? "yes" : "no") + " angle=" + sci(chains.final_duration_angle));

    try {
        const GramianPair g = gramians_for(cfg, m.jos);
        v.check(g.operator_spectrum_ok,
                "GLE residuals P=" + sci(g.residual_P) + " Q=" + sci(g.residual_Q));
        const ContainmentReport contain = containment_report(m.jos, g, {q}, cfg.tol_rank, cfg.tol_check);
        for (const ContainmentEntry& e : contain.entries) {
            v.check(e.reach.holds, "Gramian image contains M_K angle=" + sci(e.reach.angle));
            v.check(e.observe.holds, "Gramian image contains O_q angle=" + sci(e.observe.angle));
        }
    } catch (const Error& err) {
        if (!is_numerical(err.kind()))
            throw;
        v.skip("Gramian containment: " + std::string(to_string(err.kind())) + ": " + err.message());
    }

    emit(cfg, "verify_report.txt", rep.text());
    return v.failed() ? kPropertyFailure : kOk;
}

bool needs_signal(const std::string& command)
{
    return command == "reach" || command == "obs" || command == "reduce" || command == "simulate" ||
           command == "verify";
}

}  // namespace

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> all{"check",  "reform", "reach",    "obs",
                                              "gramians", "reduce", "simulate", "verify"};
    return all;
}

void RunConfig::validate() const
{
    const auto& all = commands();
    if (std::find(all.begin(), all.end(), command) == all.end())
        fail(ErrorKind::InvalidArgument, "unknown command '" + command + "'");
    if (!(tol_rank > 0.0) || !(tol_check > 0.0) || !(tol_solver > 0.0))
        fail(ErrorKind::InvalidArgument, "tolerances must be positive");
    if (!(dt > 0.0))
        fail(ErrorKind::InvalidArgument, "dt must be positive");
    if (order && *order < 1)
        fail(ErrorKind::InvalidArgument, "reduced order must be at least 1");
    if (model.empty())
        fail(ErrorKind::InvalidArgument, command + " needs a model file (-m)");
    if (needs_signal(command) && signal.empty())
        fail(ErrorKind::InvalidArgument, command + " needs a switching signal file (-s)");
    if (command == "reduce" && !order)
        fail(ErrorKind::InvalidArgument, "reduce needs a target order (-r)");
    if (command == "reduce" && input.empty())
        fail(ErrorKind::InvalidArgument, "reduce needs an input file (-u) for the comparison run");
}

ParseOutcome parse_arguments(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    ParseOutcome result;
    RunConfig& cfg = result.config;
    CLI::App app{"Switched descriptor systems: decoupling, subspaces, Gramians and reduction", "swdae"};
    std::string model, signal, input, out_dir = ".";
    long order = 0;
    app.add_option("command", cfg.command, "check|reform|reach|obs|gramians|reduce|simulate|verify")
        ->required()
        ->check(CLI::IsMember(commands()));
    app.add_option("-m,--model", model, "model JSON file");
    app.add_option("-s,--signal", signal, "switching signal JSON file");
    app.add_option("-u,--input", input, "input signal JSON file");
    app.add_option("--tol-rank", cfg.tol_rank, "relative rank tolerance")->check(CLI::PositiveNumber);
    app.add_option("--tol-check", cfg.tol_check, "principal-angle tolerance")->check(CLI::PositiveNumber);
    app.add_option("--tol-solver", cfg.tol_solver, "GLE residual tolerance")->check(CLI::PositiveNumber);
    app.add_option("--dt", cfg.dt, "maximum simulation substep")->check(CLI::PositiveNumber);
    CLI::Option* order_opt = app.add_option("-r,--order", order, "reduced order");
    app.add_option("--seed", cfg.seed, "seed of the randomized checks");
    app.add_flag("--restrict", cfg.restrict_differential, "solve the GLEs on the common differential subspace");
    app.add_option("-o,--out-dir", out_dir, "output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        result.exit_code = code == 0 ? kOk : kInvalidInput;
        return result;
    }
    cfg.model = model;
    cfg.signal = signal;
    cfg.input = input;
    cfg.out_dir = out_dir;
    if (order_opt->count() > 0)
        cfg.order = order;
    return result;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        config.validate();
        const std::string& c = config.command;
        if (c == "check")
            return cmd_check(config, out);
        if (c == "reform")
            return cmd_reform(config, out);
        if (c == "reach")
            return cmd_reach(config, out);
        if (c == "obs")
            return cmd_obs(config, out);
        if (c == "gramians")
            return cmd_gramians(config, out);
        if (c == "reduce")
            return cmd_reduce(config, out);
        if (c == "simulate")
            return cmd_simulate(config, out);
        return cmd_verify(config, out);
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.message() << '\n';
        return is_numerical(e.kind()) ? kNumericalFailure : kInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
}

}  // namespace swdae::cli
