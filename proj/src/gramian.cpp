#include "swdae/gramian.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <limits>

namespace swdae {

namespace {

Matrix forcing(const GleMatrices& mats, bool dual)
{
    const Index n = mats.n();
    Matrix sum = Matrix::Zero(n, n);
    if (dual) {
        for (const Matrix& c : mats.Ctilde)
            if (c.rows() > 0)
                sum += c.transpose() * c;
    } else {
        for (const Matrix& b : mats.Btilde)
            if (b.cols() > 0)
                sum += b * b.transpose();
    }
    return sum;
}

Matrix lyapunov_operator(const GleMatrices& mats, bool dual)
{
    const Index n = mats.n();
    const Matrix a = dual ? Matrix(mats.Acal.transpose()) : mats.Acal;
    const Matrix id = Matrix::Identity(n, n);
    Matrix op = Eigen::kroneckerProduct(id, a) + Eigen::kroneckerProduct(a, id);
    for (const Matrix& f : mats.F) {
        const Matrix g = dual ? Matrix(f.transpose()) : f;
        op += Eigen::kroneckerProduct(g, g);
    }
    return op;
}

struct PsdFix {
    Matrix x;
    double min_eig{0.0};
};

PsdFix enforce_psd(const Matrix& raw, const char* which)
{
    const Matrix sym = 0.5 * (raw + raw.transpose());
    if (sym.size() == 0)
        return {sym, 0.0};
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    const Vector& lambda = eig.eigenvalues();
    const double norm = sym.norm();
    const double floor = -1e-10 * norm;
    if (lambda(0) < floor)
        fail(ErrorKind::NotPSD, std::string(which) + " is indefinite: most negative eigenvalue " +
                                    std::to_string(lambda(0)) + " against norm " + std::to_string(norm));
    if (lambda(0) >= 0.0)
        return {sym, lambda(0)};
    const Vector clipped = lambda.cwiseMax(0.0);
    Matrix fixed = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    return {0.5 * (fixed + fixed.transpose()), lambda(0)};
}

Matrix psd_factor(const Matrix& x)
{
    Eigen::SelfAdjointEigenSolver<Matrix> eig(x);
    return eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

void check_mats(const GleMatrices& mats)
{
    const Index n = mats.n();
    require_square(mats.Acal, "GLE operator");
    for (const Matrix& f : mats.F)
        if (f.rows() != n || f.cols() != n)
            fail(ErrorKind::DimensionMismatch, "GLE coupling matrix has the wrong size");
    for (const Matrix& b : mats.Btilde)
        if (b.rows() != n)
            fail(ErrorKind::DimensionMismatch, "GLE input matrix has the wrong row count");
    for (const Matrix& c : mats.Ctilde)
        if (c.cols() != n)
            fail(ErrorKind::DimensionMismatch, "GLE output matrix has the wrong column count");
}

}  // namespace

double gle_residual(const GleMatrices& mats, const Matrix& x, bool dual)
{
    const Matrix a = dual ? Matrix(mats.Acal.transpose()) : mats.Acal;
    Matrix lhs = a * x + x * a.transpose() + forcing(mats, dual);
    for (const Matrix& f : mats.F)
        lhs += dual ? Matrix(f.transpose() * x * f) : Matrix(f * x * f.transpose());
    return lhs.norm();
}

GramianPair solve_gle(const GleMatrices& mats, const GramianOptions& opts)
{
    check_mats(mats);
    const Index n = mats.n();
    if (n > opts.max_n)
        fail(ErrorKind::InvalidArgument, "GLE dimension " + std::to_string(n) + " exceeds the dense-solver cap " +
                                             std::to_string(opts.max_n));
    GramianPair out;
    if (n == 0) {
        out.P = out.Q = Matrix::Zero(0, 0);
        out.operator_spectrum_ok = true;
        return out;
    }

    for (const bool dual : {false, true}) {
        const Matrix op = lyapunov_operator(mats, dual);
        Eigen::FullPivLU<Matrix> lu(op);
        const double rcond = lu.isInvertible() ? lu.rcond() : 0.0;
        if (!(rcond > static_cast<double>(n * n) * std::numeric_limits<double>::epsilon()))
            fail(ErrorKind::OperatorSingular, std::string(dual ? "observability" : "reachability") +
                                                  " GLE operator is singular (reciprocal condition " +
                                                  std::to_string(rcond) + ")");
        const Matrix rhs = -forcing(mats, dual);
        const Vector sol = lu.solve(Eigen::Map<const Vector>(rhs.data(), n * n));
        const PsdFix fixed = enforce_psd(Eigen::Map<const Matrix>(sol.data(), n, n), dual ? "Q" : "P");
        const double residual = gle_residual(mats, fixed.x, dual);
        if (dual) {
            out.Q = fixed.x;
            out.min_eig_Q = fixed.min_eig;
            out.residual_Q = residual;
        } else {
            out.P = fixed.x;
            out.min_eig_P = fixed.min_eig;
            out.residual_P = residual;
        }
    }
    const double scale_p = std::max(1.0, forcing(mats, false).norm());
    const double scale_q = std::max(1.0, forcing(mats, true).norm());
    out.operator_spectrum_ok = out.residual_P <= opts.tol * scale_p && out.residual_Q <= opts.tol * scale_q;
    return out;
}

GramianPair DifferentialRestriction::lift(const GramianPair& restricted) const
{
    GramianPair out = restricted;
    out.P = basis * restricted.P * basis.transpose();
    out.Q = left * restricted.Q * left.transpose();
    return out;
}

DifferentialRestriction restrict_to_differential(const JumpOdeSystem& jos, const GleMatrices& mats,
                                                 double tol_angle)
{
    if (jos.mode_count() == 0)
        fail(ErrorKind::InvalidArgument, "restriction needs at least one mode");
    const DecoupledMode& first = jos.mode(0);
    const Subspace consistent = image(first.Pi, std::max(1.0, first.Pi.norm()), kDefaultRankTol);
    for (std::size_t j = 1; j < jos.mode_count(); ++j) {
        const DecoupledMode& mode = jos.mode(j);
        if (mode.qwf.n_j != first.qwf.n_j)
            fail(ErrorKind::HeterogeneousDifferentialSubspaces,
                 "mode " + std::to_string(j + 1) + " has " + std::to_string(mode.qwf.n_j) +
                     " differential states, mode 1 has " + std::to_string(first.qwf.n_j));
        const Subspace other = image(mode.Pi, std::max(1.0, mode.Pi.norm()), kDefaultRankTol);
        const ContainmentVerdict v = equals(consistent, other, tol_angle);
        if (!v.holds)
            fail(ErrorKind::HeterogeneousDifferentialSubspaces,
                 "im(Pi) of mode " + std::to_string(j + 1) + " differs from mode 1 (angle " +
                     std::to_string(v.angle) + ")");
    }

    DifferentialRestriction out;
    out.basis = consistent.basis();
    out.left = first.Pi.transpose() * out.basis;
    const Matrix& v = out.basis;
    out.mats.Acal = v.transpose() * mats.Acal * v;
    for (const Matrix& f : mats.F)
        out.mats.F.push_back(v.transpose() * f * v);
    for (const Matrix& b : mats.Btilde)
        out.mats.Btilde.push_back(v.transpose() * b);
    for (const Matrix& c : mats.Ctilde)
        out.mats.Ctilde.push_back(c * v);
    return out;
}

bool ContainmentReport::passed() const
{
    return std::all_of(entries.begin(), entries.end(),
                       [](const ContainmentEntry& e) { return e.reach.holds && e.observe.holds; });
}

double ContainmentReport::worst_angle() const
{
    double worst = 0.0;
    for (const ContainmentEntry& e : entries)
        worst = std::max({worst, e.reach.angle, e.observe.angle});
    return worst;
}

ContainmentReport containment_report(const JumpOdeSystem& jos, const GramianPair& gram,
                                     const std::vector<SwitchingSignal>& signals, double tol_rank, double tol_angle)
{
    const Subspace span_p = image(gram.P, tol_rank);
    const Subspace span_q = image(gram.Q, tol_rank);
    ContainmentReport report;
    for (std::size_t s = 0; s < signals.size(); ++s) {
        const Subspace reach = reach_recursion(jos, signals[s], tol_rank).reachable();
        const Subspace observe = unobs_recursion(jos, signals[s], tol_rank).observable();
        report.entries.push_back({s, contains(span_p, reach, tol_angle), contains(span_q, observe, tol_angle)});
    }
    return report;
}

Vector hankel_values(const GramianPair& gram)
{
    if (gram.P.rows() != gram.Q.rows())
        fail(ErrorKind::DimensionMismatch, "P and Q differ in size");
    return Eigen::JacobiSVD<Matrix>(psd_factor(gram.Q).transpose() * psd_factor(gram.P)).singularValues();
}

Balancing balance(const GramianPair& gram, Index r, double tol_rank)
{
    if (gram.P.rows() != gram.Q.rows())
        fail(ErrorKind::DimensionMismatch, "P and Q differ in size");
    if (r < 1)
        fail(ErrorKind::InvalidArgument, "reduced order must be at least 1");
    const Matrix lp = psd_factor(gram.P);
    const Matrix lq = psd_factor(gram.Q);
    Eigen::JacobiSVD<Matrix> svd(lq.transpose() * lp, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sigma = svd.singularValues();
    Balancing out;
    out.hankel = sigma;
    out.numerical_rank =
        sigma.size() == 0 || sigma(0) == 0.0 ? 0 : numerical_rank(sigma, sigma.size(), sigma.size(), sigma(0), tol_rank);
    if (r > out.numerical_rank)
        fail(ErrorKind::RankTooLow, "order " + std::to_string(r) + " exceeds the numerical rank " +
                                        std::to_string(out.numerical_rank) + " of the balancing product");
    const Vector inv_sqrt = sigma.head(r).cwiseSqrt().cwiseInverse();
    out.V = lp * svd.matrixV().leftCols(r) * inv_sqrt.asDiagonal();
    out.W = lq * svd.matrixU().leftCols(r) * inv_sqrt.asDiagonal();
    return out;
}

FlowModel reduce(const JumpOdeSystem& jos, const Balancing& bal)
{
    if (bal.V.rows() != jos.n())
        fail(ErrorKind::DimensionMismatch, "projection size does not match the system");
    const Matrix wt = bal.W.transpose();
    FlowModel out;
    out.r = bal.V.cols();
    out.m = jos.m();
    out.p = jos.p();
    for (const DecoupledMode& d : jos.modes()) {
        FlowMode f;
        f.A = wt * d.Adiff * bal.V;
        f.B = wt * d.Bdiff;
        f.C = d.Cdiff * bal.V;
        f.D = d.D;
        f.Pi = wt * d.Pi * bal.V;
        f.PiIn = wt * d.Pi;
        f.JumpB = d.JumpB;
        f.ImpState = d.ImpC * bal.V;
        f.ImpFull = d.ImpC;
        f.nu = d.nu;
        out.modes.push_back(std::move(f));
    }
    return out;
}

ComparisonReport reduce_and_compare(const JumpOdeSystem& jos, const Balancing& bal, const SwitchingSignal& q,
                                    const InputSignal& u, const SimOptions& opts)
{
    const FlowModel reduced = reduce(jos, bal);
    SimOptions full_opts = opts;
    SimOptions red_opts = opts;
    if (opts.initial_state) {
        red_opts.initial_state = Vector(bal.W.transpose() * *opts.initial_state);
    }
    const Trajectory full = simulate(jos, q, u, full_opts);
    const Trajectory red = simulate(reduced, q, u, red_opts);

    ComparisonReport report;
    const std::size_t count = std::min(full.samples.size(), red.samples.size());
    double l2 = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double err = (full.samples[i].y - red.samples[i].y).norm();
        report.max_output_error = std::max(report.max_output_error, err);
        report.max_output = std::max(report.max_output, full.samples[i].y.norm());
        if (i > 0) {
            const double h = full.samples[i].t - full.samples[i - 1].t;
            const double prev = (full.samples[i - 1].y - red.samples[i - 1].y).norm();
            l2 += 0.5 * h * (err * err + prev * prev);
        }
    }
    report.l2_output_error = std::sqrt(l2);

    for (std::size_t k = 0; k < std::min(full.impulses.size(), red.impulses.size()); ++k) {
        const auto& a = full.impulses[k].coefficients;
        const auto& b = red.impulses[k].coefficients;
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
            report.max_impulse_difference = std::max(report.max_impulse_difference, (a[i] - b[i]).norm());
    }

    for (const FlowMode& f : reduced.modes)
        report.projector_defect = std::max(report.projector_defect, (f.Pi * f.Pi - f.Pi).norm());
    return report;
}

}  // namespace swdae
