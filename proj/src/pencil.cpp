#include "swdae/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace swdae {

namespace {

std::string shape(const Matrix& m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_pencil(const Matrix& e, const Matrix& a)
{
    require_square(e, "E");
    require_square(a, "A");
    if (e.rows() != a.rows())
        fail(ErrorKind::DimensionMismatch, "E is " + shape(e) + " but A is " + shape(a));
    require_finite(e, "E");
    require_finite(a, "A");
}

int nilpotency_index(const Matrix& n, double tol)
{
    if (n.rows() == 0)
        return 0;
    const double base = std::max(1.0, n.norm());
    Matrix power = n;
    double bound = base;
    for (int k = 1; k <= n.rows() + 1; ++k) {
        if (power.norm() <= tol * bound)
            return k;
        power = power * n;
        bound *= base;
    }
    fail(ErrorKind::IllConditionedBasis,
         "nilpotent block of size " + std::to_string(n.rows()) + " is not numerically nilpotent");
}

}  // namespace

void ModeSystem::validate() const
{
    require_square(E, "E");
    require_square(A, "A");
    const Index n = A.rows();
    if (E.rows() != n)
        fail(ErrorKind::DimensionMismatch, "E is " + shape(E) + " but A is " + shape(A));
    if (B.rows() != n)
        fail(ErrorKind::DimensionMismatch, "B is " + shape(B) + ", expected " + std::to_string(n) + " rows");
    if (C.cols() != n)
        fail(ErrorKind::DimensionMismatch, "C is " + shape(C) + ", expected " + std::to_string(n) + " columns");
    require_finite(E, "E");
    require_finite(A, "A");
    require_finite(B, "B");
    require_finite(C, "C");
}

RegularityVerdict is_regular(const Matrix& e, const Matrix& a, const PencilOptions& opts)
{
    require_pencil(e, a);
    const Index n = e.rows();
    RegularityVerdict verdict;
    if (n == 0) {
        verdict.regular = true;
        verdict.min_relative_sv = 1.0;
        verdict.report = "empty pencil";
        return verdict;
    }

    const double sigma = e.norm() + a.norm();
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> shift_dist(-2.0 * sigma, 2.0 * sigma);

    double best = -1.0;
    for (Index i = 0; i <= n; ++i) {
        const double s = shift_dist(rng);
        const Matrix probe = s * e - a;
        Eigen::JacobiSVD<Matrix> svd(probe);
        const Vector& sv = svd.singularValues();
        const double rel = sv(0) > 0.0 ? sv(n - 1) / sv(0) : 0.0;
        ++verdict.probes;
        if (rel > best) {
            best = rel;
            verdict.shift = s;
        }
        if (sv(0) > 0.0 && numerical_rank(sv, n, n, sv(0), opts.tol_rank) == n) {
            verdict.regular = true;
            verdict.shift = s;
            verdict.min_relative_sv = rel;
            std::ostringstream os;
            os << "det(sE - A) != 0 at s = " << s << " (sigma_min/sigma_max = " << rel << ")";
            verdict.report = os.str();
            return verdict;
        }
    }
    verdict.min_relative_sv = std::max(best, 0.0);
    std::ostringstream os;
    os << "sE - A rank deficient at all " << verdict.probes
       << " probe shifts (best sigma_min/sigma_max = " << verdict.min_relative_sv << ")";
    verdict.report = os.str();
    return verdict;
}

WongLimits wong_sequences(const Matrix& e, const Matrix& a, const PencilOptions& opts)
{
    const auto verdict = is_regular(e, a, opts);
    if (!verdict.regular)
        fail(ErrorKind::NotRegular, verdict.report);

    const Index n = e.rows();
    WongLimits limits;

    Subspace v = Subspace::full(n, opts.tol_rank);
    for (Index i = 0; i <= n; ++i) {
        Subspace next = preimage(a, map(e, v));
        if (next.dim() == v.dim())
            break;
        v = std::move(next);
        ++limits.v_steps;
    }

    Subspace w = Subspace::zero(n, opts.tol_rank);
    for (Index i = 0; i <= n; ++i) {
        Subspace next = preimage(e, map(a, w));
        if (next.dim() == w.dim())
            break;
        w = std::move(next);
        ++limits.w_steps;
    }

    if (v.dim() + w.dim() != n)
        fail(ErrorKind::NotRegular, "Wong limits have dimensions " + std::to_string(v.dim()) + " + " +
                                        std::to_string(w.dim()) + " != " + std::to_string(n));
    limits.v = std::move(v);
    limits.w = std::move(w);
    return limits;
}

QwfData qwf_from_bases(const Matrix& e, const Matrix& a, const Matrix& v_basis, const Matrix& w_basis,
                       const PencilOptions& opts)
{
    require_pencil(e, a);
    const Index n = e.rows();
    if (v_basis.rows() != n || w_basis.rows() != n || v_basis.cols() + w_basis.cols() != n)
        fail(ErrorKind::DimensionMismatch, "QWF bases " + shape(v_basis) + " and " + shape(w_basis) +
                                               " do not split R^" + std::to_string(n));

    QwfData q;
    q.n_j = v_basis.cols();
    q.n_n = w_basis.cols();

    q.T = hcat(v_basis, w_basis);
    const double cond_t = condition_number(q.T);
    if (!(cond_t <= opts.cond_cap)) {
        std::ostringstream os;
        os << "cond(T) = " << cond_t << " exceeds cap " << opts.cond_cap;
        fail(ErrorKind::IllConditionedBasis, os.str());
    }

    const Matrix left = hcat(e * v_basis, a * w_basis);
    const double cond_left = condition_number(left);
    if (!(cond_left <= opts.cond_cap)) {
        std::ostringstream os;
        os << "cond([E V, A W]) = " << cond_left << " exceeds cap " << opts.cond_cap;
        fail(ErrorKind::IllConditionedBasis, os.str());
    }
    q.S = left.partialPivLu().inverse();

    q.J = (q.S * a * q.T).topLeftCorner(q.n_j, q.n_j);
    q.N = (q.S * e * q.T).bottomRightCorner(q.n_n, q.n_n);
    q.nu = nilpotency_index(q.N, opts.tol_zero);
    return q;
}

QwfData qwf(const Matrix& e, const Matrix& a, const PencilOptions& opts)
{
    const WongLimits limits = wong_sequences(e, a, opts);
    return qwf_from_bases(e, a, limits.v.basis(), limits.w.basis(), opts);
}

DecoupledMode decouple_with(const ModeSystem& mode, QwfData q)
{
    const Index n = mode.n();
    const Index m = mode.m();
    const Index p = mode.p();
    const Index nj = q.n_j;
    const Index nn = q.n_n;

    DecoupledMode d;
    d.mode = mode;
    d.nu = q.nu;

    const Matrix t_inv = q.T.partialPivLu().inverse();
    d.Pi = q.T.leftCols(nj) * t_inv.topRows(nj);
    d.PiDiff = q.T.leftCols(nj) * q.S.topRows(nj);
    d.PiImp = q.T.rightCols(nn) * q.S.bottomRows(nn);

    d.Adiff = d.PiDiff * mode.A;
    d.Bdiff = d.PiDiff * mode.B;
    d.Cdiff = mode.C * d.Pi;
    d.Eimp = d.PiImp * mode.E;
    d.Bimp = d.PiImp * mode.B;
    d.Cimp = mode.C * (Matrix::Identity(n, n) - d.Pi);

    const int nu = d.nu;
    d.JumpB = Matrix::Zero(n, m * nu);
    Matrix block = d.Bimp;
    for (int i = 0; i < nu; ++i) {
        d.JumpB.middleCols(i * m, m) = block;
        block = d.Eimp * block;
    }
    d.D = -d.Cimp * d.JumpB;

    const int imp_orders = std::max(nu - 1, 0);
    d.ImpC = Matrix::Zero(p * imp_orders, n);
    Matrix power = d.Eimp;
    for (int i = 1; i <= imp_orders; ++i) {
        d.ImpC.middleRows((i - 1) * p, p) = -d.Cimp * power;
        power = power * d.Eimp;
    }

    const double e_imp = std::max(1.0, d.Eimp.norm());
    const double deriv = std::pow(e_imp, std::max(nu - 1, 0));
    d.scales.a_diff = d.PiDiff.norm() * mode.A.norm();
    d.scales.b_diff = d.PiDiff.norm() * mode.B.norm();
    d.scales.jump_b = d.PiImp.norm() * mode.B.norm() * deriv;
    d.scales.c_diff = mode.C.norm() * d.Pi.norm();
    d.scales.imp_c = mode.C.norm() * (Matrix::Identity(n, n) - d.Pi).norm() * deriv;

    d.qwf = std::move(q);
    return d;
}

DecoupledMode decouple(const ModeSystem& mode, const PencilOptions& opts)
{
    mode.validate();
    return decouple_with(mode, qwf(mode.E, mode.A, opts));
}

}  // namespace swdae
