#include "swdae/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace swdae {

namespace {

void require_same_ambient(const Subspace& u, const Subspace& v, const char* op)
{
    if (u.ambient_dim() != v.ambient_dim())
        fail(ErrorKind::AmbientMismatch, std::string(op) + ": ambient dimensions " +
                                             std::to_string(u.ambient_dim()) + " and " +
                                             std::to_string(v.ambient_dim()) + " differ");
}

double joint_tol(const Subspace& u, const Subspace& v)
{
    return std::max(u.tol(), v.tol());
}

}  // namespace

Subspace::Subspace(Matrix basis, double tol) : basis_(std::move(basis)), tol_(tol) {}

Subspace Subspace::zero(Index n, double tol)
{
    return Subspace(Matrix::Zero(n, 0), tol);
}

Subspace Subspace::full(Index n, double tol)
{
    return Subspace(Matrix::Identity(n, n), tol);
}

Subspace Subspace::from_orthonormal(Matrix basis, double tol)
{
    if (basis.cols() == basis.rows())
        return full(basis.rows(), tol);
    return Subspace(std::move(basis), tol);
}

Matrix Subspace::projector() const
{
    return basis_ * basis_.transpose();
}

Subspace image(const Matrix& m, double tol)
{
    if (m.size() == 0)
        return Subspace::zero(m.rows(), tol);
    require_finite(m, "image operand");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    const Vector& s = svd.singularValues();
    const Index r = numerical_rank(s, m.rows(), m.cols(), s(0), tol);
    return Subspace::from_orthonormal(svd.matrixU().leftCols(r), tol);
}

Subspace image(const Matrix& m, double scale, double tol)
{
    if (m.size() == 0)
        return Subspace::zero(m.rows(), tol);
    require_finite(m, "image operand");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    const Index r = numerical_rank(svd.singularValues(), m.rows(), m.cols(), scale, tol);
    return Subspace::from_orthonormal(svd.matrixU().leftCols(r), tol);
}

Subspace kernel(const Matrix& m, double scale, double tol)
{
    const Index n = m.cols();
    if (m.rows() == 0 || n == 0)
        return Subspace::full(n, tol);
    require_finite(m, "kernel operand");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const Index r = numerical_rank(svd.singularValues(), m.rows(), n, scale, tol);
    if (r == 0)
        return Subspace::full(n, tol);
    return Subspace::from_orthonormal(svd.matrixV().rightCols(n - r), tol);
}

Subspace kernel(const Matrix& m)
{
    return kernel(m, m.size() ? m.norm() : 0.0, kDefaultRankTol);
}

Subspace map(const Matrix& a, const Subspace& l)
{
    return map(a, l, a.size() ? a.norm() : 0.0);
}

Subspace map(const Matrix& a, const Subspace& l, double scale)
{
    if (a.cols() != l.ambient_dim())
        fail(ErrorKind::AmbientMismatch, "map: matrix has " + std::to_string(a.cols()) +
                                             " columns, subspace lives in R^" +
                                             std::to_string(l.ambient_dim()));
    if (l.is_zero())
        return Subspace::zero(a.rows(), l.tol());
    return image(a * l.basis(), scale, l.tol());
}

Subspace sum(const Subspace& u, const Subspace& v)
{
    require_same_ambient(u, v, "sum");
    if (v.is_zero())
        return u;
    if (u.is_zero())
        return v;
    return image(hcat(u.basis(), v.basis()), 1.0, joint_tol(u, v));
}

Subspace intersect(const Subspace& u, const Subspace& v)
{
    require_same_ambient(u, v, "intersect");
    const double tol = joint_tol(u, v);
    if (u.is_zero() || v.is_zero())
        return Subspace::zero(u.ambient_dim(), tol);
    if (u.is_full())
        return v;
    if (v.is_full())
        return u;
    // Coefficient pairs (a, b) with U a = V b.
    const Subspace coeffs = kernel(hcat(u.basis(), -v.basis()), 1.0, tol);
    if (coeffs.is_zero())
        return Subspace::zero(u.ambient_dim(), tol);
    const Matrix x = u.basis() * coeffs.basis().topRows(u.dim());
    return image(x, tol);
}

Subspace preimage(const Matrix& m, const Subspace& l)
{
    return preimage(m, l, m.size() ? m.norm() : 0.0);
}

Subspace preimage(const Matrix& m, const Subspace& l, double scale)
{
    if (m.rows() != l.ambient_dim())
        fail(ErrorKind::AmbientMismatch, "preimage: matrix has " + std::to_string(m.rows()) +
                                             " rows, subspace lives in R^" +
                                             std::to_string(l.ambient_dim()));
    if (l.is_full())
        return Subspace::full(m.cols(), l.tol());
    // Components of M x orthogonal to L must vanish.
    const Matrix residual = m - l.basis() * (l.basis().transpose() * m);
    return kernel(residual, scale, l.tol());
}

Subspace orth_complement(const Subspace& u)
{
    const Index n = u.ambient_dim();
    if (u.is_zero())
        return Subspace::full(n, u.tol());
    if (u.is_full())
        return Subspace::zero(n, u.tol());
    Eigen::HouseholderQR<Matrix> qr(u.basis());
    const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    return Subspace::from_orthonormal(q.rightCols(n - u.dim()), u.tol());
}

Subspace smallest_invariant(const Matrix& a, const Subspace& l)
{
    return smallest_invariant(a, l, a.size() ? a.norm() : 0.0);
}

Subspace smallest_invariant(const Matrix& a, const Subspace& l, double scale)
{
    require_square(a, "smallest_invariant operator");
    if (a.rows() != l.ambient_dim())
        fail(ErrorKind::AmbientMismatch, "smallest_invariant: operator and subspace dimensions differ");
    Subspace s = l;
    for (Index i = 0; i < a.rows(); ++i) {
        Subspace next = sum(s, map(a, s, scale));
        if (next.dim() == s.dim())
            break;
        s = std::move(next);
    }
    return s;
}

Subspace largest_invariant_in(const Subspace& l, const Matrix& a)
{
    return largest_invariant_in(l, a, a.size() ? a.norm() : 0.0);
}

Subspace largest_invariant_in(const Subspace& l, const Matrix& a, double scale)
{
    require_square(a, "largest_invariant_in operator");
    if (a.rows() != l.ambient_dim())
        fail(ErrorKind::AmbientMismatch, "largest_invariant_in: operator and subspace dimensions differ");
    Subspace s = l;
    for (Index i = 0; i < a.rows(); ++i) {
        Subspace next = intersect(s, preimage(a, s, scale));
        if (next.dim() == s.dim())
            break;
        s = std::move(next);
    }
    return s;
}

ContainmentVerdict contains(const Subspace& u, const Subspace& v, double tol_angle)
{
    require_same_ambient(u, v, "contains");
    if (v.is_zero())
        return {true, 0.0};
    if (u.is_zero())
        return {false, std::numbers::pi / 2};
    const Matrix residual = v.basis() - u.basis() * (u.basis().transpose() * v.basis());
    Eigen::JacobiSVD<Matrix> svd(residual);
    const double sine = std::min(1.0, svd.singularValues()(0));
    const double angle = std::asin(sine);
    return {angle <= tol_angle, angle};
}

ContainmentVerdict equals(const Subspace& u, const Subspace& v, double tol_angle)
{
    const auto uv = contains(u, v, tol_angle);
    const auto vu = contains(v, u, tol_angle);
    return {uv.holds && vu.holds, std::max(uv.angle, vu.angle)};
}

}  // namespace swdae
