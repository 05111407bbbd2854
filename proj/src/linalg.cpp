#include "swdae/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swdae {

double rank_threshold(const Vector& singular_values, Index rows, Index cols, double scale, double tol)
{
    const double sigma_max = singular_values.size() > 0 ? singular_values.maxCoeff() : 0.0;
    const double eps_floor =
        static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * sigma_max;
    return std::max(tol * scale, eps_floor);
}

Index numerical_rank(const Vector& singular_values, Index rows, Index cols, double scale, double tol)
{
    const double thr = rank_threshold(singular_values, rows, cols, scale, tol);
    Index r = 0;
    for (Index i = 0; i < singular_values.size(); ++i)
        if (singular_values(i) > thr)
            ++r;
    return r;
}

bool all_finite(const Matrix& m)
{
    return m.size() == 0 || m.allFinite();
}

void require_finite(const Matrix& m, std::string_view what)
{
    if (!all_finite(m))
        fail(ErrorKind::NonFinite, std::string(what) + " contains NaN or Inf");
}

void require_square(const Matrix& m, std::string_view what)
{
    if (m.rows() != m.cols())
        fail(ErrorKind::DimensionMismatch, std::string(what) + " is " + std::to_string(m.rows()) + "x" +
                                               std::to_string(m.cols()) + ", expected square");
}

double relative_error(const Matrix& x, const Matrix& y)
{
    if (x.rows() != y.rows() || x.cols() != y.cols())
        return std::numeric_limits<double>::infinity();
    if (x.size() == 0)
        return 0.0;
    return (x - y).norm() / std::max(1.0, y.norm());
}

bool is_numerically_zero(const Matrix& x, double scale, double tol)
{
    return x.size() == 0 || x.norm() <= tol * std::max(1.0, scale);
}

double condition_number(const Matrix& m)
{
    if (m.size() == 0)
        return 1.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (smin == 0.0)
        return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

Matrix matrix_power(const Matrix& m, int k)
{
    Matrix r = Matrix::Identity(m.rows(), m.cols());
    for (int i = 0; i < k; ++i)
        r = r * m;
    return r;
}

Matrix block_diag(const Matrix& a, const Matrix& b)
{
    Matrix r = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    r.topLeftCorner(a.rows(), a.cols()) = a;
    r.bottomRightCorner(b.rows(), b.cols()) = b;
    return r;
}

Matrix hcat(const Matrix& a, const Matrix& b)
{
    Matrix r(a.rows(), a.cols() + b.cols());
    if (a.cols() > 0)
        r.leftCols(a.cols()) = a;
    if (b.cols() > 0)
        r.rightCols(b.cols()) = b;
    return r;
}

Matrix vcat(const Matrix& a, const Matrix& b)
{
    Matrix r(a.rows() + b.rows(), a.cols());
    if (a.rows() > 0)
        r.topRows(a.rows()) = a;
    if (b.rows() > 0)
        r.bottomRows(b.rows()) = b;
    return r;
}

}  // namespace swdae
