#pragma once

#include "swdae/types.hpp"

#include <string_view>

namespace swdae {

// Relative singular-value threshold for every rank decision in the library.
inline constexpr double kDefaultRankTol = 1e-10;
// Relative Frobenius tolerance for "matrix == 0" tests.
inline constexpr double kDefaultZeroTol = 1e-10;

// Singular values above max(tol * scale, max(rows, cols) * eps * sigma_max) count
// towards the rank. `scale` is the magnitude the matrix would have if it were
// not rank deficient; pass sigma_max when no better reference exists.
double rank_threshold(const Vector& singular_values, Index rows, Index cols, double scale, double tol);
Index numerical_rank(const Vector& singular_values, Index rows, Index cols, double scale, double tol);

bool all_finite(const Matrix& m);
void require_finite(const Matrix& m, std::string_view what);
void require_square(const Matrix& m, std::string_view what);

// ||x - y||_F / max(1, ||y||_F)
double relative_error(const Matrix& x, const Matrix& y);

// ||x||_F <= tol * max(1, scale)
bool is_numerically_zero(const Matrix& x, double scale, double tol = kDefaultZeroTol);

double condition_number(const Matrix& m);
Matrix matrix_power(const Matrix& m, int k);
Matrix block_diag(const Matrix& a, const Matrix& b);
// [a, b] and [a; b]; either operand may be empty.
Matrix hcat(const Matrix& a, const Matrix& b);
Matrix vcat(const Matrix& a, const Matrix& b);

}  // namespace swdae
