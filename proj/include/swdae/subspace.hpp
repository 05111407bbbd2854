#pragma once
//
// Subspace algebra over R^n at a fixed rank tolerance.
//
// Every subspace is stored as an orthonormal basis; results of every
// operation are re-orthonormalized. A subspace equal to R^n always carries
// the identity basis so that downstream coordinate choices stay canonical.
//

#include "swdae/linalg.hpp"

namespace swdae {

class Subspace {
public:
    Subspace() = default;

    static Subspace zero(Index n, double tol = kDefaultRankTol);
    static Subspace full(Index n, double tol = kDefaultRankTol);
    // `basis` must already have orthonormal columns.
    static Subspace from_orthonormal(Matrix basis, double tol = kDefaultRankTol);

    const Matrix& basis() const noexcept { return basis_; }
    Index dim() const noexcept { return basis_.cols(); }
    Index ambient_dim() const noexcept { return basis_.rows(); }
    double tol() const noexcept { return tol_; }

    bool is_zero() const noexcept { return dim() == 0; }
    bool is_full() const noexcept { return dim() == ambient_dim(); }

    // Orthogonal projector onto the subspace.
    Matrix projector() const;

private:
    Subspace(Matrix basis, double tol);

    Matrix basis_{Matrix::Zero(0, 0)};
    double tol_{kDefaultRankTol};
};

// Column span of `m`; rank judged relative to sigma_max(m).
Subspace image(const Matrix& m, double tol = kDefaultRankTol);
// Column span of `m`; rank judged relative to `scale` (use when `m` is a
// product whose factors fix the magnitude a nonzero column would have).
Subspace image(const Matrix& m, double scale, double tol);
// Null space of `m` (as a subspace of R^cols); rank judged relative to `scale`.
Subspace kernel(const Matrix& m, double scale, double tol = kDefaultRankTol);
Subspace kernel(const Matrix& m);

// {A x : x in L}; the overload judges rank relative to `scale` instead of ||A||.
Subspace map(const Matrix& a, const Subspace& l);
Subspace map(const Matrix& a, const Subspace& l, double scale);

Subspace sum(const Subspace& u, const Subspace& v);
Subspace intersect(const Subspace& u, const Subspace& v);
// {x : M x in L}
Subspace preimage(const Matrix& m, const Subspace& l);
Subspace preimage(const Matrix& m, const Subspace& l, double scale);
Subspace orth_complement(const Subspace& u);

// <A | L> = L + A L + ... + A^{n-1} L
Subspace smallest_invariant(const Matrix& a, const Subspace& l);
Subspace smallest_invariant(const Matrix& a, const Subspace& l, double scale);
// <L | A> = L ∩ A^{-1} L ∩ ... ∩ A^{-(n-1)} L
Subspace largest_invariant_in(const Subspace& l, const Matrix& a);
Subspace largest_invariant_in(const Subspace& l, const Matrix& a, double scale);

struct ContainmentVerdict {
    bool holds{false};
    double angle{0.0};  // largest principal angle between V and its projection onto U
};

inline constexpr double kDefaultAngleTol = 1e-8;

// Is V ⊆ U?
ContainmentVerdict contains(const Subspace& u, const Subspace& v, double tol_angle = kDefaultAngleTol);
// Mutual containment; `angle` is the larger of the two directions.
ContainmentVerdict equals(const Subspace& u, const Subspace& v, double tol_angle = kDefaultAngleTol);

}  // namespace swdae
