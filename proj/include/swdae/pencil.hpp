#pragma once
//
// Regular matrix pencils (E, A): regularity test, Wong sequences,
// quasi-Weierstrass form and the projector/selector matrices that decouple
// a descriptor system into its differential and impulsive parts.
//

#include "swdae/subspace.hpp"

#include <cstdint>
#include <string>

namespace swdae {

// One mode E x' = A x + B u, y = C x.
struct ModeSystem {
    Matrix E;
    Matrix A;
    Matrix B;
    Matrix C;

    Index n() const noexcept { return A.rows(); }
    Index m() const noexcept { return B.cols(); }
    Index p() const noexcept { return C.rows(); }

    // Throws DimensionMismatch / NonFinite.
    void validate() const;
};

struct PencilOptions {
    double tol_rank{kDefaultRankTol};
    double tol_zero{kDefaultZeroTol};
    double cond_cap{1e12};
    std::uint64_t seed{42};
};

struct RegularityVerdict {
    bool regular{false};
    // A probe with det(shift E - A) != 0; meaningful only when regular.
    double shift{0.0};
    // Smallest relative singular value seen at the certifying probe (or the
    // best probe when not regular).
    double min_relative_sv{0.0};
    int probes{0};
    std::string report;
};

// det(sE - A) is a polynomial of degree <= n; it is nonzero iff it is nonzero
// at one of n + 1 distinct probe shifts.
RegularityVerdict is_regular(const Matrix& e, const Matrix& a, const PencilOptions& opts = {});

struct WongLimits {
    Subspace v;  // V* = lim V_i, V_0 = R^n, V_{i+1} = A^{-1}(E V_i)
    Subspace w;  // W* = lim W_i, W_0 = {0}, W_{i+1} = E^{-1}(A W_i)
    int v_steps{0};
    int w_steps{0};
};

WongLimits wong_sequences(const Matrix& e, const Matrix& a, const PencilOptions& opts = {});

// S E T = blkdiag(I, N), S A T = blkdiag(J, I).
struct QwfData {
    Matrix S;
    Matrix T;
    Matrix J;
    Matrix N;
    int nu{0};  // nilpotency index of N; 0 when there is no algebraic part
    Index n_j{0};
    Index n_n{0};
};

QwfData qwf(const Matrix& e, const Matrix& a, const PencilOptions& opts = {});
// QWF from arbitrary (not necessarily orthonormal) bases of V* and W*.
QwfData qwf_from_bases(const Matrix& e, const Matrix& a, const Matrix& v_basis, const Matrix& w_basis,
                       const PencilOptions& opts = {});

// Magnitudes that a nonzero column/row of the derived matrices would have;
// rank decisions on those matrices are taken relative to these.
struct DerivedScales {
    double a_diff{0.0};
    double b_diff{0.0};
    double jump_b{0.0};
    double c_diff{0.0};
    double imp_c{0.0};
};

struct DecoupledMode {
    ModeSystem mode;
    QwfData qwf;

    Matrix Pi;      // consistency projector
    Matrix PiDiff;  // differential selector
    Matrix PiImp;   // impulse selector

    Matrix Adiff, Bdiff, Cdiff;
    Matrix Eimp, Bimp, Cimp;

    // [Bimp, Eimp Bimp, ..., Eimp^{nu-1} Bimp], n x (m nu)
    Matrix JumpB;
    // Row blocks -Cimp Eimp^i for i = 1..nu-1, (p (nu-1)) x n
    Matrix ImpC;
    // -Cimp JumpB, p x (m nu)
    Matrix D;

    int nu{0};
    DerivedScales scales;

    Index n() const noexcept { return mode.n(); }
    Index m() const noexcept { return mode.m(); }
    Index p() const noexcept { return mode.p(); }
};

DecoupledMode decouple(const ModeSystem& mode, const PencilOptions& opts = {});
DecoupledMode decouple_with(const ModeSystem& mode, QwfData qwf);

}  // namespace swdae
