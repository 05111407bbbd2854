#include "swdae/expm.hpp"

#include "swdae/linalg.hpp"

#include <array>
#include <cmath>
#include <span>

namespace swdae {

namespace {

// Largest 1-norm for which the degree-k approximant meets unit roundoff.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                       25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                        2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13{64764752532480000.0,
                                         32382376266240000.0,
                                         7771770303897600.0,
                                         1187353796428800.0,
                                         129060195264000.0,
                                         10559470521600.0,
                                         670442572800.0,
                                         33522128640.0,
                                         1323241920.0,
                                         40840800.0,
                                         960960.0,
                                         16380.0,
                                         182.0,
                                         1.0};

double one_norm(const Matrix& m)
{
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

// Odd/even parts U, V of the degree-(2k+1) approximant using plain powers.
void pade_low(const Matrix& a, std::span<const double> b, Matrix& u, Matrix& v)
{
    const Index n = a.rows();
    const Matrix a2 = a * a;
    Matrix power = Matrix::Identity(n, n);
    Matrix odd = Matrix::Zero(n, n);
    v = Matrix::Zero(n, n);
    for (std::size_t k = 0; k + 1 < b.size(); k += 2) {
        v += b[k] * power;
        odd += b[k + 1] * power;
        power = power * a2;
    }
    u = a * odd;
}

void pade13(const Matrix& a, Matrix& u, Matrix& v)
{
    const auto& b = kPade13;
    const Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix odd_high = b[13] * a6 + b[11] * a4 + b[9] * a2;
    u = a * (a6 * odd_high + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const Matrix even_high = b[12] * a6 + b[10] * a4 + b[8] * a2;
    v = a6 * even_high + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace

Matrix expm(const Matrix& m, double t)
{
    require_square(m, "expm operand");
    require_finite(m, "expm operand");
    if (!std::isfinite(t))
        fail(ErrorKind::NonFinite, "expm time is not finite");
    const Index n = m.rows();
    if (n == 0)
        return Matrix::Zero(0, 0);

    Matrix a = m * t;
    const double norm = one_norm(a);
    Matrix u, v;
    int squarings = 0;
    if (norm <= kTheta3) {
        pade_low(a, kPade3, u, v);
    } else if (norm <= kTheta5) {
        pade_low(a, kPade5, u, v);
    } else if (norm <= kTheta7) {
        pade_low(a, kPade7, u, v);
    } else if (norm <= kTheta9) {
        pade_low(a, kPade9, u, v);
    } else {
        if (norm > kTheta13)
            squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
        a /= std::ldexp(1.0, squarings);
        pade13(a, u, v);
    }
    Matrix r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i)
        r = r * r;
    return r;
}

}  // namespace swdae
