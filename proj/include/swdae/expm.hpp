#pragma once

#include "swdae/types.hpp"

namespace swdae {

// e^{M t} by scaling and squaring with a diagonal Padé approximant of degree
// 3, 5, 7, 9 or 13 chosen from the 1-norm of M t.
Matrix expm(const Matrix& m, double t = 1.0);

}  // namespace swdae
