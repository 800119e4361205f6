#pragma once

#include "core/types.hpp"

namespace fdi {

// Matrix exponential by scaling-and-squaring with a diagonal Pade approximant
// of order 6, scaled until the infinity norm drops to 0.5 or below.
Matrix expm(const Matrix& M);

// Zero-order-hold discretization of X' = A X + B v over one period h:
//   Ad = e^{A h},  Bd = (integral_0^h e^{A s} ds) B
// computed from the top rows of exp([[A, B], [0, 0]] h), which stays
// well-defined for singular A.
void zoh_discretize(const Matrix& A, const Matrix& B, double h, Matrix& Ad, Matrix& Bd);

}  // namespace fdi
