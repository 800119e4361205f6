#pragma once

#include <complex>
#include <vector>

#include "core/types.hpp"

namespace fdi {

// Stable denominator a(q) = sum_i a_i q^i of the recursive residual filter,
// stored with ascending powers. Invariants: a_{d_a} != 0, all roots strictly
// inside the unit circle (|root| < 1 - 1e-9 via companion eigenvalues), and
// sum_i a_i != 0 so the DC gain is finite and nonzero.
struct DenominatorPoly {
    std::vector<double> coeffs;

    int d_a() const { return static_cast<int>(coeffs.size()) - 1; }
    double sum() const;
};

// Expand a monic polynomial from its pole locations. Complex poles must come
// in conjugate pairs; every pole must satisfy |p| < 1 - 1e-9.
DenominatorPoly make_denominator(const std::vector<std::complex<double>>& poles);
DenominatorPoly make_denominator(const std::vector<double>& real_poles);

}  // namespace fdi
