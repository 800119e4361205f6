#include "core/denominator.hpp"

#include <cmath>
#include <numeric>

namespace fdi {

double DenominatorPoly::sum() const {
    return std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
}

namespace {

constexpr double kStabilityMargin = 1e-9;

// Root magnitudes of sum a_i q^i via the companion matrix of the monic form.
void check_stability(const std::vector<double>& a) {
    const int n = static_cast<int>(a.size()) - 1;
    if (n == 0) return;
    const double lead = a.back();
    Matrix companion = Matrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) companion(i + 1, i) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -a[i] / lead;
    Eigen::EigenSolver<Matrix> es(companion, /*computeEigenvectors=*/false);
    for (int i = 0; i < n; ++i) {
        if (std::abs(es.eigenvalues()[i]) >= 1.0 - kStabilityMargin)
            throw std::invalid_argument("denominator root on or outside the stability margin");
    }
}

}  // namespace

DenominatorPoly make_denominator(const std::vector<std::complex<double>>& poles) {
    using cd = std::complex<double>;

    // conjugate pairing: every pole with nonzero imaginary part needs a partner
    std::vector<bool> used(poles.size(), false);
    for (size_t i = 0; i < poles.size(); ++i) {
        if (used[i] || std::abs(poles[i].imag()) == 0.0) continue;
        bool matched = false;
        for (size_t j = i + 1; j < poles.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(poles[j].real() - poles[i].real()) <= 1e-12 &&
                std::abs(poles[j].imag() + poles[i].imag()) <= 1e-12) {
                used[i] = used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) throw std::invalid_argument("complex pole without conjugate partner");
    }
    for (const cd& p : poles) {
        if (std::abs(p) >= 1.0 - kStabilityMargin)
            throw std::invalid_argument("pole magnitude must stay below 1 - 1e-9");
    }

    std::vector<cd> c{cd(1.0, 0.0)};  // descending while convolving, flipped below
    for (const cd& p : poles) {
        std::vector<cd> next(c.size() + 1, cd(0.0, 0.0));
        for (size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];        // q * c_i
            next[i + 1] -= p * c[i];
        }
        c = std::move(next);
    }

    DenominatorPoly a;
    a.coeffs.resize(c.size());
    for (size_t i = 0; i < c.size(); ++i) {
        const cd v = c[c.size() - 1 - i];  // ascending powers
        if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real())))
            throw std::invalid_argument("pole set does not produce a real polynomial");
        a.coeffs[i] = v.real();
    }

    check_stability(a.coeffs);
    if (std::abs(a.sum()) <= 1e-12)
        throw std::invalid_argument("denominator sums to zero at q = 1 (no DC gain)");
    return a;
}

DenominatorPoly make_denominator(const std::vector<double>& real_poles) {
    std::vector<std::complex<double>> p(real_poles.begin(), real_poles.end());
    return make_denominator(p);
}

}  // namespace fdi
