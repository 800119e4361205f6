#include "core/expm.hpp"

#include <cmath>

namespace fdi {

Matrix expm(const Matrix& M) {
    if (M.rows() != M.cols()) throw std::invalid_argument("expm needs a square matrix");
    const int n = static_cast<int>(M.rows());
    if (n == 0) return M;

    const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
    int s = 0;
    if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Matrix A = M / std::pow(2.0, s);

    // diagonal Pade(6,6): coefficients c_{j+1} = c_j (6-j) / ((j+1)(12-j))
    double c = 1.0;
    Matrix P = Matrix::Identity(n, n);  // powers of A
    Matrix N = Matrix::Identity(n, n);
    Matrix D = Matrix::Identity(n, n);
    for (int j = 0; j < 6; ++j) {
        c *= static_cast<double>(6 - j) / ((j + 1.0) * (12.0 - j));
        P = P * A;
        N += c * P;
        D += ((j % 2 == 0) ? -c : c) * P;
    }

    Matrix R = D.partialPivLu().solve(N);
    for (int i = 0; i < s; ++i) R = R * R;
    return R;
}

void zoh_discretize(const Matrix& A, const Matrix& B, double h, Matrix& Ad, Matrix& Bd) {
    if (h <= 0.0) throw std::invalid_argument("sampling period must be positive");
    if (A.rows() != A.cols() || B.rows() != A.rows())
        throw std::invalid_argument("zoh_discretize shape mismatch");
    const int n = static_cast<int>(A.rows());
    const int m = static_cast<int>(B.cols());
    Matrix aug = Matrix::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = A * h;
    aug.topRightCorner(n, m) = B * h;
    Matrix E = expm(aug);
    Ad = E.topLeftCorner(n, n);
    Bd = E.topRightCorner(n, m);
}

}  // namespace fdi
