#include "core/dae_model.hpp"

#include <string>

namespace fdi {

Matrix eval_coeff(const ParamPolyMatrix& m, const SchedulingPoint& w, int i) {
    if (i < 0 || i > m.degree)
        throw std::out_of_range("coefficient index " + std::to_string(i) +
                                " outside degree " + std::to_string(m.degree));
    if (!m.bounds.contains(w))
        throw std::invalid_argument("scheduling point outside declared bounds");
    Matrix M = m.coeff(w, i);
    if (M.rows() != m.rows || M.cols() != m.cols)
        throw std::invalid_argument("coefficient map returned wrong shape");
    return M;
}

namespace {

void check_shape(const Matrix& M, int rows, int cols, const char* name) {
    if (M.rows() != rows || M.cols() != cols)
        throw std::invalid_argument(std::string(name) + " has inconsistent shape");
}

}  // namespace

DaeModel ss_to_dae(const LpvStateSpace& ss) {
    if (ss.n_X <= 0 || ss.n_y <= 0)
        throw std::invalid_argument("state-space model needs n_X > 0 and n_y > 0");

    // validate shapes once at a bounds midpoint
    SchedulingPoint w0 = 0.5 * (ss.w_bounds.lo + ss.w_bounds.hi);
    check_shape(ss.G(w0), ss.n_X, ss.n_X, "G");
    check_shape(ss.A(w0), ss.n_X, ss.n_X, "A");
    check_shape(ss.B_u(w0), ss.n_X, ss.n_u, "B_u");
    check_shape(ss.B_d(w0), ss.n_X, ss.n_d, "B_d");
    check_shape(ss.B_f(w0), ss.n_X, ss.n_f, "B_f");
    check_shape(ss.C(w0), ss.n_y, ss.n_X, "C");
    check_shape(ss.D_u(w0), ss.n_y, ss.n_u, "D_u");
    check_shape(ss.D_d(w0), ss.n_y, ss.n_d, "D_d");
    check_shape(ss.D_f(w0), ss.n_y, ss.n_f, "D_f");

    DaeModel m;
    m.n_r = ss.n_X + ss.n_y;
    m.n_x = ss.n_X + ss.n_d;
    m.n_z = ss.n_y + ss.n_u;
    m.n_f = ss.n_f;
    m.w_bounds = ss.w_bounds;

    const int nX = ss.n_X, ny = ss.n_y, nd = ss.n_d, nu = ss.n_u, nf = ss.n_f;

    m.H.rows = m.n_r;
    m.H.cols = m.n_x;
    m.H.degree = 1;
    m.H.bounds = ss.w_bounds;
    m.H.coeff = [ss, nX, ny, nd](const SchedulingPoint& w, int i) {
        Matrix M = Matrix::Zero(nX + ny, nX + nd);
        if (i == 0) {
            M.topLeftCorner(nX, nX) = ss.A(w);
            M.topRightCorner(nX, nd) = ss.B_d(w);
            M.bottomLeftCorner(ny, nX) = ss.C(w);
            M.bottomRightCorner(ny, nd) = ss.D_d(w);
        } else {
            M.topLeftCorner(nX, nX) = -ss.G(w);
        }
        return M;
    };

    m.L.rows = m.n_r;
    m.L.cols = m.n_z;
    m.L.degree = 0;
    m.L.bounds = ss.w_bounds;
    m.L.coeff = [ss, nX, ny, nu](const SchedulingPoint& w, int) {
        Matrix M = Matrix::Zero(nX + ny, ny + nu);
        M.topRightCorner(nX, nu) = ss.B_u(w);
        M.bottomLeftCorner(ny, ny) = -Matrix::Identity(ny, ny);
        M.bottomRightCorner(ny, nu) = ss.D_u(w);
        return M;
    };

    m.F.rows = m.n_r;
    m.F.cols = m.n_f;
    m.F.degree = 0;
    m.F.bounds = ss.w_bounds;
    m.F.coeff = [ss, nX, ny, nf](const SchedulingPoint& w, int) {
        Matrix M = Matrix::Zero(nX + ny, nf);
        M.topRows(nX) = ss.B_f(w);
        M.bottomRows(ny) = ss.D_f(w);
        return M;
    };

    return m;
}

}  // namespace fdi
