#include "core/stacked.hpp"

namespace fdi {

StackedShape stacked_shape(const DaeModel& model, int d_N) {
    if (d_N < 0) throw std::invalid_argument("d_N must be >= 0");
    StackedShape s;
    s.rows = (d_N + 1) * model.n_r;
    s.h_cols = (d_N + model.H.degree + 1) * model.n_x;
    s.f_cols = (d_N + model.F.degree + 1) * model.n_f;
    s.l_cols = (d_N + model.L.degree + 1) * model.n_z;
    return s;
}

namespace {

Matrix stack_one(const ParamPolyMatrix& P, const std::vector<SchedulingPoint>& w,
                 int d_N, int block_cols) {
    const int nr = P.rows, nc = P.cols;
    Matrix out = Matrix::Zero((d_N + 1) * nr, block_cols * nc);
    for (int i = 0; i <= d_N; ++i) {
        for (int shift = 0; shift <= P.degree; ++shift) {
            const int j = i + shift;
            out.block(i * nr, j * nc, nr, nc) = eval_coeff(P, w[i], shift);
        }
    }
    return out;
}

}  // namespace

StackedSystem build_stacked(const DaeModel& model, const ParameterWindow& win) {
    const int d_N = win.d_N();
    if (d_N < 0) throw std::invalid_argument("window must hold at least one sample");
    if (win.d_a < d_N + model.L.degree)
        throw std::invalid_argument("causality violated: d_a < d_N + d_L");

    StackedSystem stk;
    stk.n_r = model.n_r;
    stk.n_x = model.n_x;
    stk.n_z = model.n_z;
    stk.n_f = model.n_f;
    stk.d_N = d_N;
    stk.H_bar = stack_one(model.H, win.samples, d_N, d_N + model.H.degree + 1);
    stk.F_bar = stack_one(model.F, win.samples, d_N, d_N + model.F.degree + 1);
    stk.L_bar = stack_one(model.L, win.samples, d_N, d_N + model.L.degree + 1);
    return stk;
}

}  // namespace fdi
