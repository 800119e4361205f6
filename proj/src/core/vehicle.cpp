#include "core/vehicle.hpp"

#include <algorithm>
#include <cmath>

#include "core/expm.hpp"

namespace fdi {

void validate(const BicycleParams& p) {
    const double vals[] = {p.C_f, p.C_r, p.l_f, p.l_r, p.m, p.I_z, p.g, p.h};
    for (double v : vals)
        if (!(v > 0.0)) throw std::invalid_argument("bicycle parameters must be positive");
}

ContinuousMatrices continuous_matrices(const BicycleParams& p, double v_x, MatrixSigns signs) {
    if (!(v_x > 0.0)) throw std::invalid_argument("velocity must be positive");
    validate(p);

    const double a11 = (p.C_f + p.C_r) / (v_x * p.m);
    const double a12 = (p.l_f * p.C_f - p.l_r * p.C_r) / (v_x * p.m);
    const double a21 = (p.l_f * p.C_f - p.l_r * p.C_r) / (v_x * p.I_z);
    const double a22 = (p.l_f * p.l_f * p.C_f + p.l_r * p.l_r * p.C_r) / (v_x * p.I_z);

    ContinuousMatrices cm;
    cm.A = Matrix::Zero(4, 4);
    if (signs == MatrixSigns::standard) {
        cm.A(0, 0) = -a11;
        cm.A(0, 1) = -a12 - v_x;  // rotating-frame coupling
        cm.A(1, 0) = -a21;
        cm.A(1, 1) = -a22;
    } else {
        cm.A(0, 0) = a11;
        cm.A(0, 1) = a12;
        cm.A(1, 0) = a21;
        cm.A(1, 1) = a22;
    }
    cm.A(2, 0) = -1.0;
    cm.A(2, 3) = v_x;
    cm.A(3, 1) = -1.0;

    cm.B_u = Matrix::Zero(4, 1);
    cm.B_u(0, 0) = -p.C_f / p.m;
    cm.B_u(1, 0) = -p.l_f * p.C_f / p.I_z;
    cm.B_f = cm.B_u;

    cm.B_d = Matrix::Zero(4, 2);
    cm.B_d(0, 0) = p.g;   // times sin(banking angle)
    cm.B_d(3, 1) = v_x;   // times road curvature

    cm.C = Matrix::Zero(3, 4);
    cm.C(0, 1) = 1.0;
    cm.C(1, 2) = 1.0;
    cm.C(2, 3) = 1.0;
    return cm;
}

DiscreteMatrices exact_discretize(const ContinuousMatrices& cm, double h) {
    Matrix B(4, 4);
    B << cm.B_u, cm.B_f, cm.B_d;
    Matrix Ad, Bd;
    zoh_discretize(cm.A, B, h, Ad, Bd);
    DiscreteMatrices dm;
    dm.A = Ad;
    dm.B_u = Bd.col(0);
    dm.B_f = Bd.col(1);
    dm.B_d = Bd.rightCols(2);
    return dm;
}

LpvStateSpace bicycle_model(const BicycleParams& p, MatrixSigns signs, double v_min,
                            double v_max, bool fault_enabled) {
    validate(p);
    if (!(0.0 < v_min && v_min < v_max))
        throw std::invalid_argument("need 0 < v_min < v_max");

    LpvStateSpace ss;
    ss.n_X = 4;
    ss.n_u = 1;
    ss.n_d = 2;
    ss.n_f = 1;
    ss.n_y = 3;
    ss.n_w = 1;
    ss.w_bounds.lo = Vector::Constant(1, v_min);
    ss.w_bounds.hi = Vector::Constant(1, v_max);

    auto disc = [p, signs](const SchedulingPoint& w) {
        return exact_discretize(continuous_matrices(p, w[0], signs), p.h);
    };
    ss.G = [](const SchedulingPoint&) { return Matrix::Identity(4, 4); };
    ss.A = [disc](const SchedulingPoint& w) { return disc(w).A; };
    ss.B_u = [disc](const SchedulingPoint& w) { return disc(w).B_u; };
    ss.B_d = [disc](const SchedulingPoint& w) { return disc(w).B_d; };
    ss.B_f = [disc, fault_enabled](const SchedulingPoint& w) {
        return fault_enabled ? Matrix(disc(w).B_f) : Matrix(Matrix::Zero(4, 1));
    };
    ss.C = [p, signs](const SchedulingPoint& w) {
        return continuous_matrices(p, w[0], signs).C;
    };
    ss.D_u = [](const SchedulingPoint&) { return Matrix::Zero(3, 1); };
    ss.D_d = [](const SchedulingPoint&) { return Matrix::Zero(3, 2); };
    ss.D_f = [](const SchedulingPoint&) { return Matrix::Zero(3, 1); };
    return ss;
}

double pd_controller(double y_e, double psi_e, double y_e_prev, const PdGains& gains,
                     double h) {
    if (!(h > 0.0)) throw std::invalid_argument("sampling period must be positive");
    if (!std::isfinite(y_e) || !std::isfinite(psi_e) || !std::isfinite(y_e_prev))
        throw std::invalid_argument("controller inputs must be finite");
    const double u = -(gains.k_p * y_e + gains.k_d * (y_e - y_e_prev) / h +
                       gains.k_psi * psi_e);
    return std::clamp(u, -0.5, 0.5);
}

}  // namespace fdi
