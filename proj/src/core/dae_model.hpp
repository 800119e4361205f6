#pragma once

#include <functional>

#include "core/types.hpp"

namespace fdi {

// Scheduling parameter value (the measured signal the model coefficients
// depend on; the vehicle case uses n_w = 1, longitudinal velocity in m/s).
using SchedulingPoint = Vector;

// Compact per-component box the scheduling parameter must stay inside.
// Evaluation outside the box is an error, never a clamp: a silently clamped
// scheduling measurement would hide sensor faults.
struct SchedulingBox {
    Vector lo;
    Vector hi;

    bool contains(const SchedulingPoint& w) const {
        if (w.size() != lo.size()) return false;
        return (w.array() >= lo.array()).all() && (w.array() <= hi.array()).all();
    }
};

// Matrix polynomial in the forward shift q with parameter-dependent
// coefficients: M(w, q) = sum_{i=0}^{degree} M_i(w) q^i.
// coeff(w, i) must return a rows x cols matrix for every 0 <= i <= degree
// and every w inside bounds. Trailing all-zero coefficients are fine; the
// degree is fixed at construction.
struct ParamPolyMatrix {
    int rows = 0;
    int cols = 0;
    int degree = 0;
    SchedulingBox bounds;
    std::function<Matrix(const SchedulingPoint&, int)> coeff;
};

// Bounds- and index-checked coefficient access.
Matrix eval_coeff(const ParamPolyMatrix& m, const SchedulingPoint& w, int i);

// Polynomial DAE model H(w,q)[x] + L(w,q)[z] + F(w,q)[f] = 0 relating the
// unknown signals x (states and disturbances), the known signals z
// (measurements and inputs), and the faults f.
struct DaeModel {
    ParamPolyMatrix H;  // n_r x n_x
    ParamPolyMatrix L;  // n_r x n_z
    ParamPolyMatrix F;  // n_r x n_f
    int n_r = 0;
    int n_x = 0;
    int n_z = 0;
    int n_f = 0;
    SchedulingBox w_bounds;
};

// Parameter-varying state-space difference equations:
//   G(w_k) X(k+1) = A(w_k) X(k) + B_u u + B_d d + B_f f
//   y(k) = C(w_k) X(k) + D_u u + D_d d + D_f f
struct LpvStateSpace {
    int n_X = 0, n_u = 0, n_d = 0, n_f = 0, n_y = 0, n_w = 1;
    SchedulingBox w_bounds;
    std::function<Matrix(const SchedulingPoint&)> G, A, B_u, B_d, B_f;
    std::function<Matrix(const SchedulingPoint&)> C, D_u, D_d, D_f;
};

// Rewrite the state-space form as a DAE with x = [X; d], z = [y; u]:
//   H_1(w) = [[-G(w), 0], [0, 0]]      H_0(w) = [[A(w), B_d(w)], [C(w), D_d(w)]]
//   L_0(w) = [[0, B_u(w)], [-I, D_u(w)]]     F_0(w) = [[B_f(w)], [D_f(w)]]
// giving n_r = n_X + n_y, n_x = n_X + n_d, n_z = n_y + n_u, degrees
// d_H = 1, d_L = d_F = 0.
DaeModel ss_to_dae(const LpvStateSpace& ss);

}  // namespace fdi
