#pragma once

#include <vector>

#include "core/dae_model.hpp"

namespace fdi {

// Window of consecutive scheduling samples (w_{k-d_a}, ..., w_{k-d_a+d_N})
// feeding one stacked-matrix build. d_a is the filter delay; causality
// requires d_a >= d_N + d_L for the model the window is used with.
struct ParameterWindow {
    std::vector<SchedulingPoint> samples;  // length d_N + 1, oldest first
    int d_a = 0;

    int d_N() const { return static_cast<int>(samples.size()) - 1; }
};

struct StackedShape {
    int rows = 0;    // (d_N+1) * n_r
    int h_cols = 0;  // (d_N+d_H+1) * n_x
    int f_cols = 0;  // (d_N+d_F+1) * n_f
    int l_cols = 0;  // (d_N+d_L+1) * n_z
};

StackedShape stacked_shape(const DaeModel& model, int d_N);

// Window-evaluated stacked matrices turning the polynomial filter identity
// into finite linear algebra. Block (i, j) of H_bar (block-row height n_r,
// block-column width n_x) is H_{j-i}(w_{k-d_a+i}) for 0 <= j-i <= d_H, zero
// otherwise; F_bar and L_bar follow the same pattern with their own degrees.
// A row filter multiplies from the left: N_bar * H_bar = 0 is the
// disturbance-decoupling condition.
struct StackedSystem {
    Matrix H_bar;
    Matrix F_bar;
    Matrix L_bar;
    int n_r = 0, n_x = 0, n_z = 0, n_f = 0;
    int d_N = 0;
};

StackedSystem build_stacked(const DaeModel& model, const ParameterWindow& win);

}  // namespace fdi
