#pragma once

#include "core/dae_model.hpp"

namespace fdi {

// Lateral single-track (bicycle) model parameters plus gravity and the
// sampling period. Units: N/rad, m, kg, kg m^2, m/s^2, s.
struct BicycleParams {
    double C_f = 1.50e5;
    double C_r = 1.10e5;
    double l_f = 1.3;
    double l_r = 1.7;
    double m = 1500.0;
    double I_z = 2600.0;
    double g = 9.81;
    double h = 0.01;
};

void validate(const BicycleParams& p);

// Sign convention of the velocity-dependent dynamics block.
//   standard:   restoring (negative) stiffness/damping terms plus the
//               rotating-frame coupling -v_x in the side-slip row; open-loop
//               stable side-slip/yaw dynamics.
//   as_printed: the raw displayed entries (positive stiffness block, no
//               rotating-frame term); kept selectable for comparison runs.
enum class MatrixSigns { standard, as_printed };

// Continuous-time matrices at one velocity. State order
// X = (v_y, yaw rate, lane error, heading error); outputs select the last
// three states; steering input and the additive steering fault enter
// identically; disturbances are (sin(banking angle), curvature).
struct ContinuousMatrices {
    Matrix A;    // 4 x 4
    Matrix B_u;  // 4 x 1
    Matrix B_f;  // 4 x 1
    Matrix B_d;  // 4 x 2
    Matrix C;    // 3 x 4
};

ContinuousMatrices continuous_matrices(const BicycleParams& p, double v_x,
                                       MatrixSigns signs = MatrixSigns::standard);

// Exact (zero-order-hold) discretization of all input channels at once.
struct DiscreteMatrices {
    Matrix A, B_u, B_f, B_d;
};

DiscreteMatrices exact_discretize(const ContinuousMatrices& cm, double h);

// Parameter-varying state-space model scheduled on v_x in [v_min, v_max],
// discretized exactly at each evaluation. fault_enabled=false zeroes the
// fault channel (for isolability counterexamples).
LpvStateSpace bicycle_model(const BicycleParams& p, MatrixSigns signs = MatrixSigns::standard,
                            double v_min = 5.0, double v_max = 60.0,
                            bool fault_enabled = true);

// Lane-keeping steering command u = -(K_p y_e + K_d (y_e - y_e_prev)/h
// + K_psi psi_e), saturated to +-0.5 rad.
struct PdGains {
    double k_p = 0.1;
    double k_d = 0.01;
    double k_psi = 1.5;
};

double pd_controller(double y_e, double psi_e, double y_e_prev, const PdGains& gains,
                     double h);

}  // namespace fdi
