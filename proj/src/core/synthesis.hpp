#pragma once

#include <optional>

#include "core/denominator.hpp"
#include "core/stacked.hpp"

namespace fdi {

struct SynthesisOptions {
    // Regularization weight of the analytic (SPD-solve) path; larger values
    // approach the exact projector solution until conditioning pushes back.
    double gamma = 1e8;
    // Relative singular-value cutoff for numerical rank. Absent means
    // automatic: largest matrix dimension times machine epsilon.
    std::optional<double> rank_tol_factor;
    // Which fault column the residual is normalized to estimate.
    int target_fault = 0;
};

struct IsolabilityReport {
    bool isolable = false;
    int rank_H = 0;
    int rank_HF = 0;
};

// A fault is isolable from the disturbances iff appending the fault columns
// raises the numerical rank: rank([H_bar F_bar]) > rank(H_bar).
IsolabilityReport isolability_check(const StackedSystem& stk, const SynthesisOptions& opt);

enum class Exactness { exact, regularized };

struct SynthesizedFilter {
    RowVector N_bar;        // decoupling row, 1 x (d_N+1) n_r
    int j_star = -1;        // selected stacked fault column
    int target_fault = 0;   // fault index the numerator is normalized for
    RowVector fault_gain;   // 1 x n_f DC map fault -> unnormalized residual
    RowVector E;            // normalized numerator, 1 x (d_N+d_L+1) n_z
    std::vector<double> a;  // denominator coefficients, ascending
    Exactness exactness = Exactness::exact;
};

// Closed-form optimum of the decoupling QP: per stacked fault column j the
// minimizer of ||N||^2 - N F_j subject to N H_bar = 0 is N_j = 1/2 F_j^T Pi,
// with Pi the orthogonal projector onto the left nullspace of H_bar. Returns
// the row with the largest |N_j F_j| (ties: lowest j). Throws
// NonIsolableError when every candidate's sensitivity sits below the rank
// tolerance.
SynthesizedFilter synthesize_exact(const StackedSystem& stk, const SynthesisOptions& opt);

// Regularized variant: N_j = 1/(2 gamma) F_j^T (gamma^{-1} I + H H^T)^{-1}
// through one SPD factorization (never an explicit inverse). Converges to the
// exact row as gamma grows; the result is flagged `regularized` since finite
// gamma trades a decoupling bias for well-posedness.
SynthesizedFilter synthesize_analytic(const StackedSystem& stk, const SynthesisOptions& opt);

// Steady-state map from a constant fault vector to the unnormalized residual:
// gain = -(N_bar F_bar restricted to block-sums) / sum_h a_h, one entry per
// fault. Throws when a(1) vanishes.
RowVector dc_fault_gain(const SynthesizedFilter& filt, const StackedSystem& stk,
                        const DenominatorPoly& a);

// Scale N_bar L_bar so a constant target fault maps to a residual of exactly
// +1 at steady state; fills filt.fault_gain, filt.E and filt.a. Throws
// NonIsolableError when the target fault gain is zero.
void build_numerator(SynthesizedFilter& filt, const StackedSystem& stk,
                     const DenominatorPoly& a);

}  // namespace fdi
