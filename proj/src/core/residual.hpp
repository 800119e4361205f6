#pragma once

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "core/synthesis.hpp"

namespace fdi {

// Streaming state of the recursive residual generator
//   a(q) r = E(w) z_window
// holding the last d_a + 1 measurement vectors and scheduling points plus the
// last d_a residuals. Residuals during warm-up (k < d_a) are defined as 0.
// Single-writer: one state must not be stepped from two threads, but distinct
// states are independent.
class ResidualFilterState {
  public:
    // d_N < 0 selects the default d_N = d_a (maximal design freedom under
    // causality d_a >= d_N + d_L).
    ResidualFilterState(const DaeModel& model, const DenominatorPoly& a, int d_N = -1,
                        bool cache_numerators = false);

    int d_a() const { return d_a_; }
    int d_N() const { return d_N_; }
    long sample_index() const { return k_; }

    friend double step(ResidualFilterState& state, const DaeModel& model,
                       const DenominatorPoly& a, const SynthesisOptions& opt,
                       const Vector& z_k, const SchedulingPoint& w_k);

  private:
    int d_a_ = 0;
    int d_N_ = 0;
    int d_L_ = 0;
    int n_z_ = 0;
    long k_ = 0;
    bool cache_enabled_ = false;
    std::deque<Vector> z_hist_;
    std::deque<SchedulingPoint> w_hist_;
    std::deque<double> r_hist_;  // r(k-d_a) ... r(k-1), oldest first
    std::unordered_map<std::string, RowVector> numerator_cache_;
};

// Advance one sample: push (z_k, w_k), synthesize the regularized numerator
// for the current parameter window, and evaluate
//   r(k) = a_{d_a}^{-1} [ E(w) z_window - sum_{h<d_a} a_h r(k-d_a+h) ]
// where z_window stacks z(k-d_a) ... z(k-d_a+d_N+d_L). Returns 0 and only
// records the inputs while the buffers are still warming up.
double step(ResidualFilterState& state, const DaeModel& model, const DenominatorPoly& a,
            const SynthesisOptions& opt, const Vector& z_k, const SchedulingPoint& w_k);

// Offline convenience: fold step over equal-length traces on a fresh state.
std::vector<double> run_batch(const DaeModel& model, const DenominatorPoly& a,
                              const SynthesisOptions& opt,
                              const std::vector<Vector>& z_trace,
                              const std::vector<SchedulingPoint>& w_trace, int d_N = -1,
                              bool cache_numerators = false);

}  // namespace fdi
