#include "core/residual.hpp"

#include <cmath>
#include <cstring>

namespace fdi {

namespace {

constexpr double kWindowQuantum = 1e-6;

std::string window_key(const std::deque<SchedulingPoint>& w_hist, int d_N) {
    std::string key;
    key.reserve(static_cast<size_t>(d_N + 1) * 8);
    for (int i = 0; i <= d_N; ++i) {
        for (int c = 0; c < w_hist[i].size(); ++c) {
            const int64_t q = static_cast<int64_t>(std::llround(w_hist[i][c] / kWindowQuantum));
            char buf[sizeof(int64_t)];
            std::memcpy(buf, &q, sizeof(buf));
            key.append(buf, sizeof(buf));
        }
    }
    return key;
}

}  // namespace

ResidualFilterState::ResidualFilterState(const DaeModel& model, const DenominatorPoly& a,
                                         int d_N, bool cache_numerators)
    : d_a_(a.d_a()),
      d_N_(d_N < 0 ? a.d_a() : d_N),
      d_L_(model.L.degree),
      n_z_(model.n_z),
      cache_enabled_(cache_numerators) {
    if (d_a_ < d_N_ + d_L_)
        throw std::invalid_argument("causality violated: d_a < d_N + d_L");
    if (d_N_ < 0) throw std::invalid_argument("d_N must be >= 0");
}

double step(ResidualFilterState& state, const DaeModel& model, const DenominatorPoly& a,
            const SynthesisOptions& opt, const Vector& z_k, const SchedulingPoint& w_k) {
    if (z_k.size() != state.n_z_)
        throw std::invalid_argument("measurement vector has wrong dimension");
    if (a.d_a() != state.d_a_)
        throw std::invalid_argument("denominator degree changed mid-stream");

    state.z_hist_.push_back(z_k);
    state.w_hist_.push_back(w_k);
    if (static_cast<int>(state.z_hist_.size()) > state.d_a_ + 1) {
        state.z_hist_.pop_front();
        state.w_hist_.pop_front();
    }

    const long k = state.k_++;
    if (k < state.d_a_) {  // warm-up: buffers not full yet
        state.r_hist_.push_back(0.0);
        if (static_cast<int>(state.r_hist_.size()) > state.d_a_) state.r_hist_.pop_front();
        return 0.0;
    }

    RowVector E;
    if (state.cache_enabled_) {
        const std::string key = window_key(state.w_hist_, state.d_N_);
        auto it = state.numerator_cache_.find(key);
        if (it != state.numerator_cache_.end()) {
            E = it->second;
        } else {
            ParameterWindow win;
            win.d_a = state.d_a_;
            win.samples.assign(state.w_hist_.begin(), state.w_hist_.begin() + state.d_N_ + 1);
            StackedSystem stk = build_stacked(model, win);
            SynthesizedFilter filt = synthesize_analytic(stk, opt);
            build_numerator(filt, stk, a);
            E = filt.E;
            state.numerator_cache_.emplace(key, E);
        }
    } else {
        ParameterWindow win;
        win.d_a = state.d_a_;
        win.samples.assign(state.w_hist_.begin(), state.w_hist_.begin() + state.d_N_ + 1);
        StackedSystem stk = build_stacked(model, win);
        SynthesizedFilter filt = synthesize_analytic(stk, opt);
        build_numerator(filt, stk, a);
        E = filt.E;
    }

    const int zwin_len = state.d_N_ + state.d_L_ + 1;
    Vector zwin(zwin_len * state.n_z_);
    for (int i = 0; i < zwin_len; ++i)
        zwin.segment(i * state.n_z_, state.n_z_) = state.z_hist_[i];

    double acc = E.dot(zwin);
    for (int h = 0; h < state.d_a_; ++h)
        acc -= a.coeffs[h] * state.r_hist_[h];
    const double r = acc / a.coeffs[state.d_a_];

    state.r_hist_.push_back(r);
    if (static_cast<int>(state.r_hist_.size()) > state.d_a_) state.r_hist_.pop_front();
    return r;
}

std::vector<double> run_batch(const DaeModel& model, const DenominatorPoly& a,
                              const SynthesisOptions& opt,
                              const std::vector<Vector>& z_trace,
                              const std::vector<SchedulingPoint>& w_trace, int d_N,
                              bool cache_numerators) {
    if (z_trace.size() != w_trace.size())
        throw std::invalid_argument("measurement and scheduling traces differ in length");
    ResidualFilterState state(model, a, d_N, cache_numerators);
    std::vector<double> r;
    r.reserve(z_trace.size());
    for (size_t k = 0; k < z_trace.size(); ++k)
        r.push_back(step(state, model, a, opt, z_trace[k], w_trace[k]));
    return r;
}

}  // namespace fdi
