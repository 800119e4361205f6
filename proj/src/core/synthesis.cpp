#include "core/synthesis.hpp"

#include <cmath>
#include <limits>

namespace fdi {

namespace {

double effective_tol_factor(const SynthesisOptions& opt, const Matrix& M) {
    if (opt.rank_tol_factor) {
        if (*opt.rank_tol_factor <= 0.0)
            throw std::invalid_argument("rank_tol_factor must be positive");
        return *opt.rank_tol_factor;
    }
    return static_cast<double>(std::max(M.rows(), M.cols())) *
           std::numeric_limits<double>::epsilon();
}

int numerical_rank(const Vector& sv, double tol_factor) {
    if (sv.size() == 0) return 0;
    const double cutoff = tol_factor * sv[0];
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++r;
    return r;
}

// argmax_j |cand_j F_j| with ties (within 1e-12 relative) going to the lowest
// index, keeping the selection deterministic.
int select_column(const Matrix& candidates, const Matrix& F_bar, Vector& sens_out) {
    const int nc = static_cast<int>(F_bar.cols());
    sens_out.resize(nc);
    for (int j = 0; j < nc; ++j)
        sens_out[j] = candidates.row(j).dot(F_bar.col(j));
    int best = 0;
    for (int j = 1; j < nc; ++j) {
        const double a = std::abs(sens_out[j]), b = std::abs(sens_out[best]);
        if (a > b * (1.0 + 1e-12)) best = j;
    }
    return best;
}

}  // namespace

IsolabilityReport isolability_check(const StackedSystem& stk, const SynthesisOptions& opt) {
    if (stk.F_bar.rows() != stk.H_bar.rows())
        throw std::invalid_argument("stacked matrices disagree on row count");

    IsolabilityReport rep;
    {
        Eigen::JacobiSVD<Matrix> svd(stk.H_bar);
        rep.rank_H = numerical_rank(svd.singularValues(),
                                    effective_tol_factor(opt, stk.H_bar));
    }
    Matrix HF(stk.H_bar.rows(), stk.H_bar.cols() + stk.F_bar.cols());
    HF << stk.H_bar, stk.F_bar;
    {
        Eigen::JacobiSVD<Matrix> svd(HF);
        rep.rank_HF = numerical_rank(svd.singularValues(), effective_tol_factor(opt, HF));
    }
    rep.isolable = rep.rank_HF > rep.rank_H;
    return rep;
}

SynthesizedFilter synthesize_exact(const StackedSystem& stk, const SynthesisOptions& opt) {
    const auto rows = stk.H_bar.rows();
    Eigen::JacobiSVD<Matrix> svd(stk.H_bar, Eigen::ComputeFullU);
    const double tol_factor = effective_tol_factor(opt, stk.H_bar);
    const int rank = numerical_rank(svd.singularValues(), tol_factor);

    // candidates = 1/2 (Pi F_bar)^T without forming Pi = I - U_r U_r^T densely
    const Matrix Ur = svd.matrixU().leftCols(rank);
    Matrix projected = stk.F_bar - Ur * (Ur.transpose() * stk.F_bar);
    Matrix candidates = 0.5 * projected.transpose();

    Vector sens;
    const int j = select_column(candidates, stk.F_bar, sens);
    const double threshold = tol_factor * stk.F_bar.squaredNorm();
    if (sens.cwiseAbs().maxCoeff() <= threshold)
        throw NonIsolableError("no fault column escapes the disturbance span");

    SynthesizedFilter filt;
    filt.N_bar = candidates.row(j);
    filt.j_star = j;
    filt.target_fault = opt.target_fault;
    filt.exactness = Exactness::exact;
    (void)rows;
    return filt;
}

SynthesizedFilter synthesize_analytic(const StackedSystem& stk, const SynthesisOptions& opt) {
    if (opt.gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
    const auto rows = stk.H_bar.rows();

    Matrix M = stk.H_bar * stk.H_bar.transpose();
    M.diagonal().array() += 1.0 / opt.gamma;
    Eigen::LLT<Matrix> llt(M);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("SPD factorization failed on gamma^{-1} I + H H^T");

    Matrix Y = llt.solve(stk.F_bar);                       // rows x n_fcols
    Matrix candidates = (0.5 / opt.gamma) * Y.transpose();  // one row per fault column

    Vector sens;
    const int j = select_column(candidates, stk.F_bar, sens);
    const double threshold = effective_tol_factor(opt, stk.H_bar) * stk.F_bar.squaredNorm();
    if (sens.cwiseAbs().maxCoeff() <= threshold)
        throw NonIsolableError("no fault column escapes the disturbance span");

    SynthesizedFilter filt;
    filt.N_bar = candidates.row(j);
    filt.j_star = j;
    filt.target_fault = opt.target_fault;
    filt.exactness = Exactness::regularized;
    (void)rows;
    return filt;
}

RowVector dc_fault_gain(const SynthesizedFilter& filt, const StackedSystem& stk,
                        const DenominatorPoly& a) {
    if (a.coeffs.empty()) throw std::invalid_argument("empty denominator");
    const double a1 = a.sum();
    double amax = 0.0;
    for (double c : a.coeffs) amax = std::max(amax, std::abs(c));
    if (std::abs(a1) <= 1e-12 * std::max(1.0, amax))
        throw std::invalid_argument("denominator evaluates to zero at q = 1");

    RowVector NF = filt.N_bar * stk.F_bar;  // 1 x (d_N+d_F+1) n_f
    const int blocks = static_cast<int>(NF.size()) / stk.n_f;
    RowVector gain = RowVector::Zero(stk.n_f);
    for (int b = 0; b < blocks; ++b)
        gain += NF.segment(b * stk.n_f, stk.n_f);
    return -gain / a1;
}

void build_numerator(SynthesizedFilter& filt, const StackedSystem& stk,
                     const DenominatorPoly& a) {
    RowVector gain = dc_fault_gain(filt, stk, a);
    if (stk.n_f == 0) throw std::invalid_argument("model has no fault columns");
    const int target = filt.target_fault;
    if (target < 0 || target >= stk.n_f)
        throw std::invalid_argument("target fault index out of range");
    if (gain[target] == 0.0)
        throw NonIsolableError("zero steady-state fault gain, cannot normalize");
    const double s = 1.0 / gain[target];
    filt.fault_gain = gain;
    filt.E = s * (filt.N_bar * stk.L_bar);
    filt.a = a.coeffs;
}

}  // namespace fdi
