#include "core/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "core/gaussian.hpp"

namespace fdi {

ScenarioConfig::ScenarioConfig() {
    v_omega = 0.1 * std::numbers::pi;
    fault_magnitude = 0.1 * std::numbers::pi / 180.0;  // 0.1 degree offset
    phi_omega = 0.2 * std::numbers::pi;
    kappa_omega = 0.05 * std::numbers::pi;
}

// ---------------------------------------------------------------------------
// config mapping

namespace {

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "model.c_f", "model.c_r", "model.l_f", "model.l_r", "model.m", "model.i_z",
        "model.g", "model.h", "model.matrix_signs", "model.fault_channel",
        "model.v_min", "model.v_max",
        "scenario.n_samples", "scenario.v0", "scenario.v_amp", "scenario.v_omega",
        "scenario.fault_magnitude", "scenario.fault_start", "scenario.phi_amp",
        "scenario.phi_omega", "scenario.kappa_amp", "scenario.kappa_omega",
        "scenario.lti_velocity", "scenario.kp", "scenario.kd", "scenario.kpsi",
        "scenario.bench_repetitions", "scenario.check_windows",
        "filter.poles", "filter.gamma", "filter.rank_tol_factor", "filter.d_n",
        "filter.cache", "filter.target_fault",
        "noise.enabled", "noise.seed", "noise.sigma_yawrate", "noise.sigma_lat",
        "noise.sigma_head",
    };
    return keys;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

}  // namespace

ScenarioConfig scenario_from_config(const Config& cfg) {
    auto unknown = cfg.unknown_keys(known_keys(), {"manifest"});
    if (!unknown.empty()) {
        std::string msg = cfg.origin() + ": unknown configuration keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw ConfigError(msg);
    }

    ScenarioConfig sc;
    sc.params.C_f = cfg.get_double("model", "c_f", sc.params.C_f);
    sc.params.C_r = cfg.get_double("model", "c_r", sc.params.C_r);
    sc.params.l_f = cfg.get_double("model", "l_f", sc.params.l_f);
    sc.params.l_r = cfg.get_double("model", "l_r", sc.params.l_r);
    sc.params.m = cfg.get_double("model", "m", sc.params.m);
    sc.params.I_z = cfg.get_double("model", "i_z", sc.params.I_z);
    sc.params.g = cfg.get_double("model", "g", sc.params.g);
    sc.params.h = cfg.get_double("model", "h", sc.params.h);
    validate(sc.params);

    std::string signs = cfg.get_string("model", "matrix_signs", "standard");
    if (signs == "standard")
        sc.signs = MatrixSigns::standard;
    else if (signs == "as_printed")
        sc.signs = MatrixSigns::as_printed;
    else
        throw ConfigError(cfg.origin() +
                          ": matrix_signs must be 'standard' or 'as_printed', got '" +
                          signs + "'");

    std::string fch = cfg.get_string("model", "fault_channel", "input");
    if (fch == "input")
        sc.fault_channel = true;
    else if (fch == "none")
        sc.fault_channel = false;
    else
        throw ConfigError(cfg.origin() + ": fault_channel must be 'input' or 'none', got '" +
                          fch + "'");

    sc.v_min = cfg.get_double("model", "v_min", sc.v_min);
    sc.v_max = cfg.get_double("model", "v_max", sc.v_max);
    if (!(0.0 < sc.v_min && sc.v_min < sc.v_max))
        throw ConfigError(cfg.origin() + ": need 0 < v_min < v_max");

    sc.n_samples = cfg.get_int("scenario", "n_samples", sc.n_samples);
    if (sc.n_samples < 0) throw ConfigError(cfg.origin() + ": n_samples must be >= 0");
    sc.v0 = cfg.get_double("scenario", "v0", sc.v0);
    sc.v_amp = cfg.get_double("scenario", "v_amp", sc.v_amp);
    sc.v_omega = cfg.get_double("scenario", "v_omega", sc.v_omega);
    sc.fault_magnitude =
        cfg.get_double("scenario", "fault_magnitude", sc.fault_magnitude);
    sc.fault_start = cfg.get_int("scenario", "fault_start", sc.fault_start);
    if (sc.fault_start < 0) throw ConfigError(cfg.origin() + ": fault_start must be >= 0");
    sc.phi_amp = cfg.get_double("scenario", "phi_amp", sc.phi_amp);
    sc.phi_omega = cfg.get_double("scenario", "phi_omega", sc.phi_omega);
    sc.kappa_amp = cfg.get_double("scenario", "kappa_amp", sc.kappa_amp);
    sc.kappa_omega = cfg.get_double("scenario", "kappa_omega", sc.kappa_omega);
    sc.lti_velocity = cfg.get_double("scenario", "lti_velocity", sc.lti_velocity);
    sc.gains.k_p = cfg.get_double("scenario", "kp", sc.gains.k_p);
    sc.gains.k_d = cfg.get_double("scenario", "kd", sc.gains.k_d);
    sc.gains.k_psi = cfg.get_double("scenario", "kpsi", sc.gains.k_psi);
    sc.bench_repetitions =
        cfg.get_int("scenario", "bench_repetitions", sc.bench_repetitions);
    if (sc.bench_repetitions < 1)
        throw ConfigError(cfg.origin() + ": bench_repetitions must be >= 1");
    sc.check_windows = cfg.get_int("scenario", "check_windows", sc.check_windows);
    if (sc.check_windows < 1)
        throw ConfigError(cfg.origin() + ": check_windows must be >= 1");

    if (cfg.has("filter", "poles")) sc.poles = cfg.get_double_list("filter", "poles");
    sc.gamma = cfg.get_double("filter", "gamma", sc.gamma);
    if (!(sc.gamma > 0)) throw ConfigError(cfg.origin() + ": gamma must be positive");
    std::string rtf = cfg.get_string("filter", "rank_tol_factor", "auto");
    if (rtf == "auto")
        sc.rank_tol_factor.reset();
    else {
        double v = cfg.get_double("filter", "rank_tol_factor");
        if (!(v > 0))
            throw ConfigError(cfg.origin() + ": rank_tol_factor must be positive or 'auto'");
        sc.rank_tol_factor = v;
    }
    sc.d_n = cfg.get_int("filter", "d_n", sc.d_n);
    sc.cache = cfg.get_bool("filter", "cache", sc.cache);
    sc.target_fault = cfg.get_int("filter", "target_fault", sc.target_fault);
    if (sc.target_fault < 0)
        throw ConfigError(cfg.origin() + ": target_fault must be >= 0");

    sc.noise_enabled = cfg.get_bool("noise", "enabled", sc.noise_enabled);
    long seed = cfg.get_int("noise", "seed", static_cast<long>(sc.seed));
    if (seed < 0) throw ConfigError(cfg.origin() + ": seed must be >= 0");
    sc.seed = static_cast<unsigned long long>(seed);
    sc.sigma_yawrate = cfg.get_double("noise", "sigma_yawrate", sc.sigma_yawrate);
    sc.sigma_lat = cfg.get_double("noise", "sigma_lat", sc.sigma_lat);
    sc.sigma_head = cfg.get_double("noise", "sigma_head", sc.sigma_head);
    if (sc.sigma_yawrate < 0 || sc.sigma_lat < 0 || sc.sigma_head < 0)
        throw ConfigError(cfg.origin() + ": noise sigmas must be >= 0");
    return sc;
}

void scenario_into_config(const ScenarioConfig& sc, Config& out) {
    out.set("model", "c_f", format_double(sc.params.C_f));
    out.set("model", "c_r", format_double(sc.params.C_r));
    out.set("model", "l_f", format_double(sc.params.l_f));
    out.set("model", "l_r", format_double(sc.params.l_r));
    out.set("model", "m", format_double(sc.params.m));
    out.set("model", "i_z", format_double(sc.params.I_z));
    out.set("model", "g", format_double(sc.params.g));
    out.set("model", "h", format_double(sc.params.h));
    out.set("model", "matrix_signs",
            sc.signs == MatrixSigns::standard ? "standard" : "as_printed");
    out.set("model", "fault_channel", sc.fault_channel ? "input" : "none");
    out.set("model", "v_min", format_double(sc.v_min));
    out.set("model", "v_max", format_double(sc.v_max));

    out.set("scenario", "n_samples", std::to_string(sc.n_samples));
    out.set("scenario", "v0", format_double(sc.v0));
    out.set("scenario", "v_amp", format_double(sc.v_amp));
    out.set("scenario", "v_omega", format_double(sc.v_omega));
    out.set("scenario", "fault_magnitude", format_double(sc.fault_magnitude));
    out.set("scenario", "fault_start", std::to_string(sc.fault_start));
    out.set("scenario", "phi_amp", format_double(sc.phi_amp));
    out.set("scenario", "phi_omega", format_double(sc.phi_omega));
    out.set("scenario", "kappa_amp", format_double(sc.kappa_amp));
    out.set("scenario", "kappa_omega", format_double(sc.kappa_omega));
    out.set("scenario", "lti_velocity", format_double(sc.lti_velocity));
    out.set("scenario", "kp", format_double(sc.gains.k_p));
    out.set("scenario", "kd", format_double(sc.gains.k_d));
    out.set("scenario", "kpsi", format_double(sc.gains.k_psi));
    out.set("scenario", "bench_repetitions", std::to_string(sc.bench_repetitions));
    out.set("scenario", "check_windows", std::to_string(sc.check_windows));

    out.set("filter", "poles", join_doubles(sc.poles));
    out.set("filter", "gamma", format_double(sc.gamma));
    out.set("filter", "rank_tol_factor",
            sc.rank_tol_factor ? format_double(*sc.rank_tol_factor) : "auto");
    out.set("filter", "d_n", std::to_string(sc.resolved_d_n()));
    out.set("filter", "cache", sc.cache ? "on" : "off");
    out.set("filter", "target_fault", std::to_string(sc.target_fault));

    out.set("noise", "enabled", sc.noise_enabled ? "on" : "off");
    out.set("noise", "seed", std::to_string(sc.seed));
    out.set("noise", "sigma_yawrate", format_double(sc.sigma_yawrate));
    out.set("noise", "sigma_lat", format_double(sc.sigma_lat));
    out.set("noise", "sigma_head", format_double(sc.sigma_head));
}

Config scenario_to_config(const ScenarioConfig& sc) {
    Config out;
    scenario_into_config(sc, out);
    return out;
}

// ---------------------------------------------------------------------------
// simulation

const std::vector<std::string>& sim_csv_header() {
    static const std::vector<std::string> header = {
        "k", "t", "v_x", "u", "y_yawrate", "y_lat", "y_head", "phi",
        "kappa", "f_true", "r_lpv", "r_lti", "synth_time_s"};
    return header;
}

CsvTable simlog_to_csv(const SimLog& log) {
    CsvTable table;
    table.header = sim_csv_header();
    table.rows.reserve(log.rows.size());
    for (const SimRow& r : log.rows)
        table.rows.push_back({static_cast<double>(r.k), r.t, r.v_x, r.u, r.y_yawrate,
                              r.y_lat, r.y_head, r.phi, r.kappa, r.f_true, r.r_lpv,
                              r.r_lti, r.synth_time_s});
    return table;
}

namespace {

SynthesisOptions make_options(const ScenarioConfig& sc) {
    SynthesisOptions opt;
    opt.gamma = sc.gamma;
    opt.rank_tol_factor = sc.rank_tol_factor;
    opt.target_fault = static_cast<int>(sc.target_fault);
    return opt;
}

void check_schedule_inside_box(const ScenarioConfig& sc) {
    const double lo = sc.v0 - std::abs(sc.v_amp);
    const double hi = sc.v0 + std::abs(sc.v_amp);
    if (lo < sc.v_min || hi > sc.v_max)
        throw std::invalid_argument(
            "velocity schedule leaves the scheduling box [v_min, v_max]");
    if (sc.lti_velocity < sc.v_min || sc.lti_velocity > sc.v_max)
        throw std::invalid_argument("lti_velocity outside [v_min, v_max]");
}

}  // namespace

SimLog simulate(const ScenarioConfig& sc) {
    validate(sc.params);
    check_schedule_inside_box(sc);
    if (sc.n_samples < 0) throw std::invalid_argument("n_samples must be >= 0");

    const LpvStateSpace ss =
        bicycle_model(sc.params, sc.signs, sc.v_min, sc.v_max, sc.fault_channel);
    const DaeModel dae = ss_to_dae(ss);
    const DenominatorPoly a = make_denominator(sc.poles);
    const SynthesisOptions opt = make_options(sc);
    const int d_N = sc.resolved_d_n();

    ResidualFilterState lpv_state(dae, a, d_N, sc.cache);
    // constant window: caching is always a win and bit-identical
    ResidualFilterState lti_state(dae, a, d_N, true);

    GaussianRng rng(sc.seed);
    const double h = sc.params.h;
    const SchedulingPoint w_lti = Vector::Constant(1, sc.lti_velocity);

    // truth-side discretization, memoized on the exact velocity bits
    std::unordered_map<std::uint64_t, DiscreteMatrices> disc_cache;
    auto disc = [&](double v) -> const DiscreteMatrices& {
        std::uint64_t key;
        std::memcpy(&key, &v, sizeof key);
        auto it = disc_cache.find(key);
        if (it == disc_cache.end())
            it = disc_cache
                     .emplace(key, exact_discretize(
                                       continuous_matrices(sc.params, v, sc.signs),
                                       h))
                     .first;
        return it->second;
    };

    Vector X = Vector::Zero(4);
    double y_e_prev = 0.0;

    SimLog log;
    log.rows.reserve(static_cast<size_t>(sc.n_samples));
    for (long k = 0; k < sc.n_samples; ++k) {
        const double t = static_cast<double>(k) * h;
        const double v = sc.v0 + sc.v_amp * std::sin(sc.v_omega * t);
        const double phi = sc.phi_amp * std::sin(sc.phi_omega * t);
        const double kappa = sc.kappa_amp * std::sin(sc.kappa_omega * t);
        Vector d(2);
        d << std::sin(phi), kappa;

        // measured outputs: (yaw rate, lane error, heading error)
        Vector y(3);
        y << X[1], X[2], X[3];
        if (sc.noise_enabled) {
            y[0] += sc.sigma_yawrate * rng.normal();
            y[1] += sc.sigma_lat * rng.normal();
            y[2] += sc.sigma_head * rng.normal();
        }
        const double u = pd_controller(y[1], y[2], y_e_prev, sc.gains, h);
        y_e_prev = y[1];
        const double f =
            (sc.fault_channel && k >= sc.fault_start) ? sc.fault_magnitude : 0.0;

        Vector z(4);
        z << y[0], y[1], y[2], u;
        const SchedulingPoint w = Vector::Constant(1, v);

        const auto t0 = std::chrono::steady_clock::now();
        const double r_lpv = step(lpv_state, dae, a, opt, z, w);
        const double r_lti = step(lti_state, dae, a, opt, z, w_lti);
        const auto t1 = std::chrono::steady_clock::now();

        SimRow row;
        row.k = k;
        row.t = t;
        row.v_x = v;
        row.u = u;
        row.y_yawrate = y[0];
        row.y_lat = y[1];
        row.y_head = y[2];
        row.phi = phi;
        row.kappa = kappa;
        row.f_true = f;
        row.r_lpv = r_lpv;
        row.r_lti = r_lti;
        row.synth_time_s = std::chrono::duration<double>(t1 - t0).count();
        log.rows.push_back(row);

        const DiscreteMatrices& dm = disc(v);
        X = dm.A * X + dm.B_u * u + dm.B_f * f + dm.B_d * d;
        if (!X.allFinite() || X.cwiseAbs().maxCoeff() > 1e6)
            throw DivergenceError("plant state diverged at sample " + std::to_string(k));
    }
    return log;
}

SynthesizedFilter lti_baseline_filter(const DaeModel& model, const DenominatorPoly& a,
                                      const SynthesisOptions& opt, double v_fixed,
                                      int d_N) {
    if (model.w_bounds.lo.size() != 1)
        throw std::invalid_argument("fixed-velocity baseline expects a scalar schedule");
    ParameterWindow win;
    win.d_a = a.d_a();
    win.samples.assign(static_cast<size_t>(d_N) + 1, Vector::Constant(1, v_fixed));
    const StackedSystem stk = build_stacked(model, win);
    SynthesizedFilter filt = synthesize_analytic(stk, opt);
    build_numerator(filt, stk, a);
    return filt;
}

// ---------------------------------------------------------------------------
// isolability survey

std::vector<WindowReport> run_check(const ScenarioConfig& sc) {
    validate(sc.params);
    check_schedule_inside_box(sc);
    const LpvStateSpace ss =
        bicycle_model(sc.params, sc.signs, sc.v_min, sc.v_max, sc.fault_channel);
    const DaeModel dae = ss_to_dae(ss);
    const SynthesisOptions opt = make_options(sc);
    const int d_N = sc.resolved_d_n();
    const int d_a = static_cast<int>(sc.poles.size());
    const double h = sc.params.h;
    const double span = static_cast<double>(sc.n_samples > 0 ? sc.n_samples : 500) * h;

    std::vector<WindowReport> out;
    out.reserve(static_cast<size_t>(sc.check_windows));
    for (long i = 0; i < sc.check_windows; ++i) {
        WindowReport rep;
        rep.t0 = span * static_cast<double>(i) / static_cast<double>(sc.check_windows);
        ParameterWindow win;
        win.d_a = d_a;
        for (int j = 0; j <= d_N; ++j) {
            const double v =
                sc.v0 + sc.v_amp * std::sin(sc.v_omega * (rep.t0 + j * h));
            rep.window.push_back(v);
            win.samples.push_back(Vector::Constant(1, v));
        }
        rep.report = isolability_check(build_stacked(dae, win), opt);
        out.push_back(std::move(rep));
    }
    return out;
}

// ---------------------------------------------------------------------------
// benchmark

BenchStats run_bench(const ScenarioConfig& sc, int max_threads) {
    if (sc.bench_repetitions < 1)
        throw std::invalid_argument("bench repetitions must be >= 1");
    const long reps = sc.bench_repetitions;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    int threads =
        static_cast<int>(std::min<long>({static_cast<long>(std::max(max_threads, 1)),
                                         reps, static_cast<long>(hw)}));
    const int d_a = static_cast<int>(sc.poles.size());

    std::vector<std::vector<double>> per_thread(static_cast<size_t>(threads));
    std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
    std::atomic<long> next{0};
    auto worker = [&](int ti) {
        try {
            while (true) {
                const long r = next.fetch_add(1);
                if (r >= reps) break;
                const SimLog log = simulate(sc);
                for (const SimRow& row : log.rows)
                    if (row.k >= d_a) per_thread[ti].push_back(row.synth_time_s);
            }
        } catch (...) {
            errors[ti] = std::current_exception();
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int ti = 0; ti < threads; ++ti) pool.emplace_back(worker, ti);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<double> all;
    for (auto& v : per_thread) all.insert(all.end(), v.begin(), v.end());
    if (all.empty())
        throw std::invalid_argument(
            "scenario too short to benchmark: no samples past the warm-up");
    std::sort(all.begin(), all.end());

    auto quantile = [&](double p) {
        const double idx = p * static_cast<double>(all.size());
        size_t i = static_cast<size_t>(std::ceil(idx));
        if (i > 0) --i;
        if (i >= all.size()) i = all.size() - 1;
        return all[i];
    };

    BenchStats st;
    st.steps = static_cast<long>(all.size());
    st.threads = threads;
    st.mean_s = std::accumulate(all.begin(), all.end(), 0.0) /
                static_cast<double>(all.size());
    st.median_s = quantile(0.5);
    st.p99_s = quantile(0.99);
    st.max_s = all.back();
    return st;
}

// ---------------------------------------------------------------------------
// manifest

void write_manifest(const std::string& path, const std::string& command,
                    const std::string& config_path, const ScenarioConfig& sc,
                    double wall_clock_s, const std::string& output_path,
                    const std::string& output_bytes) {
    Config m;
    m.set("manifest", "command", command);
    m.set("manifest", "config_path", config_path);
    m.set("manifest", "version", kVersion);
    m.set("manifest", "seed", std::to_string(sc.seed));
    m.set("manifest", "wall_clock_s", format_double(wall_clock_s));
    m.set("manifest", "output", output_path);
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(output_bytes)));
    m.set("manifest", "output_hash_fnv1a64", hex);
    scenario_into_config(sc, m);
    write_file(path, m.serialize());
}

}  // namespace fdi
