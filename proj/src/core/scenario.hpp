#pragma once

// Lane-keeping case study: closed-loop simulation of the lateral bicycle
// model under a sinusoidal velocity schedule, with road disturbances, sensor
// noise, an additive steering fault, and two residual generators running in
// parallel (parameter-varying filter + frozen-velocity baseline).

#include <optional>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/io.hpp"
#include "core/residual.hpp"
#include "core/vehicle.hpp"

namespace fdi {

inline constexpr const char* kVersion = "0.1.0";

struct ScenarioConfig {
    // [model]
    BicycleParams params;
    MatrixSigns signs = MatrixSigns::standard;
    bool fault_channel = true;  // fault_channel = input | none
    double v_min = 5.0;
    double v_max = 60.0;

    // [scenario]
    long n_samples = 500;
    double v0 = 19.0;          // v_x(t) = v0 + v_amp sin(v_omega t)
    double v_amp = 5.0;
    double v_omega = 0.0;      // set to 0.1*pi by the default constructor below
    double fault_magnitude = 0.0;  // 0.1*pi/180 rad, see constructor
    long fault_start = 150;
    double phi_amp = 0.03;     // road banking angle, rad
    double phi_omega = 0.0;    // 0.2*pi
    double kappa_amp = 0.002;  // road curvature, 1/m
    double kappa_omega = 0.0;  // 0.05*pi
    double lti_velocity = 19.0;
    PdGains gains;
    long bench_repetitions = 10;
    long check_windows = 100;

    // [filter]
    std::vector<double> poles = {-0.95, -0.95, -0.95};
    double gamma = 1e13;  // runtime regularization, calibrated for this plant
    std::optional<double> rank_tol_factor;
    long d_n = -1;  // negative selects d_N = number of poles
    bool cache = true;
    long target_fault = 0;

    // [noise]
    bool noise_enabled = true;
    unsigned long long seed = 1;
    double sigma_yawrate = 8e-4;
    double sigma_lat = 5e-2;
    double sigma_head = 3e-3;

    ScenarioConfig();

    int resolved_d_n() const {
        return d_n < 0 ? static_cast<int>(poles.size()) : static_cast<int>(d_n);
    }
};

// Config file mapping. from_config rejects unknown keys (the [manifest]
// section is ignored so a manifest doubles as a re-runnable config);
// to_config writes every key back resolved.
ScenarioConfig scenario_from_config(const Config& cfg);
void scenario_into_config(const ScenarioConfig& sc, Config& out);
Config scenario_to_config(const ScenarioConfig& sc);

struct SimRow {
    long k = 0;
    double t = 0, v_x = 0, u = 0;
    double y_yawrate = 0, y_lat = 0, y_head = 0;  // measured outputs (noise included)
    double phi = 0, kappa = 0;                    // disturbance signals
    double f_true = 0;
    double r_lpv = 0, r_lti = 0;
    double synth_time_s = 0;  // wall clock of both filter steps at this sample
};

struct SimLog {
    std::vector<SimRow> rows;
};

const std::vector<std::string>& sim_csv_header();
CsvTable simlog_to_csv(const SimLog& log);

// Run the closed-loop scenario. Throws DivergenceError when the plant state
// leaves |X| <= 1e6 and NonIsolableError when synthesis fails.
SimLog simulate(const ScenarioConfig& sc);

// Frozen-velocity filter: synthesized once on a constant window at v_fixed
// with the same regularized path the streaming runtime uses.
SynthesizedFilter lti_baseline_filter(const DaeModel& model, const DenominatorPoly& a,
                                      const SynthesisOptions& opt, double v_fixed,
                                      int d_N);

// Isolability survey across parameter windows sampled along the velocity
// schedule.
struct WindowReport {
    double t0 = 0;                // time of the oldest window sample
    std::vector<double> window;   // velocity samples, oldest first
    IsolabilityReport report;
};

std::vector<WindowReport> run_check(const ScenarioConfig& sc);

// Timing benchmark: repeats the scenario and aggregates per-step filter
// times (warm-up samples excluded). Repetitions spread across at most
// max_threads worker threads with fully independent states.
struct BenchStats {
    double mean_s = 0, median_s = 0, p99_s = 0, max_s = 0;
    long steps = 0;
    int threads = 1;
};

BenchStats run_bench(const ScenarioConfig& sc, int max_threads);

// Write a run manifest next to an output file: a [manifest] section with the
// command, version, seed, timing and an FNV-1a digest of the output bytes,
// followed by the fully resolved scenario so the manifest re-runs as a config.
void write_manifest(const std::string& path, const std::string& command,
                    const std::string& config_path, const ScenarioConfig& sc,
                    double wall_clock_s, const std::string& output_path,
                    const std::string& output_bytes);

}  // namespace fdi
