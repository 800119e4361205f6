// fdi: command-line front end for the LPV fault-estimation library.
// Subcommands: check (isolability survey), simulate (scenario to CSV),
// bench (per-step timing). Exit codes: 0 success, 2 configuration error,
// 1 any other failure (including a non-isolable check and a failed bench
// assertion).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "lpvfdi.h"

namespace {

int exit_code_for(lpvfdi_status rc) {
    switch (rc) {
        case LPVFDI_OK:
            return 0;
        case LPVFDI_ERR_CONFIG:
            return 2;
        default:
            return 1;
    }
}

int fail(lpvfdi_status rc) {
    std::fprintf(stderr, "error: %s\n", lpvfdi_last_error());
    return exit_code_for(rc);
}

struct ConfigGuard {
    lpvfdi_config* cfg = nullptr;
    ~ConfigGuard() { lpvfdi_config_free(cfg); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Load the config and apply a --seed override.
lpvfdi_status load_config(const std::string& path, long long seed, bool have_seed,
                          ConfigGuard& guard) {
    lpvfdi_status rc = lpvfdi_config_load(path.c_str(), &guard.cfg);
    if (rc != LPVFDI_OK) return rc;
    if (have_seed)
        rc = lpvfdi_config_set(guard.cfg, "noise", "seed", std::to_string(seed).c_str());
    return rc;
}

bool write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    return static_cast<bool>(out);
}

// Write a report file plus its manifest; returns an exit code (0 = ok).
int emit_output(lpvfdi_config* cfg, const char* command, const std::string& config_path,
                double wall_s, const std::string& out_path, const std::string& text) {
    if (!write_text(out_path, text)) {
        std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
        return 1;
    }
    const std::string manifest = out_path + ".manifest";
    lpvfdi_status rc = lpvfdi_write_manifest(cfg, command, config_path.c_str(), wall_s,
                                             out_path.c_str(), manifest.c_str());
    if (rc != LPVFDI_OK) return fail(rc);
    std::fprintf(stderr, "wrote %s (manifest: %s)\n", out_path.c_str(),
                 manifest.c_str());
    return 0;
}

int cmd_check(const std::string& config_path, long long seed, bool have_seed,
              const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    ConfigGuard guard;
    lpvfdi_status rc = load_config(config_path, seed, have_seed, guard);
    if (rc != LPVFDI_OK) return fail(rc);

    lpvfdi_check_report* rep = nullptr;
    rc = lpvfdi_check(guard.cfg, &rep);
    if (rc != LPVFDI_OK) return fail(rc);

    std::string text;
    char line[256];
    const size_t n = lpvfdi_check_count(rep);
    size_t bad = 0;
    for (size_t i = 0; i < n; ++i) {
        const size_t wn = lpvfdi_check_window_size(rep, i);
        std::string window;
        for (size_t j = 0; j < wn; ++j) {
            char cell[32];
            std::snprintf(cell, sizeof(cell), "%s%.6g", j ? "," : "",
                          lpvfdi_check_window_value(rep, i, j));
            window += cell;
        }
        const int isolable = lpvfdi_check_isolable(rep, i);
        if (!isolable) ++bad;
        std::snprintf(line, sizeof(line),
                      "window %3zu  t0=%-7.4g v=[%s]  rank_H=%d rank_HF=%d isolable=%s\n",
                      i, lpvfdi_check_window_start(rep, i), window.c_str(),
                      lpvfdi_check_rank_h(rep, i), lpvfdi_check_rank_hf(rep, i),
                      isolable ? "yes" : "no");
        text += line;
    }
    std::snprintf(line, sizeof(line), "checked %zu windows: %zu isolable, %zu not\n", n,
                  n - bad, bad);
    text += line;
    const int all = lpvfdi_check_all_isolable(rep);
    lpvfdi_check_report_free(rep);

    std::fputs(text.c_str(), stdout);
    if (!out_path.empty()) {
        const int code = emit_output(guard.cfg, "check", config_path,
                                     seconds_since(t0), out_path, text);
        if (code != 0) return code;
    }
    return all ? 0 : 1;
}

int cmd_simulate(const std::string& config_path, long long seed, bool have_seed,
                 const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    ConfigGuard guard;
    lpvfdi_status rc = load_config(config_path, seed, have_seed, guard);
    if (rc != LPVFDI_OK) return fail(rc);

    lpvfdi_simlog* log = nullptr;
    rc = lpvfdi_simulate(guard.cfg, &log);
    if (rc != LPVFDI_OK) return fail(rc);

    const std::string target = out_path.empty() ? "-" : out_path;
    rc = lpvfdi_simlog_write_csv(log, target.c_str());
    const size_t rows = lpvfdi_simlog_rows(log);
    lpvfdi_simlog_free(log);
    if (rc != LPVFDI_OK) return fail(rc);

    if (!out_path.empty()) {
        const std::string manifest = out_path + ".manifest";
        rc = lpvfdi_write_manifest(guard.cfg, "simulate", config_path.c_str(),
                                   seconds_since(t0), out_path.c_str(),
                                   manifest.c_str());
        if (rc != LPVFDI_OK) return fail(rc);
        std::fprintf(stderr, "wrote %zu rows to %s (manifest: %s)\n", rows,
                     out_path.c_str(), manifest.c_str());
    }
    return 0;
}

int cmd_bench(const std::string& config_path, long long seed, bool have_seed,
              const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    ConfigGuard guard;
    lpvfdi_status rc = load_config(config_path, seed, have_seed, guard);
    if (rc != LPVFDI_OK) return fail(rc);

    int cap = 0;  // 0 = hardware concurrency
    if (const char* env = std::getenv("FDI_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            std::fprintf(stderr, "error: FDI_THREADS must be a positive integer\n");
            return 2;
        }
        cap = static_cast<int>(v);
    }

    lpvfdi_bench_stats st;
    rc = lpvfdi_bench(guard.cfg, cap, &st);
    if (rc != LPVFDI_OK) return fail(rc);

    const bool pass = st.mean_s < st.sampling_period_s;
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "steps=%lld threads=%d\n"
                  "mean_s=%.6e\nmedian_s=%.6e\np99_s=%.6e\nmax_s=%.6e\n"
                  "mean %.6e s < sampling period %g s: %s\n",
                  static_cast<long long>(st.steps), st.threads, st.mean_s, st.median_s,
                  st.p99_s, st.max_s, st.mean_s, st.sampling_period_s,
                  pass ? "PASS" : "FAIL");
    const std::string text = buf;
    std::fputs(text.c_str(), stdout);

    if (!out_path.empty()) {
        const int code = emit_output(guard.cfg, "bench", config_path, seconds_since(t0),
                                     out_path, text);
        if (code != 0) return code;
    }
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Real-time fault estimation filters for LPV systems"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    long long seed = 0;

    CLI::App* subs[3];
    subs[0] = app.add_subcommand("check",
                                 "Survey fault isolability over sampled parameter windows");
    subs[1] = app.add_subcommand("simulate",
                                 "Run the closed-loop scenario and write the CSV log");
    subs[2] = app.add_subcommand("bench", "Measure per-step filter timing");
    for (CLI::App* sub : subs) {
        sub->add_option("--config", config_path, "Path to the scenario config file")
            ->required();
        sub->add_option("--seed", seed, "Override the noise seed");
        sub->add_option("--out", out_path,
                        "Output file (simulate defaults to stdout; a manifest is "
                        "written next to the file)");
    }

    CLI11_PARSE(app, argc, argv);

    const bool have_seed = subs[0]->count("--seed") || subs[1]->count("--seed") ||
                           subs[2]->count("--seed");
    if (subs[0]->parsed()) return cmd_check(config_path, seed, have_seed, out_path);
    if (subs[1]->parsed()) return cmd_simulate(config_path, seed, have_seed, out_path);
    return cmd_bench(config_path, seed, have_seed, out_path);
}
