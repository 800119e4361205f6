#include "lpvfdi.h"

#include <cstdio>
#include <limits>
#include <string>
#include <utility>

#include "core/scenario.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
lpvfdi_status guarded(Fn&& fn) {
    try {
        fn();
        return LPVFDI_OK;
    } catch (const fdi::ConfigError& e) {
        g_last_error = e.what();
        return LPVFDI_ERR_CONFIG;
    } catch (const fdi::NonIsolableError& e) {
        g_last_error = e.what();
        return LPVFDI_ERR_NOT_ISOLABLE;
    } catch (const fdi::DivergenceError& e) {
        g_last_error = e.what();
        return LPVFDI_ERR_DIVERGED;
    } catch (const fdi::IoError& e) {
        g_last_error = e.what();
        return LPVFDI_ERR_IO;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return LPVFDI_ERR_ARGUMENT;
    } catch (const std::out_of_range& e) {
        g_last_error = e.what();
        return LPVFDI_ERR_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return LPVFDI_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return LPVFDI_ERR_INTERNAL;
    }
}

lpvfdi_status bad_argument(const char* msg) {
    g_last_error = msg;
    return LPVFDI_ERR_ARGUMENT;
}

}  // namespace

struct lpvfdi_config {
    fdi::Config cfg;
};

struct lpvfdi_simlog {
    fdi::CsvTable table;
};

struct lpvfdi_check_report {
    std::vector<fdi::WindowReport> windows;
};

extern "C" {

const char* lpvfdi_version(void) { return fdi::kVersion; }

const char* lpvfdi_last_error(void) { return g_last_error.c_str(); }

/* ------------------------------------------------------------------ */

lpvfdi_status lpvfdi_config_load(const char* path, lpvfdi_config** out) {
    if (!path || !out) return bad_argument("null argument to lpvfdi_config_load");
    *out = nullptr;
    return guarded([&] { *out = new lpvfdi_config{fdi::Config::load(path)}; });
}

lpvfdi_status lpvfdi_config_parse(const char* text, lpvfdi_config** out) {
    if (!text || !out) return bad_argument("null argument to lpvfdi_config_parse");
    *out = nullptr;
    return guarded([&] { *out = new lpvfdi_config{fdi::Config::parse(text)}; });
}

lpvfdi_status lpvfdi_config_set(lpvfdi_config* cfg, const char* section,
                                const char* key, const char* value) {
    if (!cfg || !section || !key || !value)
        return bad_argument("null argument to lpvfdi_config_set");
    return guarded([&] { cfg->cfg.set(section, key, value); });
}

void lpvfdi_config_free(lpvfdi_config* cfg) { delete cfg; }

/* ------------------------------------------------------------------ */

lpvfdi_status lpvfdi_simulate(const lpvfdi_config* cfg, lpvfdi_simlog** out) {
    if (!cfg || !out) return bad_argument("null argument to lpvfdi_simulate");
    *out = nullptr;
    return guarded([&] {
        const fdi::ScenarioConfig sc = fdi::scenario_from_config(cfg->cfg);
        *out = new lpvfdi_simlog{fdi::simlog_to_csv(fdi::simulate(sc))};
    });
}

size_t lpvfdi_simlog_rows(const lpvfdi_simlog* log) {
    return log ? log->table.rows.size() : 0;
}

size_t lpvfdi_simlog_cols(const lpvfdi_simlog* log) {
    return log ? log->table.header.size() : 0;
}

const char* lpvfdi_simlog_column_name(const lpvfdi_simlog* log, size_t col) {
    if (!log || col >= log->table.header.size()) return "";
    return log->table.header[col].c_str();
}

double lpvfdi_simlog_value(const lpvfdi_simlog* log, size_t row, size_t col) {
    if (!log || row >= log->table.rows.size() || col >= log->table.rows[row].size())
        return 0.0;
    return log->table.rows[row][col];
}

lpvfdi_status lpvfdi_simlog_write_csv(const lpvfdi_simlog* log, const char* path) {
    if (!log || !path) return bad_argument("null argument to lpvfdi_simlog_write_csv");
    return guarded([&] {
        const std::string bytes = fdi::csv_serialize(log->table);
        if (std::string(path) == "-") {
            if (std::fwrite(bytes.data(), 1, bytes.size(), stdout) != bytes.size())
                throw fdi::IoError("write to stdout failed");
            std::fflush(stdout);
        } else {
            fdi::write_file(path, bytes);
        }
    });
}

void lpvfdi_simlog_free(lpvfdi_simlog* log) { delete log; }

/* ------------------------------------------------------------------ */

lpvfdi_status lpvfdi_check(const lpvfdi_config* cfg, lpvfdi_check_report** out) {
    if (!cfg || !out) return bad_argument("null argument to lpvfdi_check");
    *out = nullptr;
    return guarded([&] {
        const fdi::ScenarioConfig sc = fdi::scenario_from_config(cfg->cfg);
        *out = new lpvfdi_check_report{fdi::run_check(sc)};
    });
}

size_t lpvfdi_check_count(const lpvfdi_check_report* rep) {
    return rep ? rep->windows.size() : 0;
}

int lpvfdi_check_all_isolable(const lpvfdi_check_report* rep) {
    if (!rep) return 0;
    for (const auto& w : rep->windows)
        if (!w.report.isolable) return 0;
    return 1;
}

int lpvfdi_check_isolable(const lpvfdi_check_report* rep, size_t i) {
    if (!rep || i >= rep->windows.size()) return 0;
    return rep->windows[i].report.isolable ? 1 : 0;
}

int lpvfdi_check_rank_h(const lpvfdi_check_report* rep, size_t i) {
    if (!rep || i >= rep->windows.size()) return 0;
    return rep->windows[i].report.rank_H;
}

int lpvfdi_check_rank_hf(const lpvfdi_check_report* rep, size_t i) {
    if (!rep || i >= rep->windows.size()) return 0;
    return rep->windows[i].report.rank_HF;
}

double lpvfdi_check_window_start(const lpvfdi_check_report* rep, size_t i) {
    if (!rep || i >= rep->windows.size()) return 0.0;
    return rep->windows[i].t0;
}

size_t lpvfdi_check_window_size(const lpvfdi_check_report* rep, size_t i) {
    if (!rep || i >= rep->windows.size()) return 0;
    return rep->windows[i].window.size();
}

double lpvfdi_check_window_value(const lpvfdi_check_report* rep, size_t i, size_t j) {
    if (!rep || i >= rep->windows.size() || j >= rep->windows[i].window.size())
        return 0.0;
    return rep->windows[i].window[j];
}

void lpvfdi_check_report_free(lpvfdi_check_report* rep) { delete rep; }

/* ------------------------------------------------------------------ */

lpvfdi_status lpvfdi_bench(const lpvfdi_config* cfg, int max_threads,
                           lpvfdi_bench_stats* out) {
    if (!cfg || !out) return bad_argument("null argument to lpvfdi_bench");
    return guarded([&] {
        const fdi::ScenarioConfig sc = fdi::scenario_from_config(cfg->cfg);
        if (max_threads <= 0) max_threads = std::numeric_limits<int>::max();
        const fdi::BenchStats st = fdi::run_bench(sc, max_threads);
        out->mean_s = st.mean_s;
        out->median_s = st.median_s;
        out->p99_s = st.p99_s;
        out->max_s = st.max_s;
        out->sampling_period_s = sc.params.h;
        out->steps = st.steps;
        out->threads = st.threads;
    });
}

/* ------------------------------------------------------------------ */

lpvfdi_status lpvfdi_write_manifest(const lpvfdi_config* cfg, const char* command,
                                    const char* config_path, double wall_clock_s,
                                    const char* output_path,
                                    const char* manifest_path) {
    if (!cfg || !command || !config_path || !output_path || !manifest_path)
        return bad_argument("null argument to lpvfdi_write_manifest");
    return guarded([&] {
        const fdi::ScenarioConfig sc = fdi::scenario_from_config(cfg->cfg);
        std::string bytes = fdi::read_file(output_path);
        if (std::string(command) == "simulate")
            bytes = fdi::csv_drop_last_column(bytes);
        fdi::write_manifest(manifest_path, command, config_path, sc, wall_clock_s,
                            output_path, bytes);
    });
}

} /* extern "C" */
