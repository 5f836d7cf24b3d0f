/* SPDX-License-Identifier: Apache-2.0 */

/*
 * evmg: microgrid EV parking-station scheduling and dispatch simulator.
 *
 * Plain C interface over the C++ core. Objects are opaque handles released
 * with the matching *_free function. Every fallible call returns an
 * evmg_status; on failure evmg_last_error() describes the problem until the
 * next call on the same thread.
 */

#ifndef EVMG_H
#define EVMG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EVMG_BUILDING_LIBRARY)
#    define EVMG_API __declspec(dllexport)
#  else
#    define EVMG_API __declspec(dllimport)
#  endif
#else
#  define EVMG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum evmg_status {
    EVMG_OK = 0,
    EVMG_ERR_INVALID_ARGUMENT = 1,
    EVMG_ERR_SCENARIO = 2,     /* parse or validation failure */
    EVMG_ERR_IO = 3,
    EVMG_ERR_INFEASIBLE = 4,
    EVMG_ERR_INVARIANT = 5,    /* internal post-condition failed */
    EVMG_ERR_INTERNAL = 6
} evmg_status;

typedef enum evmg_method {
    EVMG_METHOD_PROPOSED = 0,
    EVMG_METHOD_SCHEDULING_ONLY = 1,
    EVMG_METHOD_UNCONTROLLED = 2
} evmg_method;

typedef enum evmg_accounting {
    EVMG_ACCOUNTING_OFFSET_AND_SELL = 0,
    EVMG_ACCOUNTING_SELL_ONLY = 1,
    EVMG_ACCOUNTING_OFFSET_ONLY = 2
} evmg_accounting;

typedef struct evmg_scenario evmg_scenario;
typedef struct evmg_result evmg_result;

typedef struct evmg_totals {
    double cost_usd;
    double grid_kwh;
    double pv_kwh;
    double charge_kwh;
    double discharge_kwh;
    double export_kwh;
    double offset_kwh;
    double peak_grid_kw;
} evmg_totals;

typedef struct evmg_slot_dispatch {
    int slot;
    double grid_to_load;
    double grid_to_ev;
    double pv_to_load;
    double pv_to_ev;
    double ev_discharge_total;
    double export_kw;
    double ev_charge_total;
    double cost;
    double grid_draw;
    double pv_used;
} evmg_slot_dispatch;

typedef struct evmg_fleet_config {
    int n_evs;
    uint64_t seed;
    int arrival_begin_min;   /* window bounds, minutes after midnight */
    int arrival_end_min;
    int departure_begin_min;
    int departure_end_min;
    double arrival_mean_h;
    double arrival_std_h;
    double departure_mean_h;
    double departure_std_h;
    double soc_mean;
    double soc_std;
    double mode_split;
    double capacity_kwh;
    double target_soc;
    double soc_min;
    double soc_max;
    double charge_efficiency;
    double discharge_efficiency;
} evmg_fleet_config;

typedef struct evmg_fleet_stats {
    int n;
    int n_m2;
    int arrivals_by_hour[24];
    int departures_by_hour[24];
    double soc_mean;
    double soc_std;
} evmg_fleet_stats;

EVMG_API const char* evmg_version(void);
EVMG_API const char* evmg_last_error(void);
EVMG_API const char* evmg_method_name(evmg_method method);
EVMG_API evmg_status evmg_method_parse(const char* name, evmg_method* out);
EVMG_API evmg_status evmg_accounting_parse(const char* name, evmg_accounting* out);

/* Scenarios */
EVMG_API evmg_status evmg_scenario_load(const char* path, evmg_scenario** out);
EVMG_API void evmg_scenario_free(evmg_scenario* scenario);
/* Resamples the fleet with a new seed (sampled fleets only). */
EVMG_API evmg_status evmg_scenario_set_seed(evmg_scenario* scenario, uint64_t seed);
EVMG_API evmg_status evmg_scenario_set_flag_power(evmg_scenario* scenario, double kw);
EVMG_API evmg_status evmg_scenario_set_flag_power_auto(evmg_scenario* scenario);
EVMG_API evmg_status evmg_scenario_set_accounting(evmg_scenario* scenario, evmg_accounting mode);
EVMG_API evmg_status evmg_scenario_flag_power(const evmg_scenario* scenario, double* kw);
EVMG_API evmg_status evmg_scenario_method(const evmg_scenario* scenario, evmg_method* out);
EVMG_API evmg_status evmg_scenario_fleet_size(const evmg_scenario* scenario, size_t* n);
/* Output directory named in the scenario file; "" when absent. */
EVMG_API const char* evmg_scenario_output_dir(const evmg_scenario* scenario);
/* Writes the 16-hex-digit digest plus terminator; buf must hold 17 bytes. */
EVMG_API evmg_status evmg_scenario_digest(const evmg_scenario* scenario, char* buf, size_t len);

/* Simulation */
EVMG_API evmg_status evmg_simulate(const evmg_scenario* scenario, evmg_method method,
                                   evmg_result** out);
EVMG_API void evmg_result_free(evmg_result* result);
EVMG_API evmg_status evmg_result_totals(const evmg_result* result, evmg_totals* out);
EVMG_API evmg_status evmg_result_slot_count(const evmg_result* result, int* n);
EVMG_API evmg_status evmg_result_slot(const evmg_result* result, int slot,
                                      evmg_slot_dispatch* out);
EVMG_API evmg_status evmg_result_departure_soc(const evmg_result* result, size_t ev,
                                               double* soc);
/* timeseries.csv, soc.csv and summary.json into out_dir. */
EVMG_API evmg_status evmg_result_write(const evmg_result* result, const char* out_dir);

/* Runs all three methods; writes compare.json into out_dir. When table is
 * non-null it receives a human-readable table to release with evmg_string_free. */
EVMG_API evmg_status evmg_compare(const evmg_scenario* scenario, const char* out_dir,
                                  char** table);
/* One comparison per flag power value; writes sweep.csv into out_dir. */
EVMG_API evmg_status evmg_sweep_flag_power(const evmg_scenario* scenario, const double* values,
                                           size_t n_values, const char* out_dir);
EVMG_API void evmg_string_free(char* s);

/* Fleets */
EVMG_API void evmg_fleet_config_default(evmg_fleet_config* config);
EVMG_API evmg_status evmg_fleet_config_load(const char* path, evmg_fleet_config* config);
EVMG_API evmg_status evmg_fleet_generate(const evmg_fleet_config* config, const char* csv_path,
                                         evmg_fleet_stats* stats);

#ifdef __cplusplus
}
#endif

#endif /* EVMG_H */
