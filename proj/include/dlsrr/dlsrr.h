#ifndef DLSRR_DLSRR_H
#define DLSRR_DLSRR_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DLSRR_API __declspec(dllexport)
#else
#define DLSRR_API __attribute__((visibility("default")))
#endif

typedef enum dlsrr_status {
    DLSRR_OK = 0,
    DLSRR_E_ARGUMENT = 1,      /* null pointer or unknown name */
    DLSRR_E_PARSE = 2,
    DLSRR_E_VALIDATION = 3,
    DLSRR_E_DOMAIN = 4,
    DLSRR_E_IO = 5,
    DLSRR_E_DIVERGENCE = 6,
    DLSRR_E_GROUND_IMPACT = 7,
    DLSRR_E_OPTIMIZATION = 8,
    DLSRR_E_UNSUPPORTED = 9,
    DLSRR_E_INTERNAL = 10
} dlsrr_status;

typedef struct dlsrr_scenario dlsrr_scenario;
typedef struct dlsrr_report dlsrr_report;

typedef struct dlsrr_atmosphere {
    double altitude;        /* m */
    double temperature;     /* K */
    double pressure;        /* Pa */
    double density;         /* kg/m^3 */
    double speed_of_sound;  /* m/s */
} dlsrr_atmosphere;

DLSRR_API const char* dlsrr_version(void);

/* Message of the last failed call on this thread ("" if none). */
DLSRR_API const char* dlsrr_last_error(void);
/* Line number of the last parse error on this thread, 0 if unknown. */
DLSRR_API int dlsrr_last_error_line(void);
DLSRR_API const char* dlsrr_status_name(dlsrr_status status);

DLSRR_API dlsrr_status dlsrr_atmosphere_sample(double altitude, dlsrr_atmosphere* out);

DLSRR_API dlsrr_status dlsrr_scenario_load(const char* path, dlsrr_scenario** out);
/* base_dir may be NULL; relative drag-table paths resolve against it. */
DLSRR_API dlsrr_status dlsrr_scenario_parse(const char* text, const char* base_dir,
                                            dlsrr_scenario** out);
DLSRR_API void dlsrr_scenario_free(dlsrr_scenario* scenario);
DLSRR_API dlsrr_status dlsrr_scenario_set_dt(dlsrr_scenario* scenario, double dt);
/* model: klein, sutton, chapman or detra. */
DLSRR_API dlsrr_status dlsrr_scenario_set_qk(dlsrr_scenario* scenario, const char* model);
DLSRR_API int dlsrr_scenario_needs_optimization(const dlsrr_scenario* scenario);
/* Canonical text; release with dlsrr_string_free. */
DLSRR_API dlsrr_status dlsrr_scenario_emit(const dlsrr_scenario* scenario, char** out);

/* subcommand: ascent, impact, thermal, sweep or tables. Writes into out_dir. */
DLSRR_API dlsrr_status dlsrr_run(const dlsrr_scenario* scenario, const char* subcommand,
                                 const char* out_dir, dlsrr_report** out);
DLSRR_API void dlsrr_report_free(dlsrr_report* report);
/* 1 if any reference check is outside its tolerance. */
DLSRR_API int dlsrr_report_tolerance_failed(const dlsrr_report* report);
DLSRR_API dlsrr_status dlsrr_report_json(const dlsrr_report* report, char** out);
/* Summary values by key, e.g. "apogee_altitude", "range", "impact_speed",
   "max_temperature:T_stag", "final_cylinder_temperature". */
DLSRR_API dlsrr_status dlsrr_report_value(const dlsrr_report* report, const char* key,
                                          double* out);

DLSRR_API void dlsrr_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
