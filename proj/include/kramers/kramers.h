#ifndef KRAMERS_KRAMERS_H
#define KRAMERS_KRAMERS_H

#if defined(KRAMERS_BUILDING_LIBRARY)
#define KR_API __attribute__((visibility("default")))
#else
#define KR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct kr_model kr_model;

/* status values double as CLI exit codes */
enum kr_status {
  KR_OK = 0,
  KR_ERR_USAGE = 2,      /* bad config, options or arguments */
  KR_ERR_A0 = 3,         /* non-Morse landscape or critical point on the boundary */
  KR_ERR_HYPOTHESIS = 4, /* well assumptions A1-A3 not met */
  KR_ERR_NUMERICAL = 5
};

/* Config and options are JSON text; results are JSON text owned by the
   caller and released with kr_free. On failure *result is NULL, except for
   kr_analyze, which still returns its report together with KR_ERR_A0. */
KR_API int kr_model_from_json(const char* config_json, kr_model** out);
KR_API int kr_model_from_file(const char* path, kr_model** out);
KR_API void kr_model_free(kr_model* model);

KR_API int kr_analyze(const kr_model* model, const char* options_json, char** result);
KR_API int kr_predict(const kr_model* model, const char* options_json, char** result);
KR_API int kr_simulate(const kr_model* model, const char* options_json, char** result);
KR_API int kr_spectrum(const kr_model* model, const char* options_json, char** result);
KR_API int kr_oracle(const kr_model* model, const char* options_json, char** result);
KR_API int kr_compare(const kr_model* model, const char* options_json, char** result);
KR_API int kr_evaluate(const kr_model* model, const char* options_json, char** result);

/* names and domains of the built-in potentials */
KR_API int kr_catalog(char** result);

KR_API void kr_free(char* text);
/* message and kind name of the last failure on this thread, "" if none */
KR_API const char* kr_last_error(void);
KR_API const char* kr_last_error_kind(void);
KR_API const char* kr_version(void);

#ifdef __cplusplus
}
#endif

#endif
