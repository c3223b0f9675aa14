#include "kramers/kramers.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "app.hpp"
#include "config.hpp"
#include "kramers/catalog.hpp"
#include "kramers/errors.hpp"

struct kr_model {
  std::unique_ptr<kramers::Model> impl;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_kind;

void clear_error() {
  g_error.clear();
  g_kind.clear();
}

int fail(int status, const std::string& kind, const std::string& msg) {
  g_kind = kind;
  g_error = msg;
  return status;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class F>
int guarded(F&& f) {
  clear_error();
  try {
    return f();
  } catch (const kramers::Error& e) {
    return fail(kramers::exit_code_for(e.kind()), kramers::kind_name(e.kind()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(KR_ERR_USAGE, "InvalidArgument", std::string("bad JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(KR_ERR_NUMERICAL, "OutOfMemory", "allocation failed");
  } catch (const std::exception& e) {
    return fail(KR_ERR_NUMERICAL, "Internal", e.what());
  }
}

nlohmann::json options(const char* text) {
  if (!text || !*text) return nlohmann::json::object();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    kramers::raise(kramers::ErrorKind::InvalidArgument, std::string("options are not valid JSON: ") + e.what());
  }
  if (!j.is_object()) kramers::raise(kramers::ErrorKind::InvalidArgument, "options must be a JSON object");
  return j;
}

using Runner = kramers::AppResult (*)(const kramers::Model&, const nlohmann::json&);

int run(Runner r, const kr_model* model, const char* opts, char** result) {
  if (result) *result = nullptr;
  return guarded([&] {
    if (!model || !model->impl) kramers::raise(kramers::ErrorKind::InvalidArgument, "null model");
    if (!result) kramers::raise(kramers::ErrorKind::InvalidArgument, "null result pointer");
    kramers::AppResult out = r(*model->impl, options(opts));
    *result = dup(out.data.dump());
    if (out.status == KR_ERR_A0) return fail(KR_ERR_A0, "A0Failure", "landscape fails A0; see the report");
    return out.status;
  });
}

int make(kramers::RunConfig cfg, kr_model** out) {
  auto m = std::make_unique<kr_model>();
  m->impl = std::make_unique<kramers::Model>(std::move(cfg));
  *out = m.release();
  return KR_OK;
}

}  // namespace

extern "C" {

int kr_model_from_json(const char* config_json, kr_model** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    if (!config_json || !out) kramers::raise(kramers::ErrorKind::InvalidArgument, "null argument");
    return make(kramers::parse_config(config_json), out);
  });
}

int kr_model_from_file(const char* path, kr_model** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    if (!path || !out) kramers::raise(kramers::ErrorKind::InvalidArgument, "null argument");
    return make(kramers::load_config(path), out);
  });
}

void kr_model_free(kr_model* model) { delete model; }

int kr_analyze(const kr_model* m, const char* o, char** r) { return run(kramers::run_analyze, m, o, r); }
int kr_predict(const kr_model* m, const char* o, char** r) { return run(kramers::run_predict, m, o, r); }
int kr_simulate(const kr_model* m, const char* o, char** r) { return run(kramers::run_simulate, m, o, r); }
int kr_spectrum(const kr_model* m, const char* o, char** r) { return run(kramers::run_spectrum, m, o, r); }
int kr_oracle(const kr_model* m, const char* o, char** r) { return run(kramers::run_oracle, m, o, r); }
int kr_compare(const kr_model* m, const char* o, char** r) { return run(kramers::run_compare, m, o, r); }
int kr_evaluate(const kr_model* m, const char* o, char** r) { return run(kramers::run_evaluate, m, o, r); }

int kr_catalog(char** result) {
  if (result) *result = nullptr;
  return guarded([&] {
    if (!result) kramers::raise(kramers::ErrorKind::InvalidArgument, "null result pointer");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : kramers::catalog())
      arr.push_back({{"name", e.name},
                     {"dimension", e.dimension},
                     {"expression", e.expression},
                     {"params", e.params},
                     {"domain", kramers::domain_json(e.domain)},
                     {"summary", e.summary}});
    *result = dup(arr.dump());
    return KR_OK;
  });
}

void kr_free(char* text) { std::free(text); }

const char* kr_last_error(void) { return g_error.c_str(); }
const char* kr_last_error_kind(void) { return g_kind.c_str(); }
const char* kr_version(void) { return "0.1.0"; }

}  // extern "C"
