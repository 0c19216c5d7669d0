#include "tds/tds.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "json_io.hpp"

using namespace tds;

struct tds_system {
    CharFun cf;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

tds_status status_of(const Error& e) {
    switch (e.code()) {
    case ErrorCode::Parse: return TDS_EPARSE;
    case ErrorCode::Invalid: return TDS_EINVALID;
    case ErrorCode::Precondition: return TDS_EPRECOND;
    case ErrorCode::Sweep: return TDS_ESWEEP;
    case ErrorCode::Contour: return TDS_ECONTOUR;
    default: return TDS_EINTERNAL;
    }
}

template <typename Fn> tds_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return TDS_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TDS_EINTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return TDS_EINTERNAL;
    }
}

tds_status require(bool cond, const char* message) {
    if (cond) return TDS_OK;
    g_last_error = message;
    return TDS_EINVALID;
}

} // namespace

extern "C" {

const char* tds_version(void) { return "0.1.0"; }

const char* tds_last_error(void) { return g_last_error.c_str(); }

void tds_free_string(char* s) { std::free(s); }

tds_status tds_system_parse(const char* descriptor_json, tds_system** out) {
    if (tds_status st = require(descriptor_json && out, "null argument")) return st;
    *out = nullptr;
    return guarded([&] { *out = new tds_system{charfun_from_json(descriptor_json)}; });
}

tds_status tds_system_from_model(const char* model_json, tds_system** out,
                                 char** clearing_report_json) {
    if (tds_status st = require(model_json && out, "null argument")) return st;
    *out = nullptr;
    if (clearing_report_json) *clearing_report_json = nullptr;
    return guarded([&] {
        ConvertedCharFun conv = model_to_charfun(model_from_json(model_json));
        if (clearing_report_json) *clearing_report_json = dup_string(conversion_to_json(conv));
        *out = new tds_system{std::move(conv.cf)};
    });
}

void tds_system_free(tds_system* sys) { delete sys; }

tds_status tds_system_descriptor(const tds_system* sys, char** descriptor_json) {
    if (tds_status st = require(sys && descriptor_json, "null argument")) return st;
    return guarded([&] { *descriptor_json = dup_string(charfun_to_json(sys->cf)); });
}

size_t tds_system_num_params(const tds_system* sys) {
    return sys ? sys->cf.num_params() : 0;
}

tds_status tds_check(const tds_system* sys, char** report_json, int* pass_out) {
    if (tds_status st = require(sys && report_json, "null argument")) return st;
    return guarded([&] {
        HypothesisReport rep = sys->cf.check_hypotheses();
        *report_json = dup_string(hypothesis_report_to_json(sys->cf, rep));
        if (pass_out) *pass_out = rep.pass ? 1 : 0;
    });
}

tds_status tds_count(const tds_system* sys, const double* point, size_t n, char** report_json) {
    if (tds_status st = require(sys && point && report_json, "null argument")) return st;
    return guarded([&] {
        ParamPoint tau(point, point + n);
        PoleCountReport rep = count_unstable(sys->cf, tau);
        *report_json = dup_string(polecount_report_to_json(rep));
    });
}

tds_status tds_ray(const tds_system* sys, const char* task_json, char** trace_json,
                   char** trace_csv) {
    if (tds_status st = require(sys && task_json && trace_json, "null argument")) return st;
    return guarded([&] {
        RayTask task = ray_task_from_json(sys->cf, task_json);
        LineTrace trace = run_ray(sys->cf, task);
        *trace_json = dup_string(line_trace_to_json(sys->cf, task, trace));
        if (trace_csv) *trace_csv = dup_string(line_trace_to_csv(trace));
    });
}

tds_status tds_region(const tds_system* sys, const char* task_json, char** region_json) {
    if (tds_status st = require(sys && task_json && region_json, "null argument")) return st;
    return guarded([&] {
        RegionTask task = region_task_from_json(sys->cf, task_json);
        RegionState state = grow_region(sys->cf, task.tau0, task.config);
        *region_json = dup_string(region_state_to_json(sys->cf, task, state));
    });
}

} // extern "C"
