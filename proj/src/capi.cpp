#include "carleson_lab/carleson_lab.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "carleson/carleson.hpp"
#include "carleson/errors.hpp"
#include "carleson/parallel.hpp"
#include "carleson/reports.hpp"
#include "carleson/runner.hpp"
#include "carleson/spec_strings.hpp"

struct cl_weight {
  carleson::RadialWeight w;
};
struct cl_measure {
  carleson::Measure mu;
};
struct cl_tree {
  carleson::DiscTreeFamily fam;
};

namespace {

thread_local std::string last_error;

cl_status fail(cl_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F>
cl_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const carleson::Error& e) {
    return fail(static_cast<cl_status>(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(CL_INTERNAL, e.what());
  } catch (...) {
    return fail(CL_INTERNAL, "unknown exception");
  }
}

#define CL_REQUIRE(ptr) \
  if (!(ptr)) return fail(CL_NULL_ARGUMENT, #ptr " is NULL")

}  // namespace

extern "C" {

const char* cl_version(void) { return CARLESON_LAB_VERSION; }

const char* cl_last_error(void) { return last_error.c_str(); }

cl_status cl_set_threads(int n) {
  if (n < 0) return fail(CL_PARAMETER, "thread count must be non-negative");
  carleson::set_thread_count(n);
  last_error.clear();
  return CL_OK;
}

void cl_string_free(char* s) { std::free(s); }

cl_status cl_run(const char* config_json, char** report, int* exit_code) {
  CL_REQUIRE(config_json);
  CL_REQUIRE(report);
  CL_REQUIRE(exit_code);
  return guarded([&] {
    carleson::Json j;
    try {
      j = carleson::Json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
      throw carleson::UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    const auto res = carleson::run(carleson::config_from_json(j));
    *report = dup_string(res.report.dump(2));
    *exit_code = res.exit_code;
    if (!res.error.empty()) last_error = res.error;
    return CL_OK;
  });
}

cl_status cl_weight_parse(const char* spec, cl_weight** out) {
  CL_REQUIRE(spec);
  CL_REQUIRE(out);
  return guarded([&] {
    *out = new cl_weight{carleson::parse_weight(spec)};
    return CL_OK;
  });
}

void cl_weight_free(cl_weight* w) { delete w; }

cl_status cl_weight_eval(const cl_weight* w, double r, double* omega, double* hat) {
  CL_REQUIRE(w);
  return guarded([&] {
    if (!(r >= 0.0 && r < 1.0)) throw carleson::DomainError("r must lie in [0, 1)");
    if (omega) *omega = w->w.omega(r);
    if (hat) *hat = w->w.hat(r);
    return CL_OK;
  });
}

cl_status cl_weight_classify(const cl_weight* w, char** report_json) {
  CL_REQUIRE(w);
  CL_REQUIRE(report_json);
  return guarded([&] {
    *report_json = dup_string(carleson::to_json(carleson::classify(w->w)).dump(2));
    return CL_OK;
  });
}

cl_status cl_tree_build(double delta, double theta, int depth, cl_tree** out) {
  CL_REQUIRE(out);
  return guarded([&] {
    *out = new cl_tree{carleson::DiscTreeFamily(delta, theta, depth)};
    return CL_OK;
  });
}

void cl_tree_free(cl_tree* t) { delete t; }

cl_status cl_tree_cells_at(const cl_tree* t, int level, int64_t* count) {
  CL_REQUIRE(t);
  CL_REQUIRE(count);
  return guarded([&] {
    if (level < 0 || level >= t->fam.depth()) throw carleson::OutOfDepthError("level outside the built tree");
    *count = t->fam.cells_at(level);
    return CL_OK;
  });
}

cl_status cl_tree_locate(const cl_tree* t, int grid, double re, double im, int* level, int64_t* index) {
  CL_REQUIRE(t);
  CL_REQUIRE(level);
  CL_REQUIRE(index);
  return guarded([&] {
    if (grid < 0 || grid >= t->fam.grids()) throw carleson::ParameterError("grid index out of range");
    const auto c = t->fam.locate(grid, carleson::Complex(re, im));
    *level = c.level;
    *index = c.index;
    return CL_OK;
  });
}

cl_status cl_tree_export(const cl_tree* t, int grid, char** tree_json) {
  CL_REQUIRE(t);
  CL_REQUIRE(tree_json);
  return guarded([&] {
    bool partial = false;
    const auto j = carleson::disc_tree_json(t->fam, grid, std::numeric_limits<long>::max(), &partial);
    *tree_json = dup_string(j.dump());
    return CL_OK;
  });
}

cl_status cl_measure_parse(const char* spec, const cl_tree* tree, cl_measure** out) {
  CL_REQUIRE(spec);
  CL_REQUIRE(out);
  return guarded([&] {
    *out = new cl_measure{carleson::parse_measure(spec, tree ? &tree->fam : nullptr)};
    return CL_OK;
  });
}

void cl_measure_free(cl_measure* m) { delete m; }

cl_status cl_measure_total_mass(const cl_measure* m, double* mass) {
  CL_REQUIRE(m);
  CL_REQUIRE(mass);
  return guarded([&] {
    *mass = m->mu.total_mass();
    return CL_OK;
  });
}

cl_status cl_forward_testing(const cl_tree* t, const cl_measure* mu, const cl_weight* w, double p, double q, int k,
                             double* constant, char** report_json) {
  CL_REQUIRE(t);
  CL_REQUIRE(mu);
  CL_REQUIRE(w);
  CL_REQUIRE(constant);
  return guarded([&] {
    if (!(p > 0.0 && q > 0.0) || k < 0) throw carleson::ParameterError("need p, q > 0 and k >= 0");
    carleson::TestingOptions o;
    o.k = k;
    const auto rep =
        carleson::forward_testing_constant(t->fam, mu->mu, carleson::associated_weight(w->w), q / p, k * q, o);
    *constant = rep.constant;
    if (report_json) *report_json = dup_string(carleson::to_json(rep).dump(2));
    return CL_OK;
  });
}

}  // extern "C"
