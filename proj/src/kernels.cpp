#include "fdip/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "fdip/errors.hpp"

namespace fdip::kern {

namespace {

using AxpyFn = void (*)(double, const double*, double*, std::size_t);
using ScaleFn = void (*)(double, double*, std::size_t);

struct Dispatch {
  Backend backend;
  AxpyFn axpy;
  ScaleFn scale;
};

Dispatch detect() {
#if defined(__x86_64__)
  const char* env = std::getenv("FDIP_KERNELS");
  const bool want_scalar = env && std::strcmp(env, "scalar") == 0;
  if (!want_scalar && cpu_has_avx2())
    return Dispatch{Backend::avx2, axpy_avx2, scale_avx2};
#endif
  return Dispatch{Backend::scalar, axpy_scalar, scale_scalar};
}

Dispatch& dispatch() {
  static Dispatch d = detect();
  return d;
}

} // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Backend active_backend() { return dispatch().backend; }

const char* backend_name() {
  return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
  if (b == Backend::scalar) {
    dispatch() = Dispatch{Backend::scalar, axpy_scalar, scale_scalar};
    return;
  }
#if defined(__x86_64__)
  if (cpu_has_avx2()) {
    dispatch() = Dispatch{Backend::avx2, axpy_avx2, scale_avx2};
    return;
  }
#endif
  throw validation_error("kernels: avx2 backend not supported on this CPU");
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  dispatch().axpy(a, x, y, n);
}

void scale(double a, double* x, std::size_t n) { dispatch().scale(a, x, n); }

} // namespace fdip::kern
