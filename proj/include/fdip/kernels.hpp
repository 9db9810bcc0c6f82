#pragma once

#include <cstddef>

namespace fdip::kern {

/// Dense row kernels behind the LP pivot loop. Every variant performs the
/// same IEEE operations elementwise in the same order (no FMA, no
/// reassociation), so backends are bit-for-bit interchangeable and the
/// planner's byte-determinism contract is independent of the host CPU.

enum class Backend { scalar, avx2 };

/// Backend chosen at startup: AVX2 when the CPU supports it, unless the
/// environment variable FDIP_KERNELS=scalar overrides.
Backend active_backend();
const char* backend_name();

/// Test hook. Throws validation_error if the backend is unsupported here.
void force_backend(Backend b);

/// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

/// x[i] *= a
void scale(double a, double* x, std::size_t n);

// Reference and variant entry points, exposed for equivalence tests.
void axpy_scalar(double a, const double* x, double* y, std::size_t n);
void scale_scalar(double a, double* x, std::size_t n);
#if defined(__x86_64__)
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
void scale_avx2(double a, double* x, std::size_t n);
#endif

bool cpu_has_avx2();

} // namespace fdip::kern
