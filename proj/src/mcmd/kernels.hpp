// Data-parallel compute kernels.
//
// Every kernel exists in two forms: a plain serial loop (the reference) and an
// OpenMP version parallelized over independent output elements. Because each
// output element is reduced in a fixed serial order, the parallel results are
// bitwise identical to the serial ones for any thread count; tests assert this
// and the bench_kernels tool compares their throughput.
#pragma once

#include "mcmd/tensor.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mcmd::kernels {

// Global switch between the serial reference and the OpenMP kernels.
bool parallel_enabled();
void set_parallel(bool on);
int max_threads();

// C = A(m×k) · B(k×n)
void matmul_serial(const Mat& A, const Mat& B, Mat& C);
void matmul_omp(const Mat& A, const Mat& B, Mat& C);
void matmul(const Mat& A, const Mat& B, Mat& C);

// C = Aᵀ(k×m) · B(k×n); A is stored k×m
void matmul_tn_serial(const Mat& A, const Mat& B, Mat& C);
void matmul_tn_omp(const Mat& A, const Mat& B, Mat& C);
void matmul_tn(const Mat& A, const Mat& B, Mat& C);

// y = A(m×k) · x(k)
void matvec_serial(const Mat& A, const double* x, double* y);
void matvec_omp(const Mat& A, const double* x, double* y);
void matvec(const Mat& A, const double* x, double* y);

// y += Aᵀ(m×k) · x(m)   (accumulating; A stored m×k, output length k)
void matvec_t_acc_serial(const Mat& A, const double* x, double* y);
void matvec_t_acc(const Mat& A, const double* x, double* y);

// Parallel loop over independent items. The body must only write state owned
// by its own index.
template <class F>
inline void parallel_for(int n, F&& f) {
#ifdef _OPENMP
  if (parallel_enabled()) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
#endif
  for (int i = 0; i < n; ++i) f(i);
}

}  // namespace mcmd::kernels
