#include "mcmd/kernels.hpp"

#include <atomic>

namespace mcmd::kernels {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

static void check_mm(const Mat& A, const Mat& B, Mat& C, int m, int k, int n) {
  if (A.cols != k || B.rows != k || B.cols != n)
    throw Error("matmul: shape mismatch");
  if (C.rows != m || C.cols != n) C = Mat(m, n);
}

void matmul_serial(const Mat& A, const Mat& B, Mat& C) {
  check_mm(A, B, C, A.rows, A.cols, B.cols);
  const int m = A.rows, k = A.cols, n = B.cols;
  for (int i = 0; i < m; ++i) {
    double* ci = C.row(i);
    const double* ai = A.row(i);
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += ai[p] * B.at(p, j);
      ci[j] = acc;
    }
  }
}

void matmul_omp(const Mat& A, const Mat& B, Mat& C) {
  check_mm(A, B, C, A.rows, A.cols, B.cols);
  const int m = A.rows, k = A.cols, n = B.cols;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < m; ++i) {
    double* ci = C.row(i);
    const double* ai = A.row(i);
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += ai[p] * B.at(p, j);
      ci[j] = acc;
    }
  }
}

void matmul(const Mat& A, const Mat& B, Mat& C) {
  if (parallel_enabled())
    matmul_omp(A, B, C);
  else
    matmul_serial(A, B, C);
}

void matmul_tn_serial(const Mat& A, const Mat& B, Mat& C) {
  // C(m×n) = Aᵀ·B with A stored k×m
  if (A.rows != B.rows) throw Error("matmul_tn: shape mismatch");
  const int k = A.rows, m = A.cols, n = B.cols;
  if (C.rows != m || C.cols != n) C = Mat(m, n);
  for (int i = 0; i < m; ++i) {
    double* ci = C.row(i);
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += A.at(p, i) * B.at(p, j);
      ci[j] = acc;
    }
  }
}

void matmul_tn_omp(const Mat& A, const Mat& B, Mat& C) {
  if (A.rows != B.rows) throw Error("matmul_tn: shape mismatch");
  const int k = A.rows, m = A.cols, n = B.cols;
  if (C.rows != m || C.cols != n) C = Mat(m, n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < m; ++i) {
    double* ci = C.row(i);
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += A.at(p, i) * B.at(p, j);
      ci[j] = acc;
    }
  }
}

void matmul_tn(const Mat& A, const Mat& B, Mat& C) {
  if (parallel_enabled())
    matmul_tn_omp(A, B, C);
  else
    matmul_tn_serial(A, B, C);
}

void matvec_serial(const Mat& A, const double* x, double* y) {
  for (int i = 0; i < A.rows; ++i) {
    const double* ai = A.row(i);
    double acc = 0.0;
    for (int j = 0; j < A.cols; ++j) acc += ai[j] * x[j];
    y[i] = acc;
  }
}

void matvec_omp(const Mat& A, const double* x, double* y) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < A.rows; ++i) {
    const double* ai = A.row(i);
    double acc = 0.0;
    for (int j = 0; j < A.cols; ++j) acc += ai[j] * x[j];
    y[i] = acc;
  }
}

void matvec(const Mat& A, const double* x, double* y) {
  if (parallel_enabled())
    matvec_omp(A, x, y);
  else
    matvec_serial(A, x, y);
}

void matvec_t_acc_serial(const Mat& A, const double* x, double* y) {
  for (int j = 0; j < A.cols; ++j) {
    double acc = 0.0;
    for (int i = 0; i < A.rows; ++i) acc += A.at(i, j) * x[i];
    y[j] += acc;
  }
}

void matvec_t_acc(const Mat& A, const double* x, double* y) {
  // column-wise accumulation keeps the reduction order fixed
  matvec_t_acc_serial(A, x, y);
}

}  // namespace mcmd::kernels
