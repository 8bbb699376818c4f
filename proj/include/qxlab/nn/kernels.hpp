#pragma once

// Dense layer kernels. `serial` is the reference implementation; `parallel`
// splits the same loops across OpenMP threads without changing the per-element
// summation order, so both produce bitwise-identical results.
//
// Layout: X is n x in, W is in x out, b has `out` entries, Y is n x out.

#include <cstddef>

namespace qxlab::nn::kernels {

namespace serial {
void affine_forward(const double* x, const double* w, const double* b, double* y,
                    std::size_t n, std::size_t in, std::size_t out);
// dW += X^T dY, db += colsum(dY)
void affine_param_grad(const double* x, const double* dy, double* dw, double* db,
                       std::size_t n, std::size_t in, std::size_t out);
// dX = dY W^T
void affine_input_grad(const double* dy, const double* w, double* dx,
                       std::size_t n, std::size_t in, std::size_t out);
}  // namespace serial

namespace parallel {
void affine_forward(const double* x, const double* w, const double* b, double* y,
                    std::size_t n, std::size_t in, std::size_t out);
void affine_param_grad(const double* x, const double* dy, double* dw, double* db,
                       std::size_t n, std::size_t in, std::size_t out);
void affine_input_grad(const double* dy, const double* w, double* dx,
                       std::size_t n, std::size_t in, std::size_t out);
}  // namespace parallel

/// Multiply-adds below which the dispatchers stay serial.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 18;

// Dispatchers used by the network code.
void affine_forward(const double* x, const double* w, const double* b, double* y,
                    std::size_t n, std::size_t in, std::size_t out);
void affine_param_grad(const double* x, const double* dy, double* dw, double* db,
                       std::size_t n, std::size_t in, std::size_t out);
void affine_input_grad(const double* dy, const double* w, double* dx,
                       std::size_t n, std::size_t in, std::size_t out);

void relu_inplace(double* v, std::size_t count);
// g[i] = 0 where the post-activation a[i] == 0
void relu_backward_inplace(double* g, const double* a, std::size_t count);

}  // namespace qxlab::nn::kernels
