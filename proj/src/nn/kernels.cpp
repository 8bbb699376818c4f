#include "qxlab/nn/kernels.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

namespace qxlab::nn::kernels {

namespace {

inline void forward_row(const double* xr, const double* w, const double* b, double* yr,
                        std::size_t in, std::size_t out) {
  std::copy(b, b + out, yr);
  for (std::size_t k = 0; k < in; ++k) {
    const double xv = xr[k];
    const double* wr = w + k * out;
    for (std::size_t j = 0; j < out; ++j) yr[j] += xv * wr[j];
  }
}

constexpr std::size_t kRowBlock = 4;
constexpr std::size_t kLanes = 8;

using lanes = double __attribute__((vector_size(kLanes * sizeof(double))));

inline lanes load(const double* p) {
  lanes v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

inline void store(double* p, lanes v) { std::memcpy(p, &v, sizeof v); }

// kRowBlock rows at once, register-tiled over 2 * kLanes output columns. Each output
// element still accumulates bias + x_0 w_0 + x_1 w_1 + ... in k order.
inline void forward_rows(const double* x, const double* w, const double* b, double* y, std::size_t in,
                         std::size_t out) {
  std::size_t j0 = 0;
  for (; j0 + 2 * kLanes <= out; j0 += 2 * kLanes) {
    lanes acc[kRowBlock][2];
    const lanes b0 = load(b + j0), b1 = load(b + j0 + kLanes);
    for (std::size_t r = 0; r < kRowBlock; ++r) {
      acc[r][0] = b0;
      acc[r][1] = b1;
    }
    for (std::size_t k = 0; k < in; ++k) {
      const double* wr = w + k * out + j0;
      const lanes w0 = load(wr), w1 = load(wr + kLanes);
      for (std::size_t r = 0; r < kRowBlock; ++r) {
        const double xv = x[r * in + k];
        acc[r][0] += xv * w0;
        acc[r][1] += xv * w1;
      }
    }
    for (std::size_t r = 0; r < kRowBlock; ++r) {
      store(y + r * out + j0, acc[r][0]);
      store(y + r * out + j0 + kLanes, acc[r][1]);
    }
  }
  for (; j0 + kLanes <= out; j0 += kLanes) {
    lanes acc[kRowBlock];
    for (std::size_t r = 0; r < kRowBlock; ++r) acc[r] = load(b + j0);
    for (std::size_t k = 0; k < in; ++k) {
      const lanes w0 = load(w + k * out + j0);
      for (std::size_t r = 0; r < kRowBlock; ++r) acc[r] += x[r * in + k] * w0;
    }
    for (std::size_t r = 0; r < kRowBlock; ++r) store(y + r * out + j0, acc[r]);
  }
  if (j0 < out) {
    for (std::size_t r = 0; r < kRowBlock; ++r) {
      double* yr = y + r * out;
      const double* xr = x + r * in;
      for (std::size_t j = j0; j < out; ++j) yr[j] = b[j];
      for (std::size_t k = 0; k < in; ++k) {
        const double xv = xr[k];
        const double* wr = w + k * out;
        for (std::size_t j = j0; j < out; ++j) yr[j] += xv * wr[j];
      }
    }
  }
}

// Output widths below kLanes: transpose kLanes rows of X so the lanes run across rows.
inline void forward_rows_narrow(const double* x, const double* w, const double* b, double* y, std::size_t in,
                                std::size_t out, double* xt) {
  for (std::size_t r = 0; r < kLanes; ++r)
    for (std::size_t k = 0; k < in; ++k) xt[k * kLanes + r] = x[r * in + k];
  for (std::size_t j = 0; j < out; ++j) {
    lanes acc;
    for (std::size_t r = 0; r < kLanes; ++r) acc[r] = b[j];
    for (std::size_t k = 0; k < in; ++k) acc += load(xt + k * kLanes) * w[k * out + j];
    for (std::size_t r = 0; r < kLanes; ++r) y[r * out + j] = acc[r];
  }
}

inline void forward_block(const double* x, const double* w, const double* b, double* y, std::size_t n,
                          std::size_t in, std::size_t out) {
  std::size_t i = 0;
  if (out < kLanes) {
    std::vector<double> xt(in * kLanes);
    for (; i + kLanes <= n; i += kLanes) forward_rows_narrow(x + i * in, w, b, y + i * out, in, out, xt.data());
  } else {
    for (; i + kRowBlock <= n; i += kRowBlock) forward_rows(x + i * in, w, b, y + i * out, in, out);
  }
  for (; i < n; ++i) forward_row(x + i * in, w, b, y + i * out, in, out);
}

// dW[k0:k1, :] += X[:, k0:k1]^T dY. Every element sums its n terms in row order into
// a fresh accumulator and then adds that to dW, whichever tile it falls in.
inline void param_grad_rows(const double* x, const double* dy, double* dw, std::size_t k0, std::size_t k1,
                            std::size_t n, std::size_t in, std::size_t out) {
  if (out < kLanes) {
    std::size_t k = k0;
    for (; k + kLanes <= k1; k += kLanes) {
      lanes acc[kLanes] = {};
      for (std::size_t i = 0; i < n; ++i) {
        const lanes xv = load(x + i * in + k);
        for (std::size_t c = 0; c < out; ++c) acc[c] += xv * dy[i * out + c];
      }
      for (std::size_t c = 0; c < out; ++c)
        for (std::size_t r = 0; r < kLanes; ++r) dw[(k + r) * out + c] += acc[c][r];
    }
    for (; k < k1; ++k) {
      for (std::size_t c = 0; c < out; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += x[i * in + k] * dy[i * out + c];
        dw[k * out + c] += acc;
      }
    }
    return;
  }
  std::size_t k = k0;
  for (; k + kRowBlock <= k1; k += kRowBlock) {
    std::size_t j0 = 0;
    for (; j0 + 2 * kLanes <= out; j0 += 2 * kLanes) {
      lanes acc[kRowBlock][2] = {};
      for (std::size_t i = 0; i < n; ++i) {
        const double* dyr = dy + i * out + j0;
        const lanes d0 = load(dyr), d1 = load(dyr + kLanes);
        for (std::size_t r = 0; r < kRowBlock; ++r) {
          const double xv = x[i * in + k + r];
          acc[r][0] += xv * d0;
          acc[r][1] += xv * d1;
        }
      }
      for (std::size_t r = 0; r < kRowBlock; ++r) {
        double* dwr = dw + (k + r) * out + j0;
        store(dwr, load(dwr) + acc[r][0]);
        store(dwr + kLanes, load(dwr + kLanes) + acc[r][1]);
      }
    }
    for (; j0 + kLanes <= out; j0 += kLanes) {
      lanes acc[kRowBlock] = {};
      for (std::size_t i = 0; i < n; ++i) {
        const lanes d0 = load(dy + i * out + j0);
        for (std::size_t r = 0; r < kRowBlock; ++r) acc[r] += x[i * in + k + r] * d0;
      }
      for (std::size_t r = 0; r < kRowBlock; ++r) {
        double* dwr = dw + (k + r) * out + j0;
        store(dwr, load(dwr) + acc[r]);
      }
    }
    for (; j0 < out; ++j0) {
      for (std::size_t r = 0; r < kRowBlock; ++r) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += x[i * in + k + r] * dy[i * out + j0];
        dw[(k + r) * out + j0] += acc;
      }
    }
  }
  for (; k < k1; ++k) {
    std::size_t j0 = 0;
    for (; j0 + kLanes <= out; j0 += kLanes) {
      lanes acc = {};
      for (std::size_t i = 0; i < n; ++i) acc += x[i * in + k] * load(dy + i * out + j0);
      double* dwr = dw + k * out + j0;
      store(dwr, load(dwr) + acc);
    }
    for (; j0 < out; ++j0) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += x[i * in + k] * dy[i * out + j0];
      dw[k * out + j0] += acc;
    }
  }
}

// dX = dY W^T runs as a forward pass through W^T with a zero bias.
struct Transposed {
  std::vector<double> wt, zero;
  Transposed(const double* w, std::size_t in, std::size_t out) : wt(in * out), zero(in, 0.0) {
    for (std::size_t k = 0; k < in; ++k)
      for (std::size_t j = 0; j < out; ++j) wt[j * in + k] = w[k * out + j];
  }
};

inline void bias_grad(const double* dy, double* db, std::size_t n, std::size_t out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* dyr = dy + i * out;
    for (std::size_t j = 0; j < out; ++j) db[j] += dyr[j];
  }
}

}  // namespace

namespace serial {

void affine_forward(const double* x, const double* w, const double* b, double* y,
                    std::size_t n, std::size_t in, std::size_t out) {
  forward_block(x, w, b, y, n, in, out);
}

void affine_param_grad(const double* x, const double* dy, double* dw, double* db,
                       std::size_t n, std::size_t in, std::size_t out) {
  param_grad_rows(x, dy, dw, 0, in, n, in, out);
  bias_grad(dy, db, n, out);
}

void affine_input_grad(const double* dy, const double* w, double* dx, std::size_t n,
                       std::size_t in, std::size_t out) {
  const Transposed t(w, in, out);
  forward_block(dy, t.wt.data(), t.zero.data(), dx, n, out, in);
}

}  // namespace serial

namespace parallel {

void affine_forward(const double* x, const double* w, const double* b, double* y,
                    std::size_t n, std::size_t in, std::size_t out) {
  constexpr std::size_t kChunk = 64;  // multiple of both row tilings
  const auto chunks = static_cast<long long>((n + kChunk - 1) / kChunk);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < chunks; ++c) {
    const auto r = static_cast<std::size_t>(c) * kChunk;
    forward_block(x + r * in, w, b, y + r * out, std::min(kChunk, n - r), in, out);
  }
}

void affine_param_grad(const double* x, const double* dy, double* dw, double* db,
                       std::size_t n, std::size_t in, std::size_t out) {
  constexpr std::size_t kChunk = 8;  // keeps the serial tile boundaries
  const auto chunks = static_cast<long long>((in + kChunk - 1) / kChunk);
#pragma omp parallel
  {
#pragma omp for schedule(static) nowait
    for (long long c = 0; c < chunks; ++c) {
      const auto k0 = static_cast<std::size_t>(c) * kChunk;
      param_grad_rows(x, dy, dw, k0, std::min(in, k0 + kChunk), n, in, out);
    }
#pragma omp single
    bias_grad(dy, db, n, out);
  }
}

void affine_input_grad(const double* dy, const double* w, double* dx, std::size_t n,
                       std::size_t in, std::size_t out) {
  const Transposed t(w, in, out);
  constexpr std::size_t kChunk = 64;
  const auto chunks = static_cast<long long>((n + kChunk - 1) / kChunk);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < chunks; ++c) {
    const auto r = static_cast<std::size_t>(c) * kChunk;
    forward_block(dy + r * out, t.wt.data(), t.zero.data(), dx + r * in, std::min(kChunk, n - r), out, in);
  }
}

}  // namespace parallel

void affine_forward(const double* x, const double* w, const double* b, double* y,
                    std::size_t n, std::size_t in, std::size_t out) {
  if (n * in * out >= kParallelThreshold) {
    parallel::affine_forward(x, w, b, y, n, in, out);
  } else {
    serial::affine_forward(x, w, b, y, n, in, out);
  }
}

void affine_param_grad(const double* x, const double* dy, double* dw, double* db,
                       std::size_t n, std::size_t in, std::size_t out) {
  if (n * in * out >= kParallelThreshold) {
    parallel::affine_param_grad(x, dy, dw, db, n, in, out);
  } else {
    serial::affine_param_grad(x, dy, dw, db, n, in, out);
  }
}

void affine_input_grad(const double* dy, const double* w, double* dx, std::size_t n,
                       std::size_t in, std::size_t out) {
  if (n * in * out >= kParallelThreshold) {
    parallel::affine_input_grad(dy, w, dx, n, in, out);
  } else {
    serial::affine_input_grad(dy, w, dx, n, in, out);
  }
}

void relu_inplace(double* v, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) v[i] = v[i] > 0.0 ? v[i] : 0.0;
}

void relu_backward_inplace(double* g, const double* a, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) g[i] = a[i] > 0.0 ? g[i] : 0.0;
}

}  // namespace qxlab::nn::kernels
