#include "qxlab/nn/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace qxlab::nn {

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("concat_cols: row mismatch " + std::to_string(a.rows()) + " vs " +
                     std::to_string(b.rows()));
  }
  Tensor out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(a.row(r).begin(), a.row(r).end(), dst.begin());
    std::copy(b.row(r).begin(), b.row(r).end(), dst.begin() + a.cols());
  }
  return out;
}

Tensor gather_rows(const Tensor& src, std::span<const std::size_t> idx) {
  Tensor out(idx.size(), src.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= src.rows()) throw ShapeError("gather_rows: index out of range");
    std::copy(src.row(idx[i]).begin(), src.row(idx[i]).end(), out.row(i).begin());
  }
  return out;
}

Tensor column(std::span<const double> values) {
  return Tensor(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

bool all_finite(const Tensor& t) {
  return std::all_of(t.values().begin(), t.values().end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace qxlab::nn
