#pragma once

#include <span>
#include <vector>

namespace qxlab::harness {

/// 1-D Gaussian filter with reflective boundaries: the signal is mirrored about
/// its edges including the edge sample (d c b a | a b c d | d c b a). The kernel
/// is truncated at 4 sigma and normalised. sigma = 0 returns the input.
std::vector<double> gaussian_smooth(std::span<const double> x, double sigma);

}  // namespace qxlab::harness
