#pragma once

#include <string>
#include <string_view>

namespace qxlab::nn {

enum class InitTag { KaimingUniform, KaimingNormal, XavierUniform, Normal01, UniformPM1 };

/// Weight initialisation scheme.
///
/// KaimingUniform mirrors the stock torch.nn.Linear init: weights and biases
/// ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)). KaimingNormal draws N(0, 2/fan_in),
/// XavierUniform U(+-sqrt(6/(fan_in+fan_out))), Normal01 N(0,1) and UniformPM1
/// U(-1,1); those four use zero hidden biases. Every scheme sets the output
/// layer's bias to `output_bias`.
struct InitScheme {
  InitTag tag = InitTag::KaimingUniform;
  double output_bias = 0.0;
};

std::string_view to_string(InitTag tag);
InitTag parse_init_tag(std::string_view name);

}  // namespace qxlab::nn
