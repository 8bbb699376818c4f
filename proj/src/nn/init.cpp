#include "qxlab/nn/init.hpp"

#include "qxlab/errors.hpp"

namespace qxlab::nn {

std::string_view to_string(InitTag tag) {
  switch (tag) {
    case InitTag::KaimingUniform: return "kaiming-uniform";
    case InitTag::KaimingNormal: return "kaiming-normal";
    case InitTag::XavierUniform: return "xavier-uniform";
    case InitTag::Normal01: return "normal";
    case InitTag::UniformPM1: return "uniform";
  }
  return "?";
}

InitTag parse_init_tag(std::string_view name) {
  for (auto tag : {InitTag::KaimingUniform, InitTag::KaimingNormal, InitTag::XavierUniform,
                   InitTag::Normal01, InitTag::UniformPM1}) {
    if (name == to_string(tag)) return tag;
  }
  throw ConfigError("unknown init scheme '" + std::string(name) + "'");
}

}  // namespace qxlab::nn
