#pragma once
// Checkpoint file:
//   "SANP1"
//   u64 parameter count, then per parameter:
//     u64 name length, name bytes, u64 rank, rank x u64 dims, f32 values
//   u64 optimizer entry count, then entries in the same layout:
//     "<param>.m" and "<param>.v" for every parameter, plus "adam.step".
// All integers and floats little-endian.

#include <filesystem>
#include <optional>

#include "sanp/optim.hpp"
#include "sanp/params.hpp"

namespace sanp {

struct Checkpoint {
  ParamSet<float> params;
  std::optional<AdamState<float>> adam;
};

std::vector<char> encode_checkpoint(const ParamSet<float>& params,
                                    const AdamState<float>* adam);
Checkpoint decode_checkpoint(std::vector<char> bytes,
                             const std::string& source = "checkpoint");

// Atomic: temp file + rename.
void save_checkpoint(const std::filesystem::path& path,
                     const ParamSet<float>& params,
                     const AdamState<float>* adam);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace sanp
