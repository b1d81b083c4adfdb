#pragma once
// Trained model files: the checkpoint format with the configuration needed to
// rebuild and apply the network stored as extra tensors:
//   meta.model  [dim, heads_enc, heads_dec, hidden, sigma_floor]
//   meta.data   [window_east, window_north, k, alpha, elev_mean, elev_std]
// (alpha may be +inf). Meta entries carry zero optimizer moments.

#include <filesystem>
#include <optional>

#include "sanp/model.hpp"
#include "sanp/optim.hpp"
#include "sanp/sampling.hpp"
#include "sanp/window.hpp"

namespace sanp {

struct ModelBundle {
  ModelParams<float> params;
  WindowSpec window;
  std::size_t k = 100;
  double alpha = 400.0;
  ElevationStats stats;
  std::optional<AdamState<float>> adam;
};

std::vector<char> encode_model(const ModelBundle& bundle);
ModelBundle decode_model(std::vector<char> bytes,
                         const std::string& source = "checkpoint");
void save_model(const std::filesystem::path& path, const ModelBundle& bundle);
// Throws CompatibilityError when the file lacks meta entries or its tensors
// do not match the recorded configuration.
ModelBundle load_model(const std::filesystem::path& path);

}  // namespace sanp
