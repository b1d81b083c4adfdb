#include "sanp/model_io.hpp"

#include <cmath>

#include "detail/byte_io.hpp"
#include "sanp/checkpoint.hpp"
#include "sanp/errors.hpp"

namespace sanp {

namespace {

std::size_t as_count(float v, const char* what) {
  if (!(v >= 1) || v != std::floor(v))
    throw CompatibilityError(std::string("checkpoint meta field '") + what +
                             "' is not a positive integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<char> encode_model(const ModelBundle& b) {
  const ModelConfig& c = b.params.config;
  ParamSet<float> all = b.params.set;
  all.add("meta.model",
          Tensor<float>({5}, std::vector<float>{
                                 float(c.dim), float(c.heads_enc),
                                 float(c.heads_dec), float(c.hidden),
                                 float(c.sigma_floor)}));
  all.add("meta.data",
          Tensor<float>({6}, std::vector<float>{
                                 float(b.window.width_east),
                                 float(b.window.width_north), float(b.k),
                                 float(b.alpha), float(b.stats.mean),
                                 float(b.stats.std)}));
  if (!b.adam) return encode_checkpoint(all, nullptr);
  AdamState<float> st = *b.adam;
  for (std::size_t i = b.params.set.size(); i < all.size(); ++i) {
    st.first_moment.emplace_back(all[i].shape);
    st.second_moment.emplace_back(all[i].shape);
  }
  return encode_checkpoint(all, &st);
}

ModelBundle decode_model(std::vector<char> bytes, const std::string& source) {
  Checkpoint ck = decode_checkpoint(std::move(bytes), source);
  if (!ck.params.contains("meta.model") || !ck.params.contains("meta.data"))
    throw CompatibilityError(source + ": not a model checkpoint (meta entries missing)");
  const auto& mm = ck.params.at("meta.model").values;
  const auto& md = ck.params.at("meta.data").values;
  if (mm.size() != 5 || md.size() != 6)
    throw CompatibilityError(source + ": malformed meta entries");
  ModelConfig cfg;
  cfg.dim = as_count(mm[0], "dim");
  cfg.heads_enc = as_count(mm[1], "heads_enc");
  cfg.heads_dec = as_count(mm[2], "heads_dec");
  cfg.hidden = as_count(mm[3], "hidden");
  cfg.sigma_floor = double(mm[4]);
  try {
    cfg.validate();
  } catch (const ContractError& e) {
    throw CompatibilityError(source + ": " + e.what());
  }

  ModelBundle b;
  b.params = ModelParams<float>::from_set(cfg, ck.params);
  const std::size_t expected = b.params.set.size() + 2;
  if (ck.params.size() != expected)
    throw CompatibilityError(source + ": holds " +
                             std::to_string(ck.params.size()) +
                             " tensors, configuration implies " +
                             std::to_string(expected));
  b.window = WindowSpec{double(md[0]), double(md[1])};
  b.k = as_count(md[2], "k");
  b.alpha = double(md[3]);
  b.stats.mean = double(md[4]);
  b.stats.std = double(md[5]);
  if (!(b.alpha >= 0) || !(b.stats.std > 0) || !(b.window.width_east > 0) ||
      !(b.window.width_north > 0))
    throw CompatibilityError(source + ": invalid meta.data values");

  if (ck.adam) {
    AdamState<float> st;
    st.step = ck.adam->step;
    for (std::size_t i = 0; i < b.params.set.size(); ++i) {
      const std::size_t j = ck.params.index(b.params.set.name(i));
      st.first_moment.push_back(ck.adam->first_moment[j]);
      st.second_moment.push_back(ck.adam->second_moment[j]);
    }
    b.adam = std::move(st);
  }
  return b;
}

void save_model(const std::filesystem::path& path, const ModelBundle& bundle) {
  detail::write_file_atomic(path, encode_model(bundle));
}

ModelBundle load_model(const std::filesystem::path& path) {
  return decode_model(detail::read_file(path), path.string());
}

}  // namespace sanp
