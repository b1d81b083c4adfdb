#include "sanp/checkpoint.hpp"

#include "detail/byte_io.hpp"

namespace sanp {

namespace {

constexpr std::string_view kMagic = "SANP1";

void write_entry(detail::ByteWriter& w, const std::string& name,
                 const Tensor<float>& t) {
  w.u64(name.size());
  w.bytes(name);
  w.u64(t.shape.size());
  for (auto d : t.shape) w.u64(d);
  for (float v : t.values) w.f32(v);
}

std::pair<std::string, Tensor<float>> read_entry(detail::ByteReader& r) {
  const std::uint64_t len = r.u64();
  if (len > (1u << 16))
    throw ParseError("checkpoint: implausible name length at offset " +
                     std::to_string(r.offset()));
  std::string name = r.bytes(len);
  const std::uint64_t rank = r.u64();
  if (rank > 8)
    throw ParseError("checkpoint: implausible rank for '" + name + "'");
  Shape shape(rank);
  std::uint64_t count = 1;
  for (auto& d : shape) {
    d = r.u64();
    if (d == 0 || d > (std::uint64_t{1} << 32))
      throw ParseError("checkpoint: bad dimension for '" + name + "'");
    count *= d;
  }
  if (count * 4 > r.remaining())
    throw ParseError("checkpoint: truncated values for '" + name + "'");
  std::vector<float> values(count);
  for (auto& v : values) v = r.f32();
  return {std::move(name), Tensor<float>(std::move(shape), std::move(values))};
}

}  // namespace

std::vector<char> encode_checkpoint(const ParamSet<float>& params,
                                    const AdamState<float>* adam) {
  detail::ByteWriter w;
  w.bytes(kMagic);
  w.u64(params.size());
  for (std::size_t i = 0; i < params.size(); ++i)
    write_entry(w, params.name(i), params[i]);
  if (!adam) {
    w.u64(0);
  } else {
    w.u64(2 * params.size() + 1);
    for (std::size_t i = 0; i < params.size(); ++i) {
      write_entry(w, params.name(i) + ".m", adam->first_moment[i]);
      write_entry(w, params.name(i) + ".v", adam->second_moment[i]);
    }
    write_entry(w, "adam.step",
                Tensor<float>({1}, std::vector<float>{static_cast<float>(adam->step)}));
  }
  return w.data();
}

Checkpoint decode_checkpoint(std::vector<char> bytes, const std::string& source) {
  detail::ByteReader r(std::move(bytes), source);
  if (r.bytes(kMagic.size()) != kMagic)
    throw ParseError(source + ": bad magic, expected SANP1");
  Checkpoint ck;
  const std::uint64_t n = r.u64();
  for (std::uint64_t i = 0; i < n; ++i) {
    auto [name, t] = read_entry(r);
    ck.params.add(std::move(name), std::move(t));
  }
  const std::uint64_t m = r.u64();
  if (m != 0) {
    if (m != 2 * n + 1)
      throw ParseError(source + ": optimizer section has " + std::to_string(m) +
                       " entries, expected " + std::to_string(2 * n + 1));
    AdamState<float> st;
    for (std::uint64_t i = 0; i < n; ++i) {
      auto [mn, mt] = read_entry(r);
      auto [vn, vt] = read_entry(r);
      const std::string& pn = ck.params.name(i);
      if (mn != pn + ".m" || vn != pn + ".v" ||
          mt.shape != ck.params[i].shape || vt.shape != ck.params[i].shape)
        throw ParseError(source + ": optimizer entry mismatch for '" + pn + "'");
      st.first_moment.push_back(std::move(mt));
      st.second_moment.push_back(std::move(vt));
    }
    auto [sn, stt] = read_entry(r);
    if (sn != "adam.step" || stt.size() != 1)
      throw ParseError(source + ": missing adam.step entry");
    st.step = static_cast<std::uint64_t>(stt.values[0]);
    ck.adam = std::move(st);
  }
  if (r.remaining() != 0)
    throw ParseError(source + ": trailing bytes at offset " +
                     std::to_string(r.offset()));
  return ck;
}

void save_checkpoint(const std::filesystem::path& path,
                     const ParamSet<float>& params,
                     const AdamState<float>* adam) {
  detail::write_file_atomic(path, encode_checkpoint(params, adam));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(detail::read_file(path), path.string());
}

}  // namespace sanp
