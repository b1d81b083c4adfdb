#include "sanp/model.hpp"

#include <cmath>

#include "sanp/errors.hpp"
#include "sanp/rng.hpp"

namespace sanp {

void ModelConfig::validate() const {
  if (dim < 1 || hidden < 1) throw ContractError("model widths must be >= 1");
  if (heads_enc < 1 || heads_dec < 1)
    throw ContractError("attention head counts must be >= 1");
  if (dim % heads_enc != 0 || dim % heads_dec != 0)
    throw ContractError("latent dimension " + std::to_string(dim) +
                        " must be divisible by the head counts");
  if (!(sigma_floor > 0)) throw ContractError("sigma_floor must be > 0");
}

namespace {

void attention_layout(std::vector<std::pair<std::string, Shape>>& out,
                      const std::string& prefix, std::size_t dim,
                      std::size_t heads) {
  const std::size_t dh = dim / heads;
  for (std::size_t h = 0; h < heads; ++h) {
    const std::string p = prefix + ".h" + std::to_string(h);
    out.push_back({p + ".q", {dim, dh}});
    out.push_back({p + ".k", {dim, dh}});
    out.push_back({p + ".v", {dim, dh}});
    out.push_back({p + ".o", {dh, dim}});
  }
  out.push_back({prefix + ".bias", {dim}});
}

}  // namespace

std::vector<std::pair<std::string, Shape>> parameter_layout(
    const ModelConfig& cfg) {
  cfg.validate();
  const std::size_t d = cfg.dim, h = cfg.hidden;
  std::vector<std::pair<std::string, Shape>> out;
  out.push_back({"enc.loc", {2, d}});
  out.push_back({"enc.elev", {1, d}});
  out.push_back({"enc.fc1.w", {d, h}});
  out.push_back({"enc.fc1.b", {h}});
  out.push_back({"enc.fc2.w", {h, d}});
  out.push_back({"enc.fc2.b", {d}});
  attention_layout(out, "enc.attn", d, cfg.heads_enc);
  attention_layout(out, "dec.attn", d, cfg.heads_dec);
  out.push_back({"dec.fc1.w", {d, h}});
  out.push_back({"dec.fc1.b", {h}});
  out.push_back({"dec.fc2.w", {h, 2}});
  out.push_back({"dec.fc2.b", {2}});
  return out;
}

template <class T>
ModelParams<T> ModelParams<T>::init(const ModelConfig& cfg,
                                    std::uint64_t seed) {
  ModelParams p;
  p.config = cfg;
  const auto layout = parameter_layout(cfg);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& [name, shape] = layout[i];
    Tensor<T> t(shape, true);
    if (shape.size() == 2) {
      Rng rng = make_rng(seed, 0x1417, i);
      const double limit = std::sqrt(6.0 / double(shape[0] + shape[1]));
      for (auto& v : t.values) v = static_cast<T>(uniform(rng, -limit, limit));
    }
    p.set.add(name, std::move(t));
  }
  return p;
}

template <class T>
ModelParams<T> ModelParams<T>::from_set(const ModelConfig& cfg,
                                        ParamSet<T> set) {
  const auto layout = parameter_layout(cfg);
  ModelParams p;
  p.config = cfg;
  for (const auto& [name, shape] : layout) {
    if (!set.contains(name))
      throw CompatibilityError("checkpoint lacks parameter '" + name + "'");
    Tensor<T> t = set.at(name);
    if (t.shape != shape)
      throw CompatibilityError("parameter '" + name + "' has shape " +
                               shape_string(t.shape) + ", configuration needs " +
                               shape_string(shape));
    t.requires_grad = true;
    p.set.add(name, std::move(t));
  }
  return p;
}

namespace nn {

using ad::Var;

template <class T>
BoundModel<T> bind(ad::Tape<T>& tape, const ModelParams<T>& params,
                   ParamSet<T>* grads) {
  const ParamSet<T>& s = params.set;
  auto b = [&](const std::string& name) {
    const std::size_t i = s.index(name);
    return tape.bind(s[i], grads ? &(*grads)[i] : nullptr);
  };
  auto bind_attn = [&](const std::string& prefix, std::size_t heads) {
    BoundAttention<T> a;
    for (std::size_t h = 0; h < heads; ++h) {
      const std::string p = prefix + ".h" + std::to_string(h);
      a.wq.push_back(b(p + ".q"));
      a.wk.push_back(b(p + ".k"));
      a.wv.push_back(b(p + ".v"));
      a.wo.push_back(b(p + ".o"));
    }
    a.bias = b(prefix + ".bias");
    return a;
  };
  BoundModel<T> m;
  m.config = &params.config;
  m.loc = b("enc.loc");
  m.elev = b("enc.elev");
  m.enc_fc1_w = b("enc.fc1.w");
  m.enc_fc1_b = b("enc.fc1.b");
  m.enc_fc2_w = b("enc.fc2.w");
  m.enc_fc2_b = b("enc.fc2.b");
  m.self_attn = bind_attn("enc.attn", params.config.heads_enc);
  m.cross_attn = bind_attn("dec.attn", params.config.heads_dec);
  m.dec_fc1_w = b("dec.fc1.w");
  m.dec_fc1_b = b("dec.fc1.b");
  m.dec_fc2_w = b("dec.fc2.w");
  m.dec_fc2_b = b("dec.fc2.b");
  return m;
}

template <class T>
Var<T> sdp(Var<T> q, Var<T> k, Var<T> v) {
  ad::Tape<T>& t = *q.tape;
  if (t.rows(k) == 0 || t.rows(v) == 0)
    throw ContractError("attention over an empty context");
  if (t.rows(k) != t.rows(v))
    throw DimensionError("sdp: key and value counts differ");
  const T inv_sqrt_d = T(1) / std::sqrt(T(t.cols(k)));
  Var<T> scores = ad::scale(ad::matmul_nt(q, k), inv_sqrt_d);
  return ad::matmul(ad::softmax_rows(scores), v);
}

template <class T>
Var<T> multi_head(const BoundAttention<T>& attn, Var<T> q, Var<T> k,
                  Var<T> v) {
  if (attn.wq.empty()) throw ContractError("multi_head: no heads");
  std::optional<Var<T>> total;
  for (std::size_t h = 0; h < attn.wq.size(); ++h) {
    Var<T> head = sdp(ad::matmul(q, attn.wq[h]), ad::matmul(k, attn.wk[h]),
                      ad::matmul(v, attn.wv[h]));
    Var<T> projected = ad::matmul(head, attn.wo[h]);
    total = total ? ad::add(*total, projected) : projected;
  }
  return ad::add_row_bias(*total, attn.bias);
}

template <class T>
Encoded<T> encode(const BoundModel<T>& m, Var<T> xy, Var<T> y) {
  if (xy.tape->rows(xy) == 0) throw ContractError("encode: empty context");
  Var<T> keys = ad::matmul(xy, m.loc);
  Var<T> pre = ad::add(keys, ad::matmul(y, m.elev));
  Var<T> hidden = ad::relu(ad::affine(pre, m.enc_fc1_w, std::optional(m.enc_fc1_b)));
  Var<T> r = ad::affine(hidden, m.enc_fc2_w, std::optional(m.enc_fc2_b));
  return {keys, multi_head(m.self_attn, r, r, r)};
}

template <class T>
GaussianHead<T> decode(const BoundModel<T>& m, const Encoded<T>& enc,
                       Var<T> targets) {
  Var<T> query = ad::matmul(targets, m.loc);
  Var<T> r_star = multi_head(m.cross_attn, query, enc.keys, enc.latent);
  Var<T> hidden =
      ad::relu(ad::affine(r_star, m.dec_fc1_w, std::optional(m.dec_fc1_b)));
  Var<T> out = ad::affine(hidden, m.dec_fc2_w, std::optional(m.dec_fc2_b));
  Var<T> mu = ad::slice_cols(out, 0, 1);
  Var<T> sigma = ad::add_scalar(ad::softplus(ad::slice_cols(out, 1, 1)),
                                T(m.config->sigma_floor));
  return {mu, sigma};
}

template <class T>
std::pair<Var<T>, Var<T>> context_inputs(ad::Tape<T>& tape,
                                         const ContextSet& ctx) {
  const std::size_t k = ctx.size();
  if (k == 0) throw ContractError("empty context");
  std::vector<T> xy(2 * k), y(k);
  for (std::size_t i = 0; i < k; ++i) {
    xy[2 * i] = ctx.xy[i][0];
    xy[2 * i + 1] = ctx.xy[i][1];
    y[i] = ctx.y[i];
  }
  return {tape.constant(Tensor<T>({k, 2}, std::move(xy))),
          tape.constant(Tensor<T>({k, 1}, std::move(y)))};
}

}  // namespace nn

template <class T>
StandardGaussian predict_standardized(const ModelParams<T>& params,
                                      const ContextSet& ctx,
                                      std::array<float, 2> target) {
  ad::Tape<T> tape;
  auto m = nn::bind<T>(tape, params, nullptr);
  auto [xy, y] = nn::context_inputs(tape, ctx);
  auto enc = nn::encode(m, xy, y);
  auto head = nn::decode(
      m, enc, tape.constant(Tensor<T>({1, 2}, {T(target[0]), T(target[1])})));
  return {double(tape.value(head.mu)[0]), double(tape.value(head.sigma)[0])};
}

#define SANP_INSTANTIATE(T)                                                   \
  template struct ModelParams<T>;                                             \
  template nn::BoundModel<T> nn::bind<T>(ad::Tape<T>&, const ModelParams<T>&, \
                                         ParamSet<T>*);                       \
  template ad::Var<T> nn::sdp<T>(ad::Var<T>, ad::Var<T>, ad::Var<T>);        \
  template ad::Var<T> nn::multi_head<T>(const nn::BoundAttention<T>&,        \
                                        ad::Var<T>, ad::Var<T>, ad::Var<T>); \
  template nn::Encoded<T> nn::encode<T>(const nn::BoundModel<T>&,            \
                                        ad::Var<T>, ad::Var<T>);             \
  template nn::GaussianHead<T> nn::decode<T>(                                \
      const nn::BoundModel<T>&, const nn::Encoded<T>&, ad::Var<T>);          \
  template std::pair<ad::Var<T>, ad::Var<T>> nn::context_inputs<T>(          \
      ad::Tape<T>&, const ContextSet&);                                       \
  template StandardGaussian predict_standardized<T>(                          \
      const ModelParams<T>&, const ContextSet&, std::array<float, 2>);

SANP_INSTANTIATE(float)
SANP_INSTANTIATE(double)

#undef SANP_INSTANTIATE

}  // namespace sanp
