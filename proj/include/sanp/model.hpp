#pragma once
// Sparse attentive neural process network.
//
// Encoder: each context pair (x_i, y_i) is embedded as x_i W_l + y_i W_e and
// passed through mlp_e (D -> hidden -> D, ReLU) to give r_i; a multi-head
// self-attention layer over {r_i} yields R_attn.
// Decoder: multi-head cross-attention with query x* W_l, keys x_i W_l and
// values R_attn gives r*; mlp_d (D -> hidden -> 2, ReLU) maps r* to
// (mu, s) with sigma = softplus(s) + sigma_floor.
//
// Multi-head attention is w_0 + sum_k SDP(Q W^Q_k, K W^K_k, V W^V_k) W^k,
// i.e. per-head outputs are projected back to D and summed.

#include <cstdint>
#include <string>
#include <vector>

#include "sanp/autodiff.hpp"
#include "sanp/context.hpp"
#include "sanp/params.hpp"

namespace sanp {

struct ModelConfig {
  std::size_t dim = 512;
  std::size_t heads_enc = 2;
  std::size_t heads_dec = 2;
  std::size_t hidden = 1024;
  double sigma_floor = 1e-3;  // standardized units

  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

template <class T>
struct ModelParams {
  ModelConfig config;
  ParamSet<T> set;

  // Glorot-uniform weights, zero biases.
  static ModelParams init(const ModelConfig& cfg, std::uint64_t seed);
  // Checks that `set` holds exactly the parameters `cfg` requires.
  static ModelParams from_set(const ModelConfig& cfg, ParamSet<T> set);

  template <class U>
  ModelParams<U> cast() const {
    return ModelParams<U>{config, set.template cast<U>()};
  }
};

// Names and shapes of every learnable tensor for a configuration, in
// checkpoint order.
std::vector<std::pair<std::string, Shape>> parameter_layout(
    const ModelConfig& cfg);

namespace nn {

template <class T>
struct BoundAttention {
  std::vector<ad::Var<T>> wq, wk, wv, wo;
  ad::Var<T> bias;
};

template <class T>
struct BoundModel {
  const ModelConfig* config = nullptr;
  ad::Var<T> loc, elev;
  ad::Var<T> enc_fc1_w, enc_fc1_b, enc_fc2_w, enc_fc2_b;
  BoundAttention<T> self_attn, cross_attn;
  ad::Var<T> dec_fc1_w, dec_fc1_b, dec_fc2_w, dec_fc2_b;
};

// Exposes params on the tape. With grads non-null (same layout as
// params.set), backward accumulates parameter gradients into it.
template <class T>
BoundModel<T> bind(ad::Tape<T>& tape, const ModelParams<T>& params,
                   ParamSet<T>* grads);

// softmax(Q K^T / sqrt(d)) V with d the key width.
template <class T>
ad::Var<T> sdp(ad::Var<T> q, ad::Var<T> k, ad::Var<T> v);

template <class T>
ad::Var<T> multi_head(const BoundAttention<T>& attn, ad::Var<T> q,
                      ad::Var<T> k, ad::Var<T> v);

template <class T>
struct Encoded {
  ad::Var<T> keys;    // x_i W_l, K x D
  ad::Var<T> latent;  // R_attn, K x D
};

// xy: K x 2 relative coordinates, y: K x 1 standardized elevations.
template <class T>
Encoded<T> encode(const BoundModel<T>& m, ad::Var<T> xy, ad::Var<T> y);

template <class T>
struct GaussianHead {
  ad::Var<T> mu;     // M x 1
  ad::Var<T> sigma;  // M x 1
};

// targets: M x 2 relative coordinates.
template <class T>
GaussianHead<T> decode(const BoundModel<T>& m, const Encoded<T>& enc,
                       ad::Var<T> targets);

// Context tensors on the tape.
template <class T>
std::pair<ad::Var<T>, ad::Var<T>> context_inputs(ad::Tape<T>& tape,
                                                 const ContextSet& ctx);

}  // namespace nn

// Standardized predictive distribution for one target.
struct StandardGaussian {
  double mu = 0.0;
  double sigma = 1.0;
};

// Forward pass without gradient bookkeeping. target defaults to the origin,
// which is where every target sits in relative coordinates.
template <class T>
StandardGaussian predict_standardized(const ModelParams<T>& params,
                                      const ContextSet& ctx,
                                      std::array<float, 2> target = {0, 0});

}  // namespace sanp
