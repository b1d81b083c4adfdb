#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sanp/tensor.hpp"

namespace sanp {

// Ordered collection of named tensors. Order is insertion order and is the
// order used for checkpoints and optimizer state.
template <class T>
class ParamSet {
 public:
  std::size_t add(std::string name, Tensor<T> value) {
    if (lookup_.contains(name))
      throw ContractError("duplicate parameter name '" + name + "'");
    lookup_.emplace(name, tensors_.size());
    names_.push_back(std::move(name));
    tensors_.push_back(std::move(value));
    return tensors_.size() - 1;
  }

  std::size_t index(std::string_view name) const {
    auto it = lookup_.find(std::string(name));
    if (it == lookup_.end())
      throw ContractError("unknown parameter '" + std::string(name) + "'");
    return it->second;
  }
  bool contains(std::string_view name) const {
    return lookup_.contains(std::string(name));
  }

  std::size_t size() const { return tensors_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  Tensor<T>& operator[](std::size_t i) { return tensors_[i]; }
  const Tensor<T>& operator[](std::size_t i) const { return tensors_[i]; }
  Tensor<T>& at(std::string_view name) { return tensors_[index(name)]; }
  const Tensor<T>& at(std::string_view name) const {
    return tensors_[index(name)];
  }

  std::size_t element_count() const {
    std::size_t n = 0;
    for (const auto& t : tensors_) n += t.size();
    return n;
  }

  ParamSet zeros_like() const {
    ParamSet out;
    for (std::size_t i = 0; i < size(); ++i)
      out.add(names_[i], Tensor<T>(tensors_[i].shape));
    return out;
  }

  void fill_zero() {
    for (auto& t : tensors_) std::fill(t.values.begin(), t.values.end(), T(0));
  }

  template <class U>
  ParamSet<U> cast() const {
    ParamSet<U> out;
    for (std::size_t i = 0; i < size(); ++i)
      out.add(names_[i], tensors_[i].template cast<U>());
    return out;
  }

  bool operator==(const ParamSet& other) const {
    return names_ == other.names_ && tensors_ == other.tensors_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Tensor<T>> tensors_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

}  // namespace sanp
