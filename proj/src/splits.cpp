#include "sanp/splits.hpp"

#include <algorithm>
#include <string>

#include "sanp/errors.hpp"
#include "sanp/rng.hpp"

namespace sanp {

Splits make_splits(const DemGrid& grid, const SplitSpec& spec) {
  std::vector<std::size_t> observed;
  observed.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.observed(i)) observed.push_back(i);
  const std::size_t held = spec.n_valid + spec.n_test;
  if (observed.size() < held + 1)
    throw DataError("insufficient observed pixels: " +
                    std::to_string(observed.size()) + " available, " +
                    std::to_string(held + 1) + " required");

  Rng rng = make_rng(spec.seed, 0x5b11);
  // Partial Fisher-Yates: the first `held` slots become the held-out draw.
  for (std::size_t i = 0; i < held; ++i) {
    const std::size_t j = i + uniform_index(rng, observed.size() - i);
    std::swap(observed[i], observed[j]);
  }
  Splits s;
  s.valid.assign(observed.begin(), observed.begin() + spec.n_valid);
  s.test.assign(observed.begin() + spec.n_valid, observed.begin() + held);
  std::sort(s.valid.begin(), s.valid.end());
  std::sort(s.test.begin(), s.test.end());
  s.trainable.assign(grid.size(), 0);
  for (std::size_t k = held; k < observed.size(); ++k) s.trainable[observed[k]] = 1;
  return s;
}

DemGrid mask_heldout(const DemGrid& grid, const Splits& splits) {
  DemGrid out = grid;
  for (auto i : splits.valid) out.nodata[i] = 1;
  for (auto i : splits.test) out.nodata[i] = 1;
  return out;
}

}  // namespace sanp
