#include "sanp/dataset.hpp"

namespace sanp {

Dataset Dataset::build(DemGrid grid, const SplitSpec& split) {
  grid.validate();
  Dataset d;
  d.splits = make_splits(grid, split);
  d.train_grid = mask_heldout(grid, d.splits);
  d.truth = std::move(grid);
  for (std::size_t i = 0; i < d.splits.trainable.size(); ++i)
    if (d.splits.trainable[i]) d.train_pixels.push_back(i);
  d.stats = elevation_stats(d.train_grid);
  if (!(d.stats.std > 0)) d.stats.std = 1.0;
  return d;
}

}  // namespace sanp
