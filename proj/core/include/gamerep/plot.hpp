#pragma once

#include <string>
#include <vector>

#include "gamerep/tensor.hpp"

namespace gamerep {

/// Renders a 2-D scatter to a PNG: one color per genre, marker shape cycling
/// per game within a genre so intra-genre sub-clusters stay visible.
/// game_ordinal[i] is the game's index within its genre.
void scatter_png(const std::string& path, const Tensor& coords,
                 const std::vector<int>& genre_ids, const std::vector<int>& game_ordinal,
                 int canvas = 900);

}  // namespace gamerep
