#pragma once

#include <span>
#include <vector>

#include "subthz/channel.hpp"
#include "subthz/types.hpp"

namespace subthz {

/// Output of the linear MMSE stage for one spatial layer.
struct EqualizedLayer {
    ResourceGrid symbols;      // unbiased estimates (MMSE output divided by gain)
    std::vector<double> gain;  // per-RE MMSE bias (W H)_ll, in (0, 1]
    std::vector<double> sinr;  // per-RE post-equalisation SINR = gain / (1 - gain)
};

/// Per-RE linear MMSE detection W = (H^H H + s2 I)^-1 H^H. `h` holds the
/// effective per-RE channels (layer powers folded in) indexed like the grid
/// data; rank 1 uses only the first column. A tiny relative regularisation
/// keeps a noiseless singular channel invertible.
std::vector<EqualizedLayer> mmse_equalize(std::span<const ResourceGrid> rx,
                                          std::span<const Mat2> h, double noise_var, int rank);

/// Post-despreading SINR of a DFT-spread symbol whose subcarriers had MMSE
/// gains `gain`: g/(1-g) with g the mean gain.
double despread_sinr(std::span<const double> gain);

}  // namespace subthz
