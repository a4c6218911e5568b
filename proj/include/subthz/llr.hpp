#pragma once

#include <span>
#include <vector>

#include "subthz/modulation.hpp"
#include "subthz/types.hpp"

namespace subthz {

/// Max-log bit LLRs (positive = bit 0) for unbiased equalised symbols with
/// per-symbol post-equalisation SINR. Square QAM factors into two PAM
/// dimensions, each seeing half the noise, so every LLR is
/// sinr * (min over bit=1 of |y-x|^2 - min over bit=0 of |y-x|^2) per axis.
std::vector<float> demap_llr(std::span<const cplx> symbols, Modulation mod,
                             std::span<const double> sinr);

}  // namespace subthz
