#pragma once

#include <span>

#include "subthz/types.hpp"

namespace subthz {

// Unitary DFT pair: both directions scale by 1/sqrt(n), so energy is preserved
// and dft(idft(x)) == x. Backed by FFTW with FFTW_ESTIMATE plans (deterministic
// algorithm selection); plans are cached per (size, direction) and safe to use
// from concurrent threads.
void dft(std::span<const cplx> in, std::span<cplx> out);
void idft(std::span<const cplx> in, std::span<cplx> out);

CVector dft(std::span<const cplx> in);
CVector idft(std::span<const cplx> in);

// Unscaled transforms (sum convention) for spectral estimation and synthesis.
void dft_unscaled(std::span<const cplx> in, std::span<cplx> out);
void idft_unscaled(std::span<const cplx> in, std::span<cplx> out);

}  // namespace subthz
