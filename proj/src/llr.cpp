#include "subthz/llr.hpp"

#include <algorithm>
#include <limits>

namespace subthz {

std::vector<float> demap_llr(std::span<const cplx> symbols, Modulation mod,
                             std::span<const double> sinr) {
    if (symbols.size() != sinr.size()) {
        throw InputError("demap_llr: symbol and SINR counts differ");
    }
    const int bps = bits_per_symbol(mod);
    const int bpd = bps / 2;
    const double scale = qam_scale(mod);
    const auto levels = pam_levels(bpd);
    const int nlev = static_cast<int>(levels.size());

    std::vector<float> out(symbols.size() * static_cast<std::size_t>(bps));
    std::vector<double> d0(static_cast<std::size_t>(bpd));
    std::vector<double> d1(static_cast<std::size_t>(bpd));
    for (std::size_t n = 0; n < symbols.size(); ++n) {
        if (!(sinr[n] > 0.0)) {
            throw InputError("demap_llr: SINR must be positive");
        }
        const double axis[2] = {symbols[n].real(), symbols[n].imag()};
        for (int a = 0; a < 2; ++a) {
            std::fill(d0.begin(), d0.end(), std::numeric_limits<double>::infinity());
            std::fill(d1.begin(), d1.end(), std::numeric_limits<double>::infinity());
            for (int idx = 0; idx < nlev; ++idx) {
                const double e = axis[a] - scale * levels[static_cast<std::size_t>(idx)];
                const double d = e * e;
                for (int b = 0; b < bpd; ++b) {
                    const bool one = ((idx >> (bpd - 1 - b)) & 1) != 0;
                    auto& slot = one ? d1[static_cast<std::size_t>(b)] : d0[static_cast<std::size_t>(b)];
                    slot = std::min(slot, d);
                }
            }
            for (int b = 0; b < bpd; ++b) {
                const auto bit = static_cast<std::size_t>(2 * b + a);
                out[n * static_cast<std::size_t>(bps) + bit] = static_cast<float>(
                    sinr[n] * (d1[static_cast<std::size_t>(b)] - d0[static_cast<std::size_t>(b)]));
            }
        }
    }
    return out;
}

}  // namespace subthz
