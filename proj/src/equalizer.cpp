#include "subthz/equalizer.hpp"

#include <algorithm>
#include <numeric>

namespace subthz {

namespace {

constexpr double kRelativeRegularisation = 1e-14;
constexpr double kMaxSinr = 1e12;

double sinr_from_gain(double g) {
    return g >= 1.0 ? kMaxSinr : std::min(g / (1.0 - g), kMaxSinr);
}

}  // namespace

std::vector<EqualizedLayer> mmse_equalize(std::span<const ResourceGrid> rx,
                                          std::span<const Mat2> h, double noise_var, int rank) {
    if (rank != 1 && rank != 2) {
        throw InputError("mmse_equalize: rank must be 1 or 2");
    }
    if (rx.size() != 2 || !rx[0].same_shape(rx[1]) || h.size() != rx[0].size()) {
        throw InputError("mmse_equalize: expected two equally shaped port grids and one H per RE");
    }
    std::vector<EqualizedLayer> out(static_cast<std::size_t>(rank));
    for (int l = 0; l < rank; ++l) {
        auto& layer = out[static_cast<std::size_t>(l)];
        layer.symbols = ResourceGrid(rx[0].symbols(), rx[0].columns(), l);
        layer.gain.resize(rx[0].size());
        layer.sinr.resize(rx[0].size());
    }
    const auto y0 = rx[0].data();
    const auto y1 = rx[1].data();
    for (std::size_t i = 0; i < h.size(); ++i) {
        const Mat2& H = h[i];
        const double scale = H.squaredNorm();
        const double s2 = std::max(noise_var, kRelativeRegularisation * scale);
        Eigen::Vector2cd y(y0[i], y1[i]);
        if (rank == 1) {
            const Eigen::Vector2cd col = H.col(0);
            const double e = col.squaredNorm();
            const double g = e / (e + s2);
            const cplx z = col.dot(y) / (e + s2);  // dot conjugates the first argument
            auto& layer = out[0];
            layer.gain[i] = g;
            layer.sinr[i] = sinr_from_gain(g);
            layer.symbols.data()[i] = g > 0.0 ? z / g : cplx{};
        } else {
            const Mat2 gram = H.adjoint() * H + s2 * Mat2::Identity();
            const Mat2 w = gram.inverse() * H.adjoint();
            const Mat2 wh = w * H;
            const Eigen::Vector2cd z = w * y;
            for (int l = 0; l < 2; ++l) {
                auto& layer = out[static_cast<std::size_t>(l)];
                const double g = std::clamp(wh(l, l).real(), 0.0, 1.0);
                layer.gain[i] = g;
                layer.sinr[i] = sinr_from_gain(g);
                layer.symbols.data()[i] = g > 0.0 ? z(l) / g : cplx{};
            }
        }
    }
    return out;
}

double despread_sinr(std::span<const double> gain) {
    if (gain.empty()) {
        return 0.0;
    }
    const double g = std::accumulate(gain.begin(), gain.end(), 0.0) / static_cast<double>(gain.size());
    return sinr_from_gain(g);
}

}  // namespace subthz
