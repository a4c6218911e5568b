#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "subthz/errors.hpp"

namespace subthz {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Symbol-major matrix of complex values: one row per OFDM/SC-FDMA symbol,
/// one column per active subcarrier (or per sub-symbol for SC-FDMA data).
class ResourceGrid {
public:
    ResourceGrid() = default;
    ResourceGrid(int symbols, int columns, int layer = 0)
        : symbols_(symbols), columns_(columns), layer_(layer),
          data_(static_cast<std::size_t>(symbols) * static_cast<std::size_t>(columns)) {
        if (symbols < 0 || columns < 0) {
            throw InputError("ResourceGrid: negative dimension");
        }
    }

    int symbols() const { return symbols_; }
    int columns() const { return columns_; }
    int layer() const { return layer_; }
    void set_layer(int layer) { layer_ = layer; }
    std::size_t size() const { return data_.size(); }

    cplx& operator()(int symbol, int column) { return data_[index(symbol, column)]; }
    const cplx& operator()(int symbol, int column) const { return data_[index(symbol, column)]; }

    std::span<cplx> symbol(int s) {
        return {data_.data() + index(s, 0), static_cast<std::size_t>(columns_)};
    }
    std::span<const cplx> symbol(int s) const {
        return {data_.data() + index(s, 0), static_cast<std::size_t>(columns_)};
    }

    std::span<cplx> data() { return data_; }
    std::span<const cplx> data() const { return data_; }

    bool same_shape(const ResourceGrid& other) const {
        return symbols_ == other.symbols_ && columns_ == other.columns_;
    }

private:
    std::size_t index(int s, int c) const {
        return static_cast<std::size_t>(s) * static_cast<std::size_t>(columns_) +
               static_cast<std::size_t>(c);
    }

    int symbols_ = 0;
    int columns_ = 0;
    int layer_ = 0;
    CVector data_;
};

/// Complex baseband samples at a known rate.
struct TimeSignal {
    CVector samples;
    double sample_rate_hz = 0.0;

    std::size_t size() const { return samples.size(); }
};

double mean_power(std::span<const cplx> x);

}  // namespace subthz
