#pragma once

#include <limits>

#include "subthz/types.hpp"

namespace subthz {

/// Memoryless PA with Rapp AM/AM compression and no AM/PM:
///   |y| = |x| / (1 + (|x|/A_sat)^(2p))^(1/(2p))
/// An infinite smoothness is an ideal limiter (hard clip at A_sat).
struct PaModel {
    enum class Kind { Ideal, Rapp };

    Kind kind = Kind::Ideal;
    double smoothness = 2.0;
    double saturation_amplitude = 1.0;
    double backoff_db = 0.0;

    static PaModel ideal() { return {}; }
    static PaModel rapp(double smoothness = 2.0, double backoff_db = 0.0) {
        return {Kind::Rapp, smoothness, 1.0, backoff_db};
    }
    static PaModel hard_clip(double backoff_db = 0.0) {
        return {Kind::Rapp, std::numeric_limits<double>::infinity(), 1.0, backoff_db};
    }
};

/// Rapp output amplitude for input amplitude `a`.
double rapp_amplitude(double a, double smoothness, double saturation);

/// Scales the input so its mean power sits `backoff_db` below A_sat^2, then
/// compresses. The ideal PA returns the input untouched.
TimeSignal apply_pa(const TimeSignal& sig, const PaModel& pa);

}  // namespace subthz
