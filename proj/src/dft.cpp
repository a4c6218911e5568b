#include "subthz/dft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace subthz {

namespace {

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    fftw_plan get(int n, int sign, bool in_place) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(n, sign, in_place);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        // FFTW_ESTIMATE never touches the arrays during planning.
        auto* in = fftw_alloc_complex(static_cast<std::size_t>(n));
        auto* out = fftw_alloc_complex(static_cast<std::size_t>(n));
        fftw_plan plan =
            fftw_plan_dft_1d(n, in, in_place ? in : out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(std::span<const cplx> in, std::span<cplx> out, int sign) {
    if (in.size() != out.size()) {
        throw InputError("dft: input/output length mismatch");
    }
    if (in.empty()) {
        return;
    }
    const int n = static_cast<int>(in.size());
    // new-array execute is thread safe; fftw_complex is layout compatible with std::complex.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan = cache().get(n, sign, src == dst);
    fftw_execute_dft(plan, src, dst);
}

void scale(std::span<cplx> x, double s) {
    for (auto& v : x) {
        v *= s;
    }
}

}  // namespace

void dft_unscaled(std::span<const cplx> in, std::span<cplx> out) { execute(in, out, FFTW_FORWARD); }

void idft_unscaled(std::span<const cplx> in, std::span<cplx> out) { execute(in, out, FFTW_BACKWARD); }

void dft(std::span<const cplx> in, std::span<cplx> out) {
    execute(in, out, FFTW_FORWARD);
    scale(out, 1.0 / std::sqrt(static_cast<double>(out.size())));
}

void idft(std::span<const cplx> in, std::span<cplx> out) {
    execute(in, out, FFTW_BACKWARD);
    scale(out, 1.0 / std::sqrt(static_cast<double>(out.size())));
}

CVector dft(std::span<const cplx> in) {
    CVector out(in.size());
    dft(in, out);
    return out;
}

CVector idft(std::span<const cplx> in) {
    CVector out(in.size());
    idft(in, out);
    return out;
}

double mean_power(std::span<const cplx> x) {
    if (x.empty()) {
        return 0.0;
    }
    double acc = 0.0;
    for (const auto& v : x) {
        acc += std::norm(v);
    }
    return acc / static_cast<double>(x.size());
}

}  // namespace subthz
