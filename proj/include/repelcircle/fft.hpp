#pragma once

#include <complex>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace repelcircle {
namespace detail {

// FFTW plan creation is not thread-safe; execution on private buffers is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace detail

/// One reusable backward (sign +1, unnormalized) complex DFT of fixed
/// size: out_j = sum_k in_k exp(+2 pi i j k / n). Planned once with
/// FFTW_ESTIMATE so the algorithm choice is deterministic for a build;
/// owns aligned buffers, so one instance per thread.
class Dft {
public:
    explicit Dft(int size) : n_(size) {
        if (size < 1) {
            throw std::invalid_argument("Dft: size must be positive");
        }
        in_ = fftw_alloc_complex(static_cast<std::size_t>(size));
        out_ = fftw_alloc_complex(static_cast<std::size_t>(size));
        if (!in_ || !out_) {
            fftw_free(in_);
            fftw_free(out_);
            throw std::bad_alloc();
        }
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        plan_ = fftw_plan_dft_1d(size, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!plan_) {
            fftw_free(in_);
            fftw_free(out_);
            throw std::runtime_error("Dft: fftw plan creation failed");
        }
    }

    Dft(const Dft&) = delete;
    Dft& operator=(const Dft&) = delete;

    ~Dft() {
        {
            std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(in_);
        fftw_free(out_);
    }

    int size() const { return n_; }

    std::vector<std::complex<double>> backward(const std::vector<std::complex<double>>& in) {
        if (static_cast<int>(in.size()) != n_) {
            throw std::invalid_argument("Dft::backward: input size mismatch");
        }
        std::memcpy(in_, in.data(), sizeof(fftw_complex) * static_cast<std::size_t>(n_));
        fftw_execute(plan_);
        std::vector<std::complex<double>> out(static_cast<std::size_t>(n_));
        std::memcpy(out.data(), out_, sizeof(fftw_complex) * static_cast<std::size_t>(n_));
        return out;
    }

private:
    int n_;
    fftw_complex* in_;
    fftw_complex* out_;
    fftw_plan plan_;
};

}  // namespace repelcircle
