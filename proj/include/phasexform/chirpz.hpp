#pragma once
// Bluestein (chirp-z) evaluation of a Fourier sum on an arbitrary
// uniform frequency grid.
//
// Evaluates
//
// Y[m] = sum_k x[k] * exp(-i * w_m * t_k),
// t_k = t0 + k*dt  (k < N),   w_m = w0 + m*dw  (m < M),
//
// by writing m*k = (m^2 + k^2 - (m-k)^2)/2, which turns the sum into a linear
// convolution with the chirp exp(i*theta*n^2/2), theta = dw*dt. The
// convolution is done with power-of-two FFTs (FFTW).

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace phasexform {

namespace detail {

// FFTW planning is not thread-safe; execution on distinct plans is.
inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
struct FftwPlanDestroy {
    void operator()(fftw_plan p) const
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(p);
    }
};

using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;
using FftwPlan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, FftwPlanDestroy>;

inline std::size_t next_pow2(std::size_t n)
{
    std::size_t l = 1;
    while (l < n) l <<= 1;
    return l;
}

} // namespace detail

// In-place complex FFT of fixed length that owns its buffer and plans.
class Fft {
public:
    explicit Fft(std::size_t n) : n_(n)
    {
        if (n == 0) throw std::invalid_argument("Fft: zero length");
        buf_.reset(fftw_alloc_complex(n));
        std::lock_guard lock(detail::fftw_planner_mutex());
        fwd_.reset(fftw_plan_dft_1d(static_cast<int>(n), buf_.get(), buf_.get(), FFTW_FORWARD, FFTW_ESTIMATE));
        bwd_.reset(fftw_plan_dft_1d(static_cast<int>(n), buf_.get(), buf_.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
    }

    std::size_t size() const { return n_; }
    std::span<std::complex<double>> data()
    {
        return {reinterpret_cast<std::complex<double>*>(buf_.get()), n_};
    }
    void forward() { fftw_execute(fwd_.get()); }
    // Unnormalized inverse.
    void backward() { fftw_execute(bwd_.get()); }

private:
    std::size_t n_;
    detail::FftwBuffer buf_;
    detail::FftwPlan fwd_;
    detail::FftwPlan bwd_;
};

// Precomputed chirp-z evaluator for fixed input/output sample layouts.
class ChirpZ {
public:
    ChirpZ(std::size_t n_in, double t0, double dt, std::size_t n_out, double w0, double dw)
        : n_in_(n_in), n_out_(n_out), fft_(detail::next_pow2(n_in + n_out - 1)), pre_(n_in), post_(n_out),
          kernel_(fft_.size())
    {
        using namespace std::complex_literals;
        const double theta = dw * dt;
        for (std::size_t k = 0; k < n_in; ++k) {
            double kk = static_cast<double>(k);
            pre_[k] = std::exp(-1i * (w0 * kk * dt + 0.5 * theta * kk * kk));
        }
        for (std::size_t m = 0; m < n_out; ++m) {
            double mm = static_cast<double>(m);
            post_[m] = std::exp(-1i * ((w0 + mm * dw) * t0 + 0.5 * theta * mm * mm));
        }
        auto buf = fft_.data();
        std::fill(buf.begin(), buf.end(), std::complex<double>{});
        const std::size_t len = fft_.size();
        for (std::size_t n = 0; n < n_out; ++n) {
            double nn = static_cast<double>(n);
            buf[n] = std::exp(0.5i * theta * nn * nn);
        }
        for (std::size_t n = 1; n < n_in; ++n) {
            double nn = static_cast<double>(n);
            buf[len - n] = std::exp(0.5i * theta * nn * nn);
        }
        fft_.forward();
        const double scale = 1.0 / static_cast<double>(len);
        for (std::size_t n = 0; n < len; ++n) kernel_[n] = buf[n] * scale;
    }

    std::size_t input_size() const { return n_in_; }
    std::size_t output_size() const { return n_out_; }

    // out[m] = sum_k in[k] exp(-i w_m t_k). Not reentrant: uses an internal buffer.
    void operator()(std::span<const std::complex<double>> in, std::span<std::complex<double>> out)
    {
        if (in.size() != n_in_ || out.size() != n_out_) throw std::invalid_argument("ChirpZ: size mismatch");
        auto buf = fft_.data();
        for (std::size_t k = 0; k < n_in_; ++k) buf[k] = in[k] * pre_[k];
        std::fill(buf.begin() + static_cast<std::ptrdiff_t>(n_in_), buf.end(), std::complex<double>{});
        fft_.forward();
        for (std::size_t n = 0; n < buf.size(); ++n) buf[n] *= kernel_[n];
        fft_.backward();
        for (std::size_t m = 0; m < n_out_; ++m) out[m] = buf[m] * post_[m];
    }

    std::vector<std::complex<double>> operator()(std::span<const std::complex<double>> in)
    {
        std::vector<std::complex<double>> out(n_out_);
        (*this)(in, out);
        return out;
    }

private:
    std::size_t n_in_;
    std::size_t n_out_;
    Fft fft_;
    std::vector<std::complex<double>> pre_;
    std::vector<std::complex<double>> post_;
    std::vector<std::complex<double>> kernel_;
};

} // namespace phasexform
