#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace sphd {

// Kahan-Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Integrand for endpoint-aware quadrature: f(x, da, db) where da = x - a and
// db = b - x are computed without cancellation near the endpoints.
using EndpointIntegrand = std::function<double(double, double, double)>;

// Tanh-sinh (double exponential) quadrature on (a, b). Handles integrable
// endpoint singularities. abs_tol is the target absolute error.
double tanh_sinh(const EndpointIntegrand& f, double a, double b, double abs_tol);

// Adaptive Simpson on [a, b] for a bounded integrand.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol);

// splitmix64 step, used to derive independent seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Derives a child seed from a master seed and a counter. Distinct counters
// give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

// Deterministic parallel map-reduce over [0, n) split into contiguous blocks.
// fn(block_index, begin, end) -> double; results are folded in block order so
// the output does not depend on the number of threads.
double parallel_block_sum(std::size_t n, std::size_t block_size, int threads,
                          const std::function<double(std::size_t, std::size_t, std::size_t)>& fn);

// Same discipline for vector-valued block results (folded elementwise in
// block order).
std::vector<double> parallel_block_vsum(
    std::size_t n, std::size_t block_size, int threads, std::size_t dim,
    const std::function<void(std::size_t, std::size_t, std::size_t, double*)>& fn);

int default_threads();

} // namespace sphd
