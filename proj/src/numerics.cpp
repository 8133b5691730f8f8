#include "sphd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

namespace sphd {

namespace {

// Abscissa/weight of the tanh-sinh rule at trellis point u = k*h.
// x = tanh(pi/2 * sinh(u)); returns x via the distance to +1 and -1 so the
// caller can evaluate endpoint-singular integrands without cancellation.
struct TsNode {
    double x;
    double dist_plus;  // 1 - x
    double dist_minus; // 1 + x
    double weight;
};

TsNode ts_node(double u) {
    const double half_pi = 1.5707963267948966;
    double s = half_pi * std::sinh(u);
    double ch = std::cosh(s);
    TsNode n;
    n.x = std::tanh(s);
    // 1 -+ tanh(s) = 2 e^{-+2s} / (1 + e^{-+2s})
    double em = std::exp(-2.0 * s);
    double ep = std::exp(2.0 * s);
    n.dist_plus = 2.0 * em / (1.0 + em);
    n.dist_minus = 2.0 * ep / (1.0 + ep);
    n.weight = half_pi * std::cosh(u) / (ch * ch);
    return n;
}

double simpson_rule(const std::function<double(double)>& f, double a, double fa,
                    double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                            double fa, double fb, double fm, double whole, double tol,
                            int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson_rule(f, a, fa, m, fm, flm);
    double right = simpson_rule(f, m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (depth > 60)
        return left + right + delta / 15.0;
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, fm, flm, left, 0.5 * tol, depth + 1) +
           adaptive_simpson_rec(f, m, b, fm, fb, frm, right, 0.5 * tol, depth + 1);
}

} // namespace

double tanh_sinh(const EndpointIntegrand& f, double a, double b, double abs_tol) {
    if (!(b > a))
        throw std::invalid_argument("tanh_sinh: empty interval");
    const double c = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    // Map x in (-1,1) to y in (a,b): y = mid + c*x, y-a = c*(1+x), b-y = c*(1-x).
    auto eval = [&](const TsNode& n) {
        return f(mid + c * n.x, c * n.dist_minus, c * n.dist_plus) * n.weight;
    };

    const double u_max = 6.5; // exp(-exp(6.5)*pi/2) underflows far past double range
    double h = 1.0;
    double integral = eval(ts_node(0.0));
    for (double u = h; u <= u_max; u += h) {
        double t1 = eval(ts_node(u));
        double t2 = eval(ts_node(-u));
        if (std::isfinite(t1)) integral += t1;
        if (std::isfinite(t2)) integral += t2;
    }
    double prev = integral * h;
    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (double u = h; u <= u_max; u += 2.0 * h) {
            double t1 = eval(ts_node(u));
            double t2 = eval(ts_node(-u));
            if (std::isfinite(t1)) add += t1;
            if (std::isfinite(t2)) add += t2;
        }
        integral += add;
        double cur = integral * h;
        if (level >= 3 && std::abs(cur - prev) <= abs_tol / (2.0 * c))
            return c * cur;
        prev = cur;
    }
    return c * prev;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = simpson_rule(f, a, fa, b, fb, fm);
    return adaptive_simpson_rec(f, a, b, fa, fb, fm, whole, abs_tol, 0);
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (counter + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

int default_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

double parallel_block_sum(std::size_t n, std::size_t block_size, int threads,
                          const std::function<double(std::size_t, std::size_t, std::size_t)>& fn) {
    if (block_size == 0) block_size = 1;
    std::size_t nblocks = (n + block_size - 1) / block_size;
    std::vector<double> results(nblocks, 0.0);
    if (threads <= 0) threads = default_threads();

    auto worker = [&](std::size_t first, std::size_t step) {
        for (std::size_t blk = first; blk < nblocks; blk += step) {
            std::size_t lo = blk * block_size;
            std::size_t hi = std::min(n, lo + block_size);
            results[blk] = fn(blk, lo, hi);
        }
    };
    if (threads == 1 || nblocks <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        std::size_t nw = std::min<std::size_t>(threads, nblocks);
        pool.reserve(nw);
        for (std::size_t w = 0; w < nw; ++w)
            pool.emplace_back(worker, w, nw);
        for (auto& t : pool) t.join();
    }
    CompensatedSum acc;
    for (double r : results) acc.add(r);
    return acc.value();
}

std::vector<double> parallel_block_vsum(
    std::size_t n, std::size_t block_size, int threads, std::size_t dim,
    const std::function<void(std::size_t, std::size_t, std::size_t, double*)>& fn) {
    if (block_size == 0) block_size = 1;
    std::size_t nblocks = (n + block_size - 1) / block_size;
    std::vector<double> results(nblocks * dim, 0.0);
    if (threads <= 0) threads = default_threads();

    auto worker = [&](std::size_t first, std::size_t step) {
        for (std::size_t blk = first; blk < nblocks; blk += step) {
            std::size_t lo = blk * block_size;
            std::size_t hi = std::min(n, lo + block_size);
            fn(blk, lo, hi, results.data() + blk * dim);
        }
    };
    if (threads == 1 || nblocks <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        std::size_t nw = std::min<std::size_t>(threads, nblocks);
        pool.reserve(nw);
        for (std::size_t w = 0; w < nw; ++w)
            pool.emplace_back(worker, w, nw);
        for (auto& t : pool) t.join();
    }
    std::vector<double> out(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
        CompensatedSum acc;
        for (std::size_t blk = 0; blk < nblocks; ++blk)
            acc.add(results[blk * dim + k]);
        out[k] = acc.value();
    }
    return out;
}

} // namespace sphd
