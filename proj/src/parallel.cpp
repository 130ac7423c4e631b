#include "foliage/parallel.hpp"
#include "foliage/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace foliage {

unsigned worker_count()
{
    if (const char* env = std::getenv("FOLIAGE_THREADS")) {
        try {
            long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body)
{
    const std::size_t workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            if (failed.load()) return;
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

Complex SparsePolynomial::operator()(std::span<const Complex> x) const
{
    if (static_cast<int>(x.size()) != arity_) throw std::invalid_argument("evaluation point has wrong arity");
    std::vector<std::vector<Complex>> powers(arity_, std::vector<Complex>(degree_ + 1, Complex(1.0)));
    for (int v = 0; v < arity_; ++v)
        for (int k = 1; k <= degree_; ++k) powers[v][k] = powers[v][k - 1] * x[v];
    Complex acc = 0;
    for (const auto& t : terms_) {
        Complex m = t.c;
        for (int v = 0; v < arity_; ++v)
            if (t.e[v]) m *= powers[v][t.e[v]];
        acc += m;
    }
    return acc;
}

double radical_inverse(std::uint64_t index, unsigned base)
{
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

std::vector<std::vector<Complex>> halton_ball(int n, std::size_t count, double radius, std::uint64_t seed)
{
    static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    if (n < 1 || 2 * n > static_cast<int>(std::size(primes))) throw std::invalid_argument("grid dimension out of range");
    if (!(radius > 0)) throw std::invalid_argument("grid radius must be positive");
    std::vector<std::vector<Complex>> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> u(2 * n);
        for (int k = 0; k < 2 * n; ++k) u[k] = 2.0 * radical_inverse(seed + i + 1, primes[k]) - 1.0;
        // Cube [-1,1]^{2n} onto the unit ball along rays: sup-norm becomes
        // Euclidean radius.
        double sup = 0, eu = 0;
        for (double v : u) {
            sup = std::max(sup, std::abs(v));
            eu += v * v;
        }
        eu = std::sqrt(eu);
        const double s = eu > 0 ? radius * sup / eu : 0.0;
        std::vector<Complex> p(n);
        for (int k = 0; k < n; ++k) p[k] = Complex(u[2 * k] * s, u[2 * k + 1] * s);
        out.push_back(std::move(p));
    }
    return out;
}

double norm(std::span<const Complex> x)
{
    double s = 0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

double distance(std::span<const Complex> a, std::span<const Complex> b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

} // namespace foliage
