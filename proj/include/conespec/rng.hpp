#pragma once

#include <cmath>
#include <cstdint>

namespace conespec {

// Deterministic splitmix64-based generator. We roll our own distributions so
// that results are bit-identical across standard libraries; std::normal_distribution
// is implementation-defined and would break reproducible CLI output.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    double log_uniform(double a, double b) {
        return std::exp(uniform(std::log(a), std::log(b)));
    }

    // Box-Muller without caching the spare value (keeps state trivially forkable).
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    std::size_t index(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next_u64() % n); }

    // Independent stream for trial `stream`; used to run trials in any order
    // (or concurrently) with identical results.
    Rng fork(std::uint64_t stream) const {
        Rng child(state_ + 0x632be59bd9b4e019ull * (stream + 1));
        child.next_u64();
        return child;
    }

  private:
    std::uint64_t state_;
};

}  // namespace conespec
