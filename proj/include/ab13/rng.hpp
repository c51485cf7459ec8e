// Seeded deterministic random source.
//
// All randomized scans must be byte-reproducible for a fixed seed across
// platforms, so we draw raw words from std::mt19937_64 (whose output sequence
// the standard pins down) and reduce by modulo ourselves. The standard
// distribution adaptors are avoided on purpose: their algorithms are
// implementation-defined.
#pragma once

#include <cstdint>
#include <random>

namespace ab13 {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t u64() { return eng_(); }

    // Uniform-ish value in [lo, hi] (modulo bias is acceptable here; only
    // determinism and rough uniformity matter for the scans).
    std::int64_t in_range(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(eng_() % span);
    }

    // Derive an independent child stream (used to hand workers their own
    // generator so thread count cannot change the draw sequence).
    Rng fork(std::uint64_t salt) {
        return Rng(eng_() ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace ab13
