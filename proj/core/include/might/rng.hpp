#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace might {

/// Purposes used to split a seed into independent substreams.
enum class Stream : std::uint64_t {
    replication = 1,
    base_graph = 2,
    pruning = 3,
    edge_values = 4,
    data = 5,
    split = 6,
    truth = 7,
};

/// Counter-based 64-bit generator.
///
/// Output t is a SplitMix64 finalizer applied to (key, t), so a stream is a
/// pure function of its key and position. Distributions are implemented here
/// rather than taken from <random> so that values agree across standard
/// libraries.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0) noexcept
        : key_(key), counter_(counter) {}

    /// Key of a child stream; distinct (parent, tags) give unrelated keys.
    static std::uint64_t derive(std::uint64_t parent, Stream purpose, std::uint64_t a = 0,
                                std::uint64_t b = 0) noexcept;

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

    std::uint64_t next() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform integer on [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;
    /// Standard normal via the Box-Muller transform (uses two outputs).
    double normal() noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept { return next(); }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 output function.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Fisher-Yates shuffle driven by `rng`.
template <typename T>
void shuffle(std::span<T> items, CounterRng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace might
