#include "might/rng.hpp"

#include <cmath>
#include <numbers>

namespace might {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t CounterRng::derive(std::uint64_t parent, Stream purpose, std::uint64_t a,
                                 std::uint64_t b) noexcept {
    std::uint64_t h = mix64(parent + kGolden);
    h = mix64(h ^ (static_cast<std::uint64_t>(purpose) * kGolden));
    h = mix64(h ^ (a + 1) * 0xD1B54A32D192ED03ULL);
    h = mix64(h ^ (b + 1) * 0x8CB92BA72F3D8DD7ULL);
    return h;
}

std::uint64_t CounterRng::next() noexcept {
    const std::uint64_t z = mix64(key_ ^ mix64((counter_ + 1) * kGolden));
    ++counter_;
    return z;
}

double CounterRng::uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
    // Rejection on the top of the range keeps the draw unbiased.
    const std::uint64_t limit = max() - max() % bound;
    for (;;) {
        const std::uint64_t v = next();
        if (v < limit) return v % bound;
    }
}

double CounterRng::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 == 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

}  // namespace might
