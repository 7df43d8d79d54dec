#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace qtc {

/// Seeded source of Wiener increments dW ~ N(0, dt).
///
/// A source is identified by (seed, stream). Identical identifiers give
/// bitwise-identical sequences on the same build; distinct streams are
/// seeded through std::seed_seq and treated as independent. Copying a
/// source copies its position, so a copy replays the original's future.
class NoiseSource {
public:
    explicit NoiseSource(std::uint64_t seed, std::uint64_t stream = 0);

    /// One increment with variance dt. Requires dt > 0.
    double increment(double dt);

    std::vector<double> increments(double dt, std::size_t n);

    /// A fresh source for logical child `child` of this stream.
    NoiseSource derive(std::uint64_t child) const;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace qtc
