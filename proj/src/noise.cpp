#include "qtc/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace qtc {
namespace {

std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x51ed270bU};
    return std::mt19937_64(seq);
}

} // namespace

NoiseSource::NoiseSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream))
{
}

double NoiseSource::increment(double dt)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("NoiseSource::increment: dt must be positive");
    }
    return std::sqrt(dt) * normal_(engine_);
}

std::vector<double> NoiseSource::increments(double dt, std::size_t n)
{
    std::vector<double> out(n);
    for (auto& v : out) {
        v = increment(dt);
    }
    return out;
}

NoiseSource NoiseSource::derive(std::uint64_t child) const
{
    return NoiseSource(seed_, splitmix64(stream_ ^ splitmix64(child + 0x632be59bd9b4e019ULL)));
}

} // namespace qtc
