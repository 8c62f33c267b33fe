#include "dyson_edge/rng.hpp"

#include <cmath>

namespace dyson_edge {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(mix64(master) ^ mix64(index ^ 0xd1b54a32d192ed03ULL));
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), index_(stream_index), engine_(derive_seed(seed, stream_index)) {}

RngStream RngStream::split(std::uint64_t index) const { return RngStream(derive_seed(seed_, index_), index); }

double RngStream::normal(double variance) { return normal_(engine_) * std::sqrt(variance); }

double RngStream::gamma(double shape, double scale) {
    std::gamma_distribution<double> dist(shape, scale);
    return dist(engine_);
}

}  // namespace dyson_edge
