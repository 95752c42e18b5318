#include "halfway/rng.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "halfway/errors.hpp"

namespace halfway {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t substream) noexcept
    : seed_(seed), stream_id_(stream_id), substream_(substream) {
    std::uint64_t key = mix64(seed + kGoldenGamma);
    key = mix64(key ^ mix64(stream_id + 2 * kGoldenGamma));
    key_ = mix64(key ^ mix64(substream + 3 * kGoldenGamma));
}

RngStream::result_type RngStream::operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGoldenGamma);
}

double RngStream::uniform() noexcept {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>((*this)() >> 11) + 0.5) * kScale;
}

double RngStream::normal() {
    return boost::random::normal_distribution<double>{}(*this);
}

double RngStream::exponential(double rate) {
    if (!(rate > 0.0)) throw DomainError("exponential rate must be > 0");
    return boost::random::exponential_distribution<double>{rate}(*this);
}

}  // namespace halfway
