#pragma once

#include <cstdint>
#include <limits>

namespace halfway {

/// Counter-based random stream keyed by (seed, stream_id, substream).
///
/// Draw k of a stream is splitmix64(key + k * golden_gamma), so the whole
/// state is the 64-bit counter: rewinding or seeking is O(1) and replaying
/// from a saved position reproduces the sequence bit for bit. Distinct keys
/// start at unrelated points of the 2^64 cycle.
///
/// A stream is single-owner; it is cheap to copy.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t substream = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform() noexcept;
    /// Standard normal (ziggurat).
    double normal();
    /// Exponential with the given rate (ziggurat).
    double exponential(double rate);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }
    [[nodiscard]] std::uint64_t substream() const noexcept { return substream_; }

    /// Number of 64-bit words drawn so far.
    [[nodiscard]] std::uint64_t position() const noexcept { return counter_; }
    void seek(std::uint64_t position) noexcept { counter_ = position; }
    void rewind() noexcept { counter_ = 0; }

    /// A stream with the same (seed, stream_id) and a different substream key.
    [[nodiscard]] RngStream substream_stream(std::uint64_t substream) const noexcept {
        return RngStream(seed_, stream_id_, substream);
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t substream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace halfway
