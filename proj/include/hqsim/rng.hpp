#pragma once

#include <array>
#include <cstdint>

namespace hqsim {

// Splittable stream generator. A stream is fully determined by (seed,
// stream_id): replications can each grab their own stream with no
// coordination and the sequence is reproducible across runs and across
// worker counts. State is derived by hashing (seed, stream_id) through
// splitmix64 and then advanced with xoshiro256++.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    // uniform on [0,1), 53-bit resolution
    double next_unit();

    // uniform on (0,1]; safe to pass to log()
    double next_unit_pos() { return 1.0 - next_unit(); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::array<std::uint64_t, 4> s_;
};

} // namespace hqsim
