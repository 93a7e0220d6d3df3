// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/rng.hpp
//! Counter-based random streams (Philox4x32-10).
#pragma once

#include <array>
#include <cstdint>

namespace htrmt {

//! Tags that separate substreams drawn from the same seed.
enum class StreamPurpose : std::uint32_t {
    Replica = 1,
    Mask = 2,
    Oracle = 3,
    Test = 4,
};

//---------------------------------------------------------------------------//
/*!
 * A Philox4x32-10 stream.
 *
 * The key is derived from (seed, purpose) and the upper 64 counter bits carry
 * the stream index, so every (seed, index, purpose) triple owns a disjoint
 * block of the counter space. Results therefore depend only on those three
 * values and never on which thread runs a replica.
 *
 * A stream is a value type; copying it forks an identical sequence. A single
 * instance must not be shared by concurrent callers.
 */
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t index,
              StreamPurpose purpose = StreamPurpose::Replica);

    static RngStream derive(std::uint64_t seed, std::uint64_t index,
                            StreamPurpose purpose)
    {
        return RngStream(seed, index, purpose);
    }

    std::uint64_t next_u64();

    //! Uniform on the open interval (0, 1); zero is rejected and redrawn.
    double uniform_open();

    //! Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

    bool bernoulli(double p) { return uniform_open() < p; }

    double normal();

    //! Unit-rate exponential.
    double exponential();

  private:
    using Block = std::array<std::uint32_t, 4>;

    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t block_{0};
    std::uint64_t index_;
    Block buffer_{};
    int used_{4};
    bool has_spare_normal_{false};
    double spare_normal_{0.0};
};

//! Splitmix64 finalizer, exposed for seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

//! Raw Philox4x32-10 bijection (known-answer testable).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

}  // namespace htrmt
