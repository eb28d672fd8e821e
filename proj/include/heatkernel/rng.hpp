// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/rng.hpp
//! Counter-based Philox4x32-10 stream keyed by (seed, path).
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstdint>

namespace hk::mc
{
//---------------------------------------------------------------------------//
/*!
 * Random stream for a single path.
 *
 * The 128-bit counter holds the path index in its upper half and the draw
 * index in its lower half, so every (seed, path, draw) triple maps to a
 * fixed output independent of scheduling.
 */
class PathRng
{
  public:
    using result_type = std::uint64_t;

    PathRng(std::uint64_t seed, std::uint64_t path);

    std::uint64_t next_u64();
    //! Uniform on the open interval (0, 1)
    double uniform();
    double normal();

    static std::array<std::uint32_t, 4>
    philox(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

  private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t path_;
    std::uint64_t draw_{0};
    std::array<std::uint32_t, 4> buf_{};
    int avail_{0};
    double spare_{0};
    bool has_spare_{false};
};

//! SplitMix64 finalizer, used to derive sub-seeds
std::uint64_t mix64(std::uint64_t z);

}  // namespace hk::mc
