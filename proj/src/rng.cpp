// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file rng.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/rng.hpp"

#include <cmath>
#include <numbers>

namespace hk::mc
{
namespace
{
constexpr std::uint32_t philox_m0 = 0xD2511F53u;
constexpr std::uint32_t philox_m1 = 0xCD9E8D57u;
constexpr std::uint32_t philox_w0 = 0x9E3779B9u;
constexpr std::uint32_t philox_w1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo)
{
    std::uint64_t p = std::uint64_t(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}
}  // namespace

std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::array<std::uint32_t, 4>
PathRng::philox(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k)
{
    for (int round = 0; round < 10; ++round)
    {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(philox_m0, c[0], hi0, lo0);
        mulhilo(philox_m1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += philox_w0;
        k[1] += philox_w1;
    }
    return c;
}

PathRng::PathRng(std::uint64_t seed, std::uint64_t path)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)}
    , path_(path)
{
}

std::uint64_t PathRng::next_u64()
{
    if (avail_ < 2)
    {
        buf_ = philox({static_cast<std::uint32_t>(draw_),
                       static_cast<std::uint32_t>(draw_ >> 32),
                       static_cast<std::uint32_t>(path_),
                       static_cast<std::uint32_t>(path_ >> 32)},
                      key_);
        ++draw_;
        avail_ = 4;
    }
    std::uint64_t r = (std::uint64_t(buf_[4 - avail_]) << 32)
                      | buf_[5 - avail_];
    avail_ -= 2;
    return r;
}

double PathRng::uniform()
{
    return (double(this->next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double PathRng::normal()
{
    if (has_spare_)
    {
        has_spare_ = false;
        return spare_;
    }
    double u1 = this->uniform();
    double u2 = this->uniform();
    double r = std::sqrt(-2 * std::log(u1));
    double th = 2 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
}

}  // namespace hk::mc
