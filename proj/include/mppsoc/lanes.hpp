#pragma once

// Lane kernels behind the simulator's lock-step PE array. Every PE is one
// lane; a mask lane is 0 (inactive) or 0xFFFFFFFF (active). The scalar
// kernels are the reference; the AVX2 kernels must match them bit for bit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace mppsoc::lanes {

inline constexpr std::uint32_t kActive = 0xFFFFFFFFu;

enum class Compare { Eq, Ne, Lt, Le, Gt, Ge };

struct Kernels {
    std::string_view name;
    // dst[i] = value where active
    void (*fill_masked)(std::span<std::uint32_t> dst, std::uint32_t value,
                        std::span<const std::uint32_t> mask);
    // dst[i] = a[i] + b[i] (mod 2^32) where active
    void (*add_masked)(std::span<std::uint32_t> dst, std::span<const std::uint32_t> a,
                       std::span<const std::uint32_t> b, std::span<const std::uint32_t> mask);
    // dst[i] = src[i] where active
    void (*select_masked)(std::span<std::uint32_t> dst, std::span<const std::uint32_t> src,
                          std::span<const std::uint32_t> mask);
    // dst[i] += src[i] where active
    void (*accumulate_masked_i64)(std::span<std::int64_t> dst, std::span<const std::int64_t> src,
                                  std::span<const std::uint32_t> mask);
    // mask[i] = (keys[i] op value) ? kActive : 0
    void (*compare)(std::span<std::uint32_t> mask, std::span<const std::int32_t> keys, Compare op,
                    std::int32_t value);
    std::size_t (*count_active)(std::span<const std::uint32_t> mask);
};

const Kernels& scalar_kernels();

// nullptr when the AVX2 kernels are not built in or the CPU lacks AVX2.
const Kernels* avx2_kernels();

// Chosen once per process: AVX2 when available unless the environment sets
// MPPSOC_SIMD=scalar.
const Kernels& active_kernels();

// Size-checked entry points dispatching to active_kernels().
void fill_masked(std::span<std::uint32_t> dst, std::uint32_t value, std::span<const std::uint32_t> mask);
void add_masked(std::span<std::uint32_t> dst, std::span<const std::uint32_t> a,
                std::span<const std::uint32_t> b, std::span<const std::uint32_t> mask);
void select_masked(std::span<std::uint32_t> dst, std::span<const std::uint32_t> src,
                   std::span<const std::uint32_t> mask);
void accumulate_masked_i64(std::span<std::int64_t> dst, std::span<const std::int64_t> src,
                           std::span<const std::uint32_t> mask);
void compare(std::span<std::uint32_t> mask, std::span<const std::int32_t> keys, Compare op, std::int32_t value);
std::size_t count_active(std::span<const std::uint32_t> mask);

} // namespace mppsoc::lanes
