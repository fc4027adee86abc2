#include "mppsoc/lanes.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace mppsoc::lanes {

namespace {

const Kernels& select_kernels()
{
    const char* env = std::getenv("MPPSOC_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar")
        return scalar_kernels();
    if (const Kernels* k = avx2_kernels())
        return *k;
    return scalar_kernels();
}

void require_same(std::size_t a, std::size_t b)
{
    if (a != b)
        throw std::invalid_argument("lane spans differ in length");
}

} // namespace

const Kernels& active_kernels()
{
    static const Kernels& k = select_kernels();
    return k;
}

void fill_masked(std::span<std::uint32_t> dst, std::uint32_t value, std::span<const std::uint32_t> mask)
{
    require_same(dst.size(), mask.size());
    active_kernels().fill_masked(dst, value, mask);
}

void add_masked(std::span<std::uint32_t> dst, std::span<const std::uint32_t> a,
                std::span<const std::uint32_t> b, std::span<const std::uint32_t> mask)
{
    require_same(dst.size(), a.size());
    require_same(dst.size(), b.size());
    require_same(dst.size(), mask.size());
    active_kernels().add_masked(dst, a, b, mask);
}

void select_masked(std::span<std::uint32_t> dst, std::span<const std::uint32_t> src,
                   std::span<const std::uint32_t> mask)
{
    require_same(dst.size(), src.size());
    require_same(dst.size(), mask.size());
    active_kernels().select_masked(dst, src, mask);
}

void accumulate_masked_i64(std::span<std::int64_t> dst, std::span<const std::int64_t> src,
                           std::span<const std::uint32_t> mask)
{
    require_same(dst.size(), src.size());
    require_same(dst.size(), mask.size());
    active_kernels().accumulate_masked_i64(dst, src, mask);
}

void compare(std::span<std::uint32_t> mask, std::span<const std::int32_t> keys, Compare op, std::int32_t value)
{
    require_same(mask.size(), keys.size());
    active_kernels().compare(mask, keys, op, value);
}

std::size_t count_active(std::span<const std::uint32_t> mask)
{
    return active_kernels().count_active(mask);
}

} // namespace mppsoc::lanes
