#include "mppsoc/lanes.hpp"

namespace mppsoc::lanes {

namespace {

void fill_masked_scalar(std::span<std::uint32_t> dst, std::uint32_t value, std::span<const std::uint32_t> mask)
{
    for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] = (value & mask[i]) | (dst[i] & ~mask[i]);
}

void add_masked_scalar(std::span<std::uint32_t> dst, std::span<const std::uint32_t> a,
                       std::span<const std::uint32_t> b, std::span<const std::uint32_t> mask)
{
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const std::uint32_t sum = a[i] + b[i];
        dst[i] = (sum & mask[i]) | (dst[i] & ~mask[i]);
    }
}

void select_masked_scalar(std::span<std::uint32_t> dst, std::span<const std::uint32_t> src,
                          std::span<const std::uint32_t> mask)
{
    for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] = (src[i] & mask[i]) | (dst[i] & ~mask[i]);
}

void accumulate_masked_i64_scalar(std::span<std::int64_t> dst, std::span<const std::int64_t> src,
                                  std::span<const std::uint32_t> mask)
{
    for (std::size_t i = 0; i < dst.size(); ++i)
        if (mask[i] != 0)
            dst[i] = static_cast<std::int64_t>(static_cast<std::uint64_t>(dst[i]) + static_cast<std::uint64_t>(src[i]));
}

void compare_scalar(std::span<std::uint32_t> mask, std::span<const std::int32_t> keys, Compare op,
                    std::int32_t value)
{
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const std::int32_t k = keys[i];
        bool hit = false;
        switch (op) {
        case Compare::Eq: hit = k == value; break;
        case Compare::Ne: hit = k != value; break;
        case Compare::Lt: hit = k < value; break;
        case Compare::Le: hit = k <= value; break;
        case Compare::Gt: hit = k > value; break;
        case Compare::Ge: hit = k >= value; break;
        }
        mask[i] = hit ? kActive : 0u;
    }
}

std::size_t count_active_scalar(std::span<const std::uint32_t> mask)
{
    std::size_t n = 0;
    for (const std::uint32_t m : mask)
        n += m != 0 ? 1 : 0;
    return n;
}

} // namespace

const Kernels& scalar_kernels()
{
    static const Kernels k{"scalar",
                           fill_masked_scalar,
                           add_masked_scalar,
                           select_masked_scalar,
                           accumulate_masked_i64_scalar,
                           compare_scalar,
                           count_active_scalar};
    return k;
}

} // namespace mppsoc::lanes
