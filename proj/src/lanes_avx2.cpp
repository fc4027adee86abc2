#include "mppsoc/lanes.hpp"

#if defined(MPPSOC_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <bit>

namespace mppsoc::lanes {

namespace {

inline __m256i load8(const std::uint32_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline __m256i load8(const std::int32_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline void store8(std::uint32_t* p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }

void fill_masked_avx2(std::span<std::uint32_t> dst, std::uint32_t value, std::span<const std::uint32_t> mask)
{
    const __m256i v = _mm256_set1_epi32(static_cast<int>(value));
    std::size_t i = 0;
    for (; i + 8 <= dst.size(); i += 8)
        store8(&dst[i], _mm256_blendv_epi8(load8(&dst[i]), v, load8(&mask[i])));
    for (; i < dst.size(); ++i)
        dst[i] = (value & mask[i]) | (dst[i] & ~mask[i]);
}

void add_masked_avx2(std::span<std::uint32_t> dst, std::span<const std::uint32_t> a,
                     std::span<const std::uint32_t> b, std::span<const std::uint32_t> mask)
{
    std::size_t i = 0;
    for (; i + 8 <= dst.size(); i += 8) {
        const __m256i sum = _mm256_add_epi32(load8(&a[i]), load8(&b[i]));
        store8(&dst[i], _mm256_blendv_epi8(load8(&dst[i]), sum, load8(&mask[i])));
    }
    for (; i < dst.size(); ++i) {
        const std::uint32_t sum = a[i] + b[i];
        dst[i] = (sum & mask[i]) | (dst[i] & ~mask[i]);
    }
}

void select_masked_avx2(std::span<std::uint32_t> dst, std::span<const std::uint32_t> src,
                        std::span<const std::uint32_t> mask)
{
    std::size_t i = 0;
    for (; i + 8 <= dst.size(); i += 8)
        store8(&dst[i], _mm256_blendv_epi8(load8(&dst[i]), load8(&src[i]), load8(&mask[i])));
    for (; i < dst.size(); ++i)
        dst[i] = (src[i] & mask[i]) | (dst[i] & ~mask[i]);
}

void accumulate_masked_i64_avx2(std::span<std::int64_t> dst, std::span<const std::int64_t> src,
                                std::span<const std::uint32_t> mask)
{
    std::size_t i = 0;
    for (; i + 4 <= dst.size(); i += 4) {
        auto* d = reinterpret_cast<__m256i*>(&dst[i]);
        const __m256i m = _mm256_cvtepi32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(&mask[i])));
        const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&src[i]));
        const __m256i cur = _mm256_loadu_si256(d);
        _mm256_storeu_si256(d, _mm256_add_epi64(cur, _mm256_and_si256(s, m)));
    }
    for (; i < dst.size(); ++i)
        if (mask[i] != 0)
            dst[i] = static_cast<std::int64_t>(static_cast<std::uint64_t>(dst[i]) + static_cast<std::uint64_t>(src[i]));
}

void compare_avx2(std::span<std::uint32_t> mask, std::span<const std::int32_t> keys, Compare op,
                  std::int32_t value)
{
    const __m256i v = _mm256_set1_epi32(value);
    const __m256i ones = _mm256_set1_epi32(-1);
    std::size_t i = 0;
    for (; i + 8 <= mask.size(); i += 8) {
        const __m256i k = load8(&keys[i]);
        __m256i r;
        switch (op) {
        case Compare::Eq: r = _mm256_cmpeq_epi32(k, v); break;
        case Compare::Ne: r = _mm256_xor_si256(_mm256_cmpeq_epi32(k, v), ones); break;
        case Compare::Lt: r = _mm256_cmpgt_epi32(v, k); break;
        case Compare::Le: r = _mm256_xor_si256(_mm256_cmpgt_epi32(k, v), ones); break;
        case Compare::Gt: r = _mm256_cmpgt_epi32(k, v); break;
        case Compare::Ge: r = _mm256_xor_si256(_mm256_cmpgt_epi32(v, k), ones); break;
        default: r = _mm256_setzero_si256(); break;
        }
        store8(&mask[i], r);
    }
    if (i < mask.size())
        scalar_kernels().compare(mask.subspan(i), keys.subspan(i), op, value);
}

std::size_t count_active_avx2(std::span<const std::uint32_t> mask)
{
    std::size_t n = 0;
    std::size_t i = 0;
    for (; i + 8 <= mask.size(); i += 8) {
        const int bits = _mm256_movemask_ps(_mm256_castsi256_ps(load8(&mask[i])));
        n += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(bits)));
    }
    for (; i < mask.size(); ++i)
        n += mask[i] != 0 ? 1 : 0;
    return n;
}

} // namespace

const Kernels* avx2_kernels()
{
    static const Kernels k{"avx2",
                           fill_masked_avx2,
                           add_masked_avx2,
                           select_masked_avx2,
                           accumulate_masked_i64_avx2,
                           compare_avx2,
                           count_active_avx2};
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &k : nullptr;
}

} // namespace mppsoc::lanes

#else

namespace mppsoc::lanes {

const Kernels* avx2_kernels() { return nullptr; }

} // namespace mppsoc::lanes

#endif
