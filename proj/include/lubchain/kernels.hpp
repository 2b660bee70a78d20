#pragma once

#include <cstddef>
#include <span>

namespace lubchain::kernels {

/// Block size of the parallel scans. Fixed so that the summation order, and
/// therefore every rounded result, does not depend on the thread count.
inline constexpr std::size_t kScanBlock = 4096;

/// out[i] = in[0] + ... + in[i], OpenMP-parallel over fixed blocks.
void inclusive_scan(std::span<double const> in, std::span<double> out);

/// out[i] = in[i] + ... + in[n-1].
void inclusive_suffix_scan(std::span<double const> in, std::span<double> out);

}  // namespace lubchain::kernels
