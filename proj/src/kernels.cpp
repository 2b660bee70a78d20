#include "lubchain/kernels.hpp"

#include <algorithm>
#include <vector>

namespace lubchain::kernels {

void inclusive_scan(std::span<double const> in, std::span<double> out)
{
    std::size_t const n = in.size();
    std::size_t const blocks = (n + kScanBlock - 1) / kScanBlock;
    std::vector<double> block_sum(blocks, 0.0);

    // Local scans; block b's partial sums start from zero.
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < blocks; ++b)
    {
        std::size_t const lo = b * kScanBlock;
        std::size_t const hi = std::min(n, lo + kScanBlock);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
        {
            acc += in[i];
            out[i] = acc;
        }
        block_sum[b] = acc;
    }

    std::vector<double> offset(blocks, 0.0);
    for (std::size_t b = 1; b < blocks; ++b)
        offset[b] = offset[b - 1] + block_sum[b - 1];

#pragma omp parallel for schedule(static)
    for (std::size_t b = 1; b < blocks; ++b)
    {
        std::size_t const lo = b * kScanBlock;
        std::size_t const hi = std::min(n, lo + kScanBlock);
        for (std::size_t i = lo; i < hi; ++i)
            out[i] += offset[b];
    }
}

void inclusive_suffix_scan(std::span<double const> in, std::span<double> out)
{
    std::size_t const n = in.size();
    std::vector<double> reversed(in.rbegin(), in.rend());
    std::vector<double> scanned(n);
    inclusive_scan(reversed, scanned);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = scanned[n - 1 - i];
}

}  // namespace lubchain::kernels
