#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qvmc::par {

// Worker count resolved once from the QVMC_WORKERS environment variable
// (falls back to the OpenMP default). Call apply() early in main() to make
// it effective; library code only reads it for dispatch decisions.
int worker_count();
void apply();

// Fixed number of partial-sum blocks used by every parallel reduction.
// Reductions accumulate per-block partials (each block summed serially in
// index order) and then combine the partials serially, so the result is
// bit-identical no matter how many threads execute the blocks.
inline constexpr std::size_t kReduceBlocks = 64;

struct Block {
    std::size_t begin;
    std::size_t end;
};

// Splits [0, n) into at most kReduceBlocks contiguous blocks of near-equal
// size. The partition depends only on n.
std::vector<Block> fixed_blocks(std::size_t n);

// Deterministic parallel sum of f(i) over [0, n). F: size_t -> T.
template <typename T, typename F>
T block_sum(std::size_t n, F&& f) {
    const auto blocks = fixed_blocks(n);
    std::vector<T> partial(blocks.size(), T{});
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < static_cast<long long>(blocks.size()); ++b) {
        T acc{};
        for (std::size_t i = blocks[b].begin; i < blocks[b].end; ++i) acc += f(i);
        partial[b] = acc;
    }
    T total{};
    for (const T& p : partial) total += p;
    return total;
}

}  // namespace qvmc::par
