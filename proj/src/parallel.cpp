#include "qvmc/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace qvmc::par {

namespace {

int resolve_worker_count() {
    if (const char* env = std::getenv("QVMC_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (...) {
            // fall through to the OpenMP default on unparseable input
        }
    }
    return omp_get_max_threads();
}

}  // namespace

int worker_count() {
    static const int n = resolve_worker_count();
    return n;
}

void apply() { omp_set_num_threads(worker_count()); }

std::vector<Block> fixed_blocks(std::size_t n) {
    std::vector<Block> blocks;
    if (n == 0) return blocks;
    const std::size_t nb = n < kReduceBlocks ? n : kReduceBlocks;
    blocks.reserve(nb);
    const std::size_t base = n / nb;
    const std::size_t rem = n % nb;
    std::size_t cursor = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t len = base + (b < rem ? 1 : 0);
        blocks.push_back({cursor, cursor + len});
        cursor += len;
    }
    return blocks;
}

}  // namespace qvmc::par
