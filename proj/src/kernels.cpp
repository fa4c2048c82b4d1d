#include "qvmc/kernels.hpp"

#include <bit>

#include "qvmc/parallel.hpp"

namespace qvmc::kern {

namespace {

// P|x> = phase(x) |x ^ flip>, phase(x) = i^(#Y) * (-1)^popcount(x & sign).
inline cplx pauli_phase(const Masks& m, std::uint64_t x) {
    const bool odd = std::popcount(x & m.sign) & 1;
    return odd ? -m.y_phase : m.y_phase;
}

// Element loops below are written gather-style (each output index touched by
// exactly one iteration), so serial and parallel versions agree bitwise.

inline void apply_pauli_loop(const Masks& m, const cplx* in, cplx* out, std::size_t dim,
                             bool parallel) {
#pragma omp parallel for schedule(static) if (parallel)
    for (long long y = 0; y < static_cast<long long>(dim); ++y) {
        const std::uint64_t x = static_cast<std::uint64_t>(y) ^ m.flip;
        out[y] = pauli_phase(m, x) * in[x];
    }
}

inline void apply_exp_loop(const Masks& m, double angle, const cplx* in, cplx* out,
                           std::size_t dim, bool parallel) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const cplx minus_i_sin(0.0, -s);
#pragma omp parallel for schedule(static) if (parallel)
    for (long long y = 0; y < static_cast<long long>(dim); ++y) {
        const std::uint64_t x = static_cast<std::uint64_t>(y) ^ m.flip;
        out[y] = c * in[y] + minus_i_sin * (pauli_phase(m, x) * in[x]);
    }
}

constexpr std::size_t kParallelDim = 1u << 12;  // below this, threading costs more than it saves

}  // namespace

namespace serial {

void apply_pauli(const Masks& m, const cplx* in, cplx* out, std::size_t dim) {
    apply_pauli_loop(m, in, out, dim, false);
}

void apply_exp_pauli(const Masks& m, double angle, const cplx* in, cplx* out, std::size_t dim) {
    apply_exp_loop(m, angle, in, out, dim, false);
}

cplx inner(const cplx* a, const cplx* b, std::size_t dim) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

cplx pauli_bilinear(const cplx* a, const Masks& m, const cplx* b, std::size_t dim) {
    cplx acc = 0.0;
    for (std::size_t x = 0; x < dim; ++x)
        acc += std::conj(a[x ^ m.flip]) * (pauli_phase(m, x) * b[x]);
    return acc;
}

}  // namespace serial

void apply_pauli(const Masks& m, const cplx* in, cplx* out, std::size_t dim) {
    apply_pauli_loop(m, in, out, dim, dim >= kParallelDim && par::worker_count() > 1);
}

void apply_exp_pauli(const Masks& m, double angle, const cplx* in, cplx* out, std::size_t dim) {
    apply_exp_loop(m, angle, in, out, dim, dim >= kParallelDim && par::worker_count() > 1);
}

cplx inner(const cplx* a, const cplx* b, std::size_t dim) {
    return par::block_sum<cplx>(dim, [&](std::size_t i) { return std::conj(a[i]) * b[i]; });
}

cplx pauli_bilinear(const cplx* a, const Masks& m, const cplx* b, std::size_t dim) {
    return par::block_sum<cplx>(dim, [&](std::size_t x) {
        return std::conj(a[x ^ m.flip]) * (pauli_phase(m, x) * b[x]);
    });
}

}  // namespace qvmc::kern
