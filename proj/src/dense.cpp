#include "qvmc/dense.hpp"

#include <bit>

namespace qvmc {

namespace {

inline cplx mask_phase(const PauliString::Masks& m, std::uint64_t x) {
    const bool odd = std::popcount(x & m.sign) & 1;
    return odd ? -m.y_phase : m.y_phase;
}

}  // namespace

DenseMatrix dense_matrix(const PauliString& p) {
    const std::size_t dim = std::size_t{1} << p.n();
    DenseMatrix M = DenseMatrix::Zero(dim, dim);
    const auto m = p.masks();
    for (std::uint64_t x = 0; x < dim; ++x) M(x ^ m.flip, x) = mask_phase(m, x);
    return M;
}

DenseMatrix dense_matrix(const PauliSum& H) {
    const std::size_t dim = std::size_t{1} << H.n();
    DenseMatrix M = DenseMatrix::Zero(dim, dim);
    for (const auto& term : H.terms()) {
        const auto m = term.word.masks();
        for (std::uint64_t x = 0; x < dim; ++x)
            M(x ^ m.flip, x) += term.coeff * mask_phase(m, x);
    }
    return M;
}

DenseMatrix dense_expm_hermitian(const PauliSum& H, cplx scale) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(dense_matrix(H));
    const auto& V = solver.eigenvectors();
    Eigen::VectorXcd d(solver.eigenvalues().size());
    for (Eigen::Index k = 0; k < d.size(); ++k)
        d(k) = std::exp(scale * solver.eigenvalues()(k));
    return V * d.asDiagonal() * V.adjoint();
}

Eigen::VectorXcd to_eigen(const StateVec& s) {
    return Eigen::Map<const Eigen::VectorXcd>(s.amps.data(), s.amps.size());
}

StateVec from_eigen(const Eigen::VectorXcd& v, std::size_t n, bool normalized) {
    std::vector<cplx> amps(v.data(), v.data() + v.size());
    return StateVec(n, std::move(amps), normalized);
}

}  // namespace qvmc
