#include "qvmc/series.hpp"

#include <cmath>
#include <stdexcept>

#include "qvmc/dense.hpp"

namespace qvmc {

SortedProductDecomposition sorted_product_decomposition(const std::vector<int>& l,
                                                        const PauliSum& H) {
    const int n_h = static_cast<int>(H.size());
    if (n_h == 0) throw std::invalid_argument("sorted_product_decomposition: empty sum");
    for (int idx : l)
        if (idx < 1 || idx > n_h)
            throw std::invalid_argument("sorted_product_decomposition: index out of range");

    SortedProductDecomposition out;
    out.m.assign(n_h, 0);
    for (int idx : l) ++out.m[idx - 1];

    // S = sigma_{l_k} ... sigma_{l_1}: left-multiply in tuple order.
    PauliString s_word = PauliString::identity(H.n());
    cplx s_phase = 1.0;
    for (int idx : l) {
        const auto prod = multiply(H.term(idx - 1).word, s_word);
        s_word = prod.word;
        s_phase *= prod.phase;
    }

    // T = sigma_{N_H}^{m_N} ... sigma_1^{m_1}: same multiset, sorted ascending
    // from the right, i.e. left-multiply in ascending index order.
    PauliString t_word = PauliString::identity(H.n());
    cplx t_phase = 1.0;
    for (int j = 0; j < n_h; ++j)
        for (int c = 0; c < out.m[j]; ++c) {
            const auto prod = multiply(H.term(j).word, t_word);
            t_word = prod.word;
            t_phase *= prod.phase;
        }

    if (!(s_word == t_word))
        throw std::logic_error("sorted_product_decomposition: reduced words differ");
    const cplx ratio = s_phase / t_phase;
    if (std::abs(ratio.imag()) > 1e-12)
        throw std::logic_error("sorted_product_decomposition: non-real reordering phase");
    out.sign = ratio.real() > 0 ? 1 : -1;
    out.word = std::move(t_word);
    out.word_phase = t_phase;
    return out;
}

namespace {

// R(omega) = exp(-i sigma_{N_H} omega_{N_H}) ... exp(-i sigma_1 omega_1)
// as a dense matrix (sigma_1 applied first).
DenseMatrix rotation_product(const PauliSum& H, const std::vector<double>& omega) {
    const std::size_t dim = std::size_t{1} << H.n();
    DenseMatrix R = DenseMatrix::Identity(dim, dim);
    for (std::size_t j = 0; j < H.size(); ++j) {
        const DenseMatrix P = dense_matrix(H.term(j).word);
        const DenseMatrix E = std::cos(omega[j]) * DenseMatrix::Identity(dim, dim) -
                              cplx(0.0, std::sin(omega[j])) * P;
        R = E * R;
    }
    return R;
}

void next_tuple(std::vector<int>& l, int n_h, bool& done) {
    for (std::size_t pos = 0; pos < l.size(); ++pos) {
        if (l[pos] < n_h) {
            ++l[pos];
            for (std::size_t q = 0; q < pos; ++q) l[q] = 1;
            return;
        }
    }
    done = true;
}

}  // namespace

double evolution_series_residual(const PauliSum& H, double t, int k_max) {
    if (H.n() > 3 || H.size() > 3)
        throw std::invalid_argument("evolution_series_residual: system too large");
    if (k_max < 2) throw std::invalid_argument("evolution_series_residual: k_max must be >= 2");

    const std::size_t dim = std::size_t{1} << H.n();
    const int n_h = static_cast<int>(H.size());

    // Backbone: the product circuit at omega_j = h_j t.
    std::vector<double> omega0(n_h);
    for (int j = 0; j < n_h; ++j) omega0[j] = H.term(j).coeff * t;
    DenseMatrix sum = rotation_product(H, omega0);

    // Correction terms: tuples l of length 2..k_max; coefficient
    // prod_q(-i h_{l_q} t) / k! * (sign - 1) * i^k, supported at
    // omega_j = m_j pi/2.
    static const cplx i_unit(0.0, 1.0);
    double factorial = 1.0;
    for (int k = 2; k <= k_max; ++k) {
        factorial *= (k == 2) ? 2.0 : static_cast<double>(k);
        std::vector<int> l(k, 1);
        bool done = false;
        while (!done) {
            const auto dec = sorted_product_decomposition(l, H);
            if (dec.sign != 1) {
                cplx coeff = 1.0;
                for (int idx : l) coeff *= -i_unit * H.term(idx - 1).coeff * t;
                coeff /= factorial;
                coeff *= static_cast<double>(dec.sign - 1);
                coeff *= std::pow(i_unit, k);
                std::vector<double> omega(n_h);
                for (int j = 0; j < n_h; ++j) omega[j] = dec.m[j] * M_PI / 2.0;
                sum += coeff * rotation_product(H, omega);
            }
            next_tuple(l, n_h, done);
        }
    }

    const DenseMatrix target = dense_expm_hermitian(H, cplx(0.0, -t));
    const DenseMatrix diff = sum - target;
    Eigen::JacobiSVD<DenseMatrix> svd(diff);
    return dim == 0 ? 0.0 : svd.singularValues()(0);
}

}  // namespace qvmc
