#include "qvmc/pauli.hpp"

#include <cmath>
#include <stdexcept>

namespace qvmc {

PauliString PauliString::single(std::size_t n, std::size_t qubit, Pauli p) {
    if (qubit >= n) throw std::invalid_argument("PauliString: qubit index out of range");
    std::vector<Pauli> letters(n, Pauli::I);
    letters[qubit] = p;
    return PauliString(std::move(letters));
}

PauliString PauliString::two(std::size_t n, std::size_t q1, std::size_t q2, Pauli p) {
    if (q1 >= n || q2 >= n || q1 == q2) throw std::invalid_argument("PauliString: bad qubit pair");
    std::vector<Pauli> letters(n, Pauli::I);
    letters[q1] = p;
    letters[q2] = p;
    return PauliString(std::move(letters));
}

PauliString PauliString::from_word(const std::string& word) {
    std::vector<Pauli> letters;
    letters.reserve(word.size());
    for (char c : word) {
        switch (c) {
            case 'I': letters.push_back(Pauli::I); break;
            case 'X': letters.push_back(Pauli::X); break;
            case 'Y': letters.push_back(Pauli::Y); break;
            case 'Z': letters.push_back(Pauli::Z); break;
            default: throw std::invalid_argument("PauliString: bad letter in word");
        }
    }
    return PauliString(std::move(letters));
}

bool PauliString::is_identity() const {
    for (Pauli p : letters_)
        if (p != Pauli::I) return false;
    return true;
}

std::string PauliString::word() const {
    static const char symbol[4] = {'I', 'X', 'Y', 'Z'};
    std::string out;
    out.reserve(letters_.size());
    for (Pauli p : letters_) out.push_back(symbol[static_cast<int>(p)]);
    return out;
}

PauliString::Masks PauliString::masks() const {
    if (n() > 62) throw std::invalid_argument("PauliString: qubit count exceeds mask width");
    Masks m;
    int ny = 0;
    for (std::size_t q = 0; q < letters_.size(); ++q) {
        const std::uint64_t bit = 1ULL << q;
        switch (letters_[q]) {
            case Pauli::I: break;
            case Pauli::X: m.flip |= bit; break;
            case Pauli::Y:
                m.flip |= bit;
                m.sign |= bit;
                ++ny;
                break;
            case Pauli::Z: m.sign |= bit; break;
        }
    }
    static const cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    m.y_phase = i_pow[ny & 3];
    return m;
}

namespace {

// sigma_a * sigma_b = i^phase_pow(a,b) * sigma_result(a,b), single qubit.
// Cyclic order X->Y->Z->X gives +i, reversed gives -i.
struct SingleProduct {
    Pauli result;
    int phase_pow;  // exponent of i, in {0, 1, 3}
};

SingleProduct mul1(Pauli a, Pauli b) {
    if (a == Pauli::I) return {b, 0};
    if (b == Pauli::I) return {a, 0};
    if (a == b) return {Pauli::I, 0};
    const int ia = static_cast<int>(a), ib = static_cast<int>(b);
    // Remaining letter: indices {1,2,3} sum to 6.
    const Pauli c = static_cast<Pauli>(6 - ia - ib);
    // Cyclic (X,Y), (Y,Z), (Z,X) -> +i.
    const bool cyclic = (ib - ia + 3) % 3 == 1;
    return {c, cyclic ? 1 : 3};
}

}  // namespace

PauliProduct multiply(const PauliString& lhs, const PauliString& rhs) {
    if (lhs.n() != rhs.n()) throw std::invalid_argument("PauliString product: size mismatch");
    std::vector<Pauli> letters(lhs.n());
    int pow = 0;
    for (std::size_t q = 0; q < lhs.n(); ++q) {
        const SingleProduct sp = mul1(lhs.letter(q), rhs.letter(q));
        letters[q] = sp.result;
        pow += sp.phase_pow;
    }
    static const cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return {PauliString(std::move(letters)), i_pow[pow & 3]};
}

PauliSum PauliSum::identity(std::size_t n, double coeff) {
    PauliSum s(n);
    s.add(coeff, PauliString::identity(n));
    return s;
}

void PauliSum::add(double coeff, PauliString word) {
    if (word.n() != n_) throw std::invalid_argument("PauliSum: word size mismatch");
    terms_.push_back({coeff, std::move(word)});
}

double PauliSum::coeff_one_norm() const {
    double tot = 0.0;
    for (const auto& t : terms_) tot += std::abs(t.coeff);
    return tot;
}

PauliSum PauliSum::scaled(double factor) const {
    PauliSum out(n_);
    for (const auto& t : terms_) out.add(t.coeff * factor, t.word);
    return out;
}

PauliSum PauliSum::shifted(double shift) const {
    PauliSum out(n_);
    bool merged = false;
    for (const auto& t : terms_) {
        if (!merged && t.word.is_identity()) {
            out.add(t.coeff - shift, t.word);
            merged = true;
        } else {
            out.add(t.coeff, t.word);
        }
    }
    if (!merged) out.add(-shift, PauliString::identity(n_));
    return out;
}

}  // namespace qvmc
