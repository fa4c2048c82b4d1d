#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace qvmc {

using cplx = std::complex<double>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

// Tensor product of single-qubit Pauli operators. Qubit 0 is the
// least-significant bit of the amplitude index; in the string form
// ("XIZ...") the leftmost character is qubit 0.
class PauliString {
public:
    PauliString() = default;
    explicit PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {}

    static PauliString identity(std::size_t n) { return PauliString(std::vector<Pauli>(n, Pauli::I)); }
    static PauliString single(std::size_t n, std::size_t qubit, Pauli p);
    static PauliString two(std::size_t n, std::size_t q1, std::size_t q2, Pauli p);
    static PauliString from_word(const std::string& word);

    std::size_t n() const { return letters_.size(); }
    Pauli letter(std::size_t q) const { return letters_[q]; }
    const std::vector<Pauli>& letters() const { return letters_; }
    bool is_identity() const;
    std::string word() const;

    bool operator==(const PauliString& other) const { return letters_ == other.letters_; }

    // Bit masks driving the statevector kernels.
    struct Masks {
        std::uint64_t flip = 0;   // X|Y positions: columns index gets XORed
        std::uint64_t sign = 0;   // Y|Z positions: (-1)^popcount(x & sign)
        cplx y_phase = 1.0;       // i^(#Y)
    };
    Masks masks() const;

private:
    std::vector<Pauli> letters_;
};

// Product of two strings: lhs * rhs = phase * word, phase in {1, i, -1, -i}.
struct PauliProduct {
    PauliString word;
    cplx phase;
};
PauliProduct multiply(const PauliString& lhs, const PauliString& rhs);

// Real linear combination of Pauli strings (Hermitian by construction).
struct PauliTerm {
    double coeff;
    PauliString word;
};

class PauliSum {
public:
    PauliSum() = default;
    explicit PauliSum(std::size_t n) : n_(n) {}

    static PauliSum identity(std::size_t n, double coeff = 1.0);

    void add(double coeff, PauliString word);
    std::size_t n() const { return n_; }
    std::size_t size() const { return terms_.size(); }
    const PauliTerm& term(std::size_t j) const { return terms_[j]; }
    const std::vector<PauliTerm>& terms() const { return terms_; }

    // Sum of |h_j|: total interaction strength, also the one-norm C_O of the
    // measurement decomposition.
    double coeff_one_norm() const;

    PauliSum scaled(double factor) const;
    // H - shift * identity (appends/merges an identity term).
    PauliSum shifted(double shift) const;

    bool empty() const { return terms_.empty(); }

private:
    std::size_t n_ = 0;
    std::vector<PauliTerm> terms_;
};

}  // namespace qvmc
