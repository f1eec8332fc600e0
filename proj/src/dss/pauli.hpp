#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dss {

// Packed bit vector over 64-bit words.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    void xor_with(const BitVec& other) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    }
    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }
    // Parity of the AND with another vector.
    bool dot(const BitVec& other) const {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
        return __builtin_popcountll(acc) & 1;
    }
    bool operator==(const BitVec& other) const = default;

  private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

// n-qubit Pauli operator in the (x,z) binary representation with a phase
// i^phase_pow. Qubit t carries I/X/Z/Y for (x,z) = (0,0)/(1,0)/(0,1)/(1,1).
struct PauliOperator {
    std::size_t n = 0;
    BitVec x, z;
    std::uint8_t phase_pow = 0;  // phase = i^phase_pow

    PauliOperator() = default;
    explicit PauliOperator(std::size_t qubits) : n(qubits), x(qubits), z(qubits) {}

    static PauliOperator identity(std::size_t qubits) { return PauliOperator(qubits); }

    // Single-qubit factor from a code 0..3 = I,X,Y,Z at qubit t.
    void set_pauli(std::size_t t, int code) {
        x.set(t, code == 1 || code == 2);
        z.set(t, code == 2 || code == 3);
    }
    int pauli_at(std::size_t t) const {
        const bool xb = x.get(t), zb = z.get(t);
        return xb ? (zb ? 2 : 1) : (zb ? 3 : 0);
    }

    std::size_t weight() const {
        std::size_t c = 0;
        for (std::size_t t = 0; t < n; ++t)
            if (x.get(t) || z.get(t)) ++c;
        return c;
    }
    bool is_identity() const { return !x.any() && !z.any(); }
    bool commutes_with(const PauliOperator& other) const {
        return !(x.dot(other.z) ^ z.dot(other.x));
    }

    // Parse strings like "XIZY" or "+XIZY"/"-XIZY" (leftmost char = qubit 0).
    static PauliOperator from_string(const std::string& s);
    std::string to_string() const;
};

inline PauliOperator PauliOperator::from_string(const std::string& s) {
    std::size_t start = 0;
    std::uint8_t phase = 0;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        phase = s[0] == '-' ? 2 : 0;
        start = 1;
    }
    PauliOperator p(s.size() - start);
    p.phase_pow = phase;
    for (std::size_t i = start; i < s.size(); ++i) {
        switch (s[i]) {
            case 'I': break;
            case 'X': p.set_pauli(i - start, 1); break;
            case 'Y': p.set_pauli(i - start, 2); break;
            case 'Z': p.set_pauli(i - start, 3); break;
            default: throw std::invalid_argument("PauliOperator: bad character");
        }
    }
    return p;
}

inline std::string PauliOperator::to_string() const {
    static const char* names = "IXYZ";
    std::string s(phase_pow == 2 ? "-" : "+");
    for (std::size_t t = 0; t < n; ++t) s += names[pauli_at(t)];
    return s;
}

}  // namespace dss
