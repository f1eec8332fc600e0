#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dss/pauli.hpp"
#include "dss/rng.hpp"

namespace dss {

enum class Basis : std::uint8_t { Z, X };

enum class Gate : std::uint8_t { I, X, Y, Z, H, S, CNOT };

const char* gate_name(Gate g);
bool gate_is_two_qubit(Gate g);

struct MeasureResult {
    int outcome;        // 0 maps to +1, 1 maps to -1
    bool deterministic;
};

// Supplies fair coin bits for non-deterministic measurement outcomes. The
// sampler feeds an rng; the exhaustive enumerator feeds a replay tape.
using CoinSource = std::function<int()>;

CoinSource rng_coins(Rng& rng);

// Aaronson-Gottesman stabilizer tableau with destabilizer rows, so both
// measurement and membership checks run in O(n^2) bit operations.
class StabilizerState {
  public:
    // State |0...0> on n qubits (stabilized by Z_i for every i).
    explicit StabilizerState(std::size_t n);

    std::size_t num_qubits() const { return n_; }

    void apply_gate(Gate g, std::uint32_t a);                    // single-qubit
    void apply_gate(Gate g, std::uint32_t a, std::uint32_t b);   // CNOT
    void apply_pauli(const PauliOperator& p);

    MeasureResult measure(std::uint32_t qubit, Basis basis, const CoinSource& coin);
    // Re-prepare `qubit` in the +1 basis state (|0> or |+>). Consumes no coins.
    void reset(std::uint32_t qubit, Basis basis);

    // True iff p is an element of the stabilizer group with matching sign.
    bool is_stabilized_by(const PauliOperator& p) const;

    PauliOperator stabilizer_row(std::size_t i) const;    // i in [0, n)
    PauliOperator destabilizer_row(std::size_t i) const;  // i in [0, n)

    // Rank of the combined (x|z) generator matrix; n means rows independent.
    std::size_t stabilizer_rank() const;

  private:
    struct Row {
        BitVec x, z;
        bool r = false;  // sign bit: true means -1
    };

    void row_mult(Row& h, const Row& i) const;  // h *= i with phase tracking
    MeasureResult measure_z(std::uint32_t qubit, const CoinSource& coin);
    PauliOperator row_to_pauli(const Row& row) const;

    std::size_t n_;
    std::vector<Row> rows_;  // [0,n) destabilizers, [n,2n) stabilizers
};

}  // namespace dss
