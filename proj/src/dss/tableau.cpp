#include "dss/tableau.hpp"

#include <stdexcept>

namespace dss {

const char* gate_name(Gate g) {
    switch (g) {
        case Gate::I: return "I";
        case Gate::X: return "X";
        case Gate::Y: return "Y";
        case Gate::Z: return "Z";
        case Gate::H: return "H";
        case Gate::S: return "S";
        case Gate::CNOT: return "CNOT";
    }
    return "?";
}

bool gate_is_two_qubit(Gate g) { return g == Gate::CNOT; }

CoinSource rng_coins(Rng& rng) {
    return [&rng]() { return coin_flip(rng); };
}

StabilizerState::StabilizerState(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("StabilizerState: need at least one qubit");
    rows_.resize(2 * n, Row{BitVec(n), BitVec(n), false});
    for (std::size_t i = 0; i < n; ++i) {
        rows_[i].x.set(i, true);       // destabilizer X_i
        rows_[n + i].z.set(i, true);   // stabilizer Z_i
    }
}

// Phase exponent contributed by multiplying the single-qubit Pauli (x1,z1)
// onto (x2,z2); the usual g function of the CHP algorithm.
static int phase_g(bool x1, bool z1, bool x2, bool z2) {
    if (!x1 && !z1) return 0;
    if (x1 && z1) return static_cast<int>(z2) - static_cast<int>(x2);
    if (x1) return static_cast<int>(z2) * (2 * static_cast<int>(x2) - 1);
    return static_cast<int>(x2) * (1 - 2 * static_cast<int>(z2));
}

void StabilizerState::row_mult(Row& h, const Row& i) const {
    int phase = 2 * static_cast<int>(h.r) + 2 * static_cast<int>(i.r);
    for (std::size_t t = 0; t < n_; ++t)
        phase += phase_g(i.x.get(t), i.z.get(t), h.x.get(t), h.z.get(t));
    phase &= 3;
    h.r = phase == 2;  // products of commuting generator rows stay Hermitian
    h.x.xor_with(i.x);
    h.z.xor_with(i.z);
}

void StabilizerState::apply_gate(Gate g, std::uint32_t a) {
    if (a >= n_) throw std::out_of_range("apply_gate: qubit index");
    switch (g) {
        case Gate::I: return;
        case Gate::X:
            for (auto& row : rows_) row.r ^= row.z.get(a);
            return;
        case Gate::Y:
            for (auto& row : rows_) row.r ^= row.x.get(a) ^ row.z.get(a);
            return;
        case Gate::Z:
            for (auto& row : rows_) row.r ^= row.x.get(a);
            return;
        case Gate::H:
            for (auto& row : rows_) {
                const bool x = row.x.get(a), z = row.z.get(a);
                row.r ^= x && z;
                row.x.set(a, z);
                row.z.set(a, x);
            }
            return;
        case Gate::S:
            for (auto& row : rows_) {
                const bool x = row.x.get(a), z = row.z.get(a);
                row.r ^= x && z;
                row.z.set(a, x ^ z);
            }
            return;
        case Gate::CNOT: throw std::invalid_argument("apply_gate: CNOT needs two targets");
    }
}

void StabilizerState::apply_gate(Gate g, std::uint32_t a, std::uint32_t b) {
    if (g != Gate::CNOT) throw std::invalid_argument("apply_gate: only CNOT takes two targets");
    if (a >= n_ || b >= n_) throw std::out_of_range("apply_gate: qubit index");
    if (a == b) throw std::invalid_argument("apply_gate: CNOT targets must differ");
    for (auto& row : rows_) {
        const bool xc = row.x.get(a), zc = row.z.get(a);
        const bool xt = row.x.get(b), zt = row.z.get(b);
        row.r ^= xc && zt && (xt == zc);
        row.x.set(b, xt ^ xc);
        row.z.set(a, zc ^ zt);
    }
}

void StabilizerState::apply_pauli(const PauliOperator& p) {
    if (p.n != n_) throw std::invalid_argument("apply_pauli: size mismatch");
    if (p.is_identity()) return;
    for (auto& row : rows_)
        row.r ^= row.x.dot(p.z) ^ row.z.dot(p.x);
}

MeasureResult StabilizerState::measure_z(std::uint32_t qubit, const CoinSource& coin) {
    std::size_t pivot = 2 * n_;
    for (std::size_t i = n_; i < 2 * n_; ++i) {
        if (rows_[i].x.get(qubit)) {
            pivot = i;
            break;
        }
    }
    if (pivot < 2 * n_) {
        // Random outcome: collapse onto +/- Z_qubit.
        for (std::size_t i = 0; i < 2 * n_; ++i)
            if (i != pivot && rows_[i].x.get(qubit)) row_mult(rows_[i], rows_[pivot]);
        rows_[pivot - n_] = rows_[pivot];
        Row& stab = rows_[pivot];
        stab.x = BitVec(n_);
        stab.z = BitVec(n_);
        stab.z.set(qubit, true);
        const int outcome = coin() & 1;
        stab.r = outcome == 1;
        return {outcome, false};
    }
    // Deterministic outcome: accumulate the stabilizer product hit by the
    // destabilizers that anticommute with Z_qubit.
    Row scratch{BitVec(n_), BitVec(n_), false};
    for (std::size_t i = 0; i < n_; ++i)
        if (rows_[i].x.get(qubit)) row_mult(scratch, rows_[n_ + i]);
    return {scratch.r ? 1 : 0, true};
}

MeasureResult StabilizerState::measure(std::uint32_t qubit, Basis basis, const CoinSource& coin) {
    if (qubit >= n_) throw std::out_of_range("measure: qubit index");
    if (basis == Basis::Z) return measure_z(qubit, coin);
    apply_gate(Gate::H, qubit);
    MeasureResult res = measure_z(qubit, coin);
    apply_gate(Gate::H, qubit);
    return res;
}

void StabilizerState::reset(std::uint32_t qubit, Basis basis) {
    // Project with a fixed coin and flip into the +1 state; both coin branches
    // end in the same state, so no external randomness is consumed.
    static const CoinSource zero = []() { return 0; };
    if (basis == Basis::Z) {
        if (measure_z(qubit, zero).outcome == 1) apply_gate(Gate::X, qubit);
    } else {
        apply_gate(Gate::H, qubit);
        if (measure_z(qubit, zero).outcome == 1) apply_gate(Gate::X, qubit);
        apply_gate(Gate::H, qubit);
    }
}

bool StabilizerState::is_stabilized_by(const PauliOperator& p) const {
    if (p.n != n_) throw std::invalid_argument("is_stabilized_by: size mismatch");
    if (p.phase_pow & 1) return false;  // +/- i phases are never stabilizers
    for (std::size_t i = n_; i < 2 * n_; ++i) {
        const Row& row = rows_[i];
        if (row.x.dot(p.z) ^ row.z.dot(p.x)) return false;
    }
    Row scratch{BitVec(n_), BitVec(n_), false};
    for (std::size_t i = 0; i < n_; ++i) {
        const Row& destab = rows_[i];
        if (destab.x.dot(p.z) ^ destab.z.dot(p.x)) row_mult(scratch, rows_[n_ + i]);
    }
    if (!(scratch.x == p.x) || !(scratch.z == p.z)) return false;
    return (scratch.r ? 2 : 0) == p.phase_pow;
}

PauliOperator StabilizerState::row_to_pauli(const Row& row) const {
    PauliOperator p(n_);
    p.x = row.x;
    p.z = row.z;
    p.phase_pow = row.r ? 2 : 0;
    return p;
}

PauliOperator StabilizerState::stabilizer_row(std::size_t i) const { return row_to_pauli(rows_[n_ + i]); }
PauliOperator StabilizerState::destabilizer_row(std::size_t i) const { return row_to_pauli(rows_[i]); }

std::size_t StabilizerState::stabilizer_rank() const {
    // Gaussian elimination over GF(2) on the (x|z) stabilizer rows.
    std::vector<std::vector<std::uint8_t>> m(n_, std::vector<std::uint8_t>(2 * n_, 0));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t t = 0; t < n_; ++t) {
            m[i][t] = rows_[n_ + i].x.get(t);
            m[i][n_ + t] = rows_[n_ + i].z.get(t);
        }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < 2 * n_ && rank < n_; ++col) {
        std::size_t pivot = rank;
        while (pivot < n_ && !m[pivot][col]) ++pivot;
        if (pivot == n_) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t i = 0; i < n_; ++i)
            if (i != rank && m[i][col])
                for (std::size_t c = 0; c < 2 * n_; ++c) m[i][c] ^= m[rank][c];
        ++rank;
    }
    return rank;
}

}  // namespace dss
