#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dss/protocol.hpp"

namespace dss {

// Steane [[7,1,3]] code data. Internally 0-based; the construction follows
// the usual 1-based plaquette labels, so generator k acts on
// {q+1 : q in x_support(k)} in that convention.
struct SteaneCode {
    // Supports of K_1, K_2, K_3 (identical for the X and Z generators).
    static constexpr std::array<std::array<std::uint8_t, 4>, 3> plaquettes{
        {{3, 4, 5, 6}, {0, 2, 4, 6}, {1, 2, 5, 6}}};

    // Z-basis strings of |0>_L as bit masks with bit i = data qubit i. The
    // usual string notation reads qubit 1 first, so e.g. "0001111" (qubits
    // 4..7 set) is the mask 0b1111000.
    static constexpr std::array<std::uint8_t, 8> codewords{
        0b0000000,   // 0000000
        0b1010101,   // 1010101
        0b1100110,   // 0110011
        0b0110011,   // 1100110
        0b1111000,   // 0001111
        0b0101101,   // 1011010
        0b0011110,   // 0111100
        0b1001011};  // 1101001

    // Generator as an n-qubit Pauli ('X' or 'Z' type, k in 0..2).
    static PauliOperator generator(char type, int k, std::size_t n);
    static PauliOperator logical_z(std::size_t n);

    // Static lookup decoder: 3-bit syndrome (1 = -1 outcome) to the flipped
    // data qubit, or nullopt for the trivial syndrome.
    static std::optional<std::uint32_t> lookup(const std::array<int, 3>& syndrome);

    // Z-stabilizer syndrome of an X-error bit mask.
    static std::array<int, 3> x_error_syndrome(std::uint8_t error_mask);

    // Minimum Hamming distance of a measured 7-bit string to the codewords.
    static int min_hamming_distance(std::uint8_t bits);
};

inline std::optional<std::uint32_t> lookup_decode(const std::array<int, 3>& syndrome) {
    return SteaneCode::lookup(syndrome);
}

// Data X-errors producible by exactly one fault that triggers the circuit's
// flag qubit, each with its Z-stabilizer syndrome. Syndromes map to the
// minimum-weight member.
struct FlagErrorSet {
    struct Member {
        std::uint8_t error_mask = 0;
        std::array<int, 3> syndrome{};
    };
    std::vector<Member> members;
    std::map<std::uint8_t, std::uint8_t> by_syndrome;  // packed syndrome -> error mask

    static std::uint8_t pack(const std::array<int, 3>& syndrome) {
        return static_cast<std::uint8_t>(syndrome[0] | (syndrome[1] << 1) | (syndrome[2] << 2));
    }
};

// Enumerate all single faults of `circuit`, propagate them as Pauli frames,
// and keep those that flip the flag qubit's Z measurement. Data qubits are
// 0..6; everything else is treated as auxiliary.
FlagErrorSet flag_error_set(const Circuit& circuit, std::uint32_t flag_qubit);

// Four-qubit GHZ preparation verified by a flag qubit; failure is a -1 flag.
ProtocolGraph ghz_protocol();

// Deterministic FT preparation of |0>_L: non-FT encoder with a flagged
// Z3Z5Z6 verification, conditional Z1Z2Z4Z7 readout and X7 correction, then
// a destructive measurement of all data qubits.
ProtocolGraph steane_det_prep();

// |0>_L preparation via sequential flag-FT X-stabilizer measurements with a
// non-FT syndrome readout fallback.
ProtocolGraph steane_flag_prep();

// Registered builtin protocols, keyed by CLI name.
const std::map<std::string, ProtocolGraph (*)()>& builtin_protocols();
ProtocolGraph make_protocol(const std::string& name_or_path);

}  // namespace dss
