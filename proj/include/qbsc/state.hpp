#pragma once

// Exact statevector engine.
//
// Amplitudes live either in a dense array (small qubit counts) or in a
// sorted sparse list of (basis index, amplitude) pairs. Both storages give
// bit-identical results for permutation gates and agree to rounding for
// Hadamards. All reductions run in ascending basis order, so results never
// depend on evaluation order.

#include "qbsc/circuit.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qbsc {

using Amplitude = std::complex<double>;

/// Amplitudes below this magnitude are dropped after every gate.
inline constexpr double kPruneThreshold = 1e-14;
/// Renormalization kicks in only when the squared norm drifts further than this.
inline constexpr double kNormDriftTolerance = 1e-12;
/// Automatic storage picks dense below this many qubits (2^20 amplitudes).
inline constexpr std::size_t kDenseQubitLimit = 20;

enum class Storage { Auto, Dense, Sparse };

struct BasisAmplitude {
    BasisIndex index = 0;
    Amplitude amplitude;
};

class QuantumState {
public:
    /// |0...0> over `layout`.
    static QuantumState zero(RegisterLayout layout, Storage storage = Storage::Auto);
    /// Normalized state from explicit amplitudes; duplicate indices are summed.
    static QuantumState from_amplitudes(RegisterLayout layout, std::vector<BasisAmplitude> amplitudes,
                                        Storage storage = Storage::Auto);

    std::size_t num_qubits() const { return layout_.num_qubits(); }
    const RegisterLayout& layout() const { return layout_; }
    bool is_dense() const { return dense_; }

    Amplitude amplitude(BasisIndex index) const;
    /// Non-zero amplitudes in ascending basis order.
    std::vector<BasisAmplitude> entries() const;
    std::size_t support_size() const;
    double norm_squared() const;

    void apply(const Gate& gate);
    void apply(const Circuit& circuit);
    /// psi -> 2 <pivot|psi> pivot - psi.
    void reflect_about(const QuantumState& pivot);

    /// Same amplitudes held in the requested storage.
    QuantumState converted(Storage storage) const;

private:
    QuantumState(RegisterLayout layout, bool dense);

    struct CompiledGate {
        GateKind kind;
        BasisIndex target;
        BasisIndex control_mask;
        BasisIndex control_value;
    };
    CompiledGate compile(const Gate& gate) const;

    void apply_permutation_run(const std::vector<CompiledGate>& run);
    void apply_hadamard(BasisIndex target);
    void prune_and_renormalize();

    RegisterLayout layout_;
    bool dense_ = true;
    std::vector<Amplitude> dense_amps_;
    std::vector<BasisAmplitude> sparse_amps_;
};

struct MeasurementDistribution {
    Register reg;
    std::map<std::uint64_t, double> entries;

    double probability(std::uint64_t outcome) const;
    /// Outcome with the largest probability; ties go to the smaller outcome.
    std::uint64_t most_likely() const;
};

/// Single register "q" spanning all qubits, holding `value`.
QuantumState basis_state(std::size_t num_qubits, std::uint64_t value);
/// Basis state over `layout`; unspecified registers hold 0.
QuantumState basis_state(const RegisterLayout& layout, const std::map<std::string, std::uint64_t>& values,
                         Storage storage = Storage::Auto);
/// Equal superposition over all 2^n basis states of a single register "q".
QuantumState uniform_state(std::size_t num_qubits);

QuantumState apply_gate(QuantumState state, const Gate& gate);
QuantumState apply_circuit(QuantumState state, const Circuit& circuit);

MeasurementDistribution marginal_distribution(const QuantumState& state, const Register& reg);
MeasurementDistribution marginal_distribution(const QuantumState& state, std::string_view reg);

/// Seeded multinomial sampling of a register. Deterministic for a fixed seed.
std::map<std::uint64_t, std::size_t> sample(const MeasurementDistribution& distribution, std::uint64_t seed,
                                            std::size_t shots);
std::map<std::uint64_t, std::size_t> sample(const QuantumState& state, std::string_view reg,
                                            std::uint64_t seed, std::size_t shots);

Amplitude inner_product(const QuantumState& bra, const QuantumState& ket);
/// |<s1|s2>|^2
double fidelity(const QuantumState& s1, const QuantumState& s2);

} // namespace qbsc
