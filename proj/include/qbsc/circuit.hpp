#pragma once

// Gate-level intermediate representation.
//
// Qubits are numbered globally in register declaration order. Within a
// register the first qubit is the most significant bit, so a register
// holding |0111> has its qubit 0 in |0> and qubit 3 in |1>. The same
// convention extends to the whole circuit: qubit 0 is the most significant
// bit of a basis index.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qbsc {

using Qubit = std::size_t;

/// Basis-state index over the full qubit set (up to kMaxQubits qubits).
using BasisIndex = unsigned __int128;

inline constexpr std::size_t kMaxQubits = 128;
inline constexpr std::size_t kMaxRegisterWidth = 64;

struct Register {
    std::string name;
    std::size_t offset = 0;
    std::size_t width = 0;

    /// i-th qubit counted from the most significant end.
    Qubit qubit(std::size_t i) const;
    /// Qubit holding bit j of the register value (j = 0 is the LSB).
    Qubit bit(std::size_t j) const;
    /// Sub-register of `count` qubits starting `first` qubits from the MSB end.
    Register slice(std::size_t first, std::size_t count, std::string slice_name = {}) const;
    bool contains(Qubit q) const { return q >= offset && q < offset + width; }
    std::uint64_t max_value() const;

    bool operator==(const Register&) const = default;
};

using RegisterSpec = std::pair<std::string, std::size_t>;

/// Ordered set of named, disjoint, contiguous qubit ranges.
class RegisterLayout {
public:
    RegisterLayout() = default;
    explicit RegisterLayout(const std::vector<RegisterSpec>& specs);

    /// Throws LayoutError for an unknown name.
    const Register& operator[](std::string_view name) const;
    bool contains(std::string_view name) const;
    std::size_t num_qubits() const { return num_qubits_; }
    const std::vector<Register>& registers() const { return registers_; }

    bool operator==(const RegisterLayout&) const = default;

private:
    std::vector<Register> registers_;
    std::size_t num_qubits_ = 0;
};

/// Value of `reg` inside a basis index over `num_qubits` qubits.
std::uint64_t read_register(BasisIndex index, std::size_t num_qubits, const Register& reg);
/// Basis index with the bits of `reg` replaced by `value`.
BasisIndex write_register(BasisIndex index, std::size_t num_qubits, const Register& reg,
                          std::uint64_t value);
/// Bit mask of qubit q inside a basis index.
BasisIndex qubit_mask(std::size_t num_qubits, Qubit q);

enum class GateKind { X, H, Z, MCX };
enum class Polarity { OnOne, OnZero };

struct Control {
    Qubit qubit = 0;
    Polarity polarity = Polarity::OnOne;

    bool operator==(const Control&) const = default;
};

inline Control on_one(Qubit q) { return {q, Polarity::OnOne}; }
inline Control on_zero(Qubit q) { return {q, Polarity::OnZero}; }

struct Gate {
    GateKind kind = GateKind::X;
    Qubit target = 0;
    std::vector<Control> controls;

    static Gate x(Qubit q) { return {GateKind::X, q, {}}; }
    static Gate h(Qubit q) { return {GateKind::H, q, {}}; }
    static Gate z(Qubit q) { return {GateKind::Z, q, {}}; }
    static Gate mcx(std::vector<Control> controls, Qubit target)
    {
        return {GateKind::MCX, target, std::move(controls)};
    }

    /// Every gate in the set is its own inverse.
    bool is_permutation() const { return kind == GateKind::X || kind == GateKind::MCX; }

    bool operator==(const Gate&) const = default;
};

/// Throws CircuitError unless the gate is well formed on `num_qubits` qubits.
void validate_gate(const Gate& gate, std::size_t num_qubits);

/// One-line textual form, e.g. `MCX t=5 c=+0,-3` (`+` on-one, `-` on-zero).
std::string to_string(const Gate& gate);

class Circuit {
public:
    Circuit() = default;
    explicit Circuit(RegisterLayout layout) : layout_(std::move(layout)) {}

    const RegisterLayout& layout() const { return layout_; }
    const Register& reg(std::string_view name) const { return layout_[name]; }
    std::size_t num_qubits() const { return layout_.num_qubits(); }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }

    Circuit& append(Gate gate);
    /// Appends all gates of `other`; layouts must match.
    Circuit& append(const Circuit& other);

    Circuit& x(Qubit q) { return append(Gate::x(q)); }
    Circuit& h(Qubit q) { return append(Gate::h(q)); }
    Circuit& z(Qubit q) { return append(Gate::z(q)); }
    Circuit& cnot(Control c, Qubit t) { return append(Gate::mcx({c}, t)); }
    Circuit& cnot(Qubit c, Qubit t) { return cnot(on_one(c), t); }
    Circuit& toffoli(Control c1, Control c2, Qubit t) { return append(Gate::mcx({c1, c2}, t)); }
    Circuit& mcx(std::vector<Control> controls, Qubit t) { return append(Gate::mcx(std::move(controls), t)); }

    /// X on every qubit of `reg` whose bit in `value` is set.
    Circuit& load(const Register& reg, std::uint64_t value);

    /// One gate per line.
    std::string dump() const;

    bool operator==(const Circuit&) const = default;

private:
    RegisterLayout layout_;
    std::vector<Gate> gates_;
};

Circuit new_circuit(const std::vector<RegisterSpec>& registers);
Circuit compose(const Circuit& first, const Circuit& second);
Circuit inverse(const Circuit& circuit);

/// Controls that fire exactly when `reg` holds `value`.
std::vector<Control> value_controls(const Register& reg, std::uint64_t value);

/// XOR-embedding |x>|y> -> |x>|y ^ f(x)> of an explicit function table,
/// one MCX per set output bit per table row.
Circuit lift_function(const RegisterLayout& layout, std::span<const std::uint64_t> table,
                      const Register& in_reg, const Register& out_reg);

} // namespace qbsc
