#include "qbsc/circuit.hpp"

#include "qbsc/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qbsc {

namespace {

std::uint64_t width_mask(std::size_t width)
{
    return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

} // namespace

Qubit Register::qubit(std::size_t i) const
{
    if (i >= width) {
        throw RangeError("qubit " + std::to_string(i) + " outside register '" + name + "'");
    }
    return offset + i;
}

Qubit Register::bit(std::size_t j) const
{
    if (j >= width) {
        throw RangeError("bit " + std::to_string(j) + " outside register '" + name + "'");
    }
    return offset + width - 1 - j;
}

Register Register::slice(std::size_t first, std::size_t count, std::string slice_name) const
{
    if (count == 0 || first + count > width) {
        throw RangeError("slice outside register '" + name + "'");
    }
    if (slice_name.empty()) {
        slice_name = name + "[" + std::to_string(first) + ":" + std::to_string(first + count) + "]";
    }
    return {std::move(slice_name), offset + first, count};
}

std::uint64_t Register::max_value() const { return width_mask(width); }

RegisterLayout::RegisterLayout(const std::vector<RegisterSpec>& specs)
{
    std::set<std::string> seen;
    for (const auto& [name, width] : specs) {
        if (width == 0) {
            throw LayoutError("register '" + name + "' has zero width");
        }
        if (width > kMaxRegisterWidth) {
            throw LayoutError("register '" + name + "' is wider than 64 qubits");
        }
        if (!seen.insert(name).second) {
            throw LayoutError("duplicate register name '" + name + "'");
        }
        registers_.push_back({name, num_qubits_, width});
        num_qubits_ += width;
    }
    if (num_qubits_ > kMaxQubits) {
        throw LayoutError("layout needs " + std::to_string(num_qubits_) + " qubits; limit is 128");
    }
}

const Register& RegisterLayout::operator[](std::string_view name) const
{
    for (const auto& r : registers_) {
        if (r.name == name) {
            return r;
        }
    }
    throw LayoutError("unknown register '" + std::string(name) + "'");
}

bool RegisterLayout::contains(std::string_view name) const
{
    return std::any_of(registers_.begin(), registers_.end(),
                       [&](const Register& r) { return r.name == name; });
}

std::uint64_t read_register(BasisIndex index, std::size_t num_qubits, const Register& reg)
{
    const std::size_t shift = num_qubits - reg.offset - reg.width;
    return static_cast<std::uint64_t>(index >> shift) & width_mask(reg.width);
}

BasisIndex write_register(BasisIndex index, std::size_t num_qubits, const Register& reg,
                          std::uint64_t value)
{
    if ((value & ~width_mask(reg.width)) != 0) {
        throw RangeError("value " + std::to_string(value) + " does not fit register '" + reg.name + "'");
    }
    const std::size_t shift = num_qubits - reg.offset - reg.width;
    const BasisIndex mask = static_cast<BasisIndex>(width_mask(reg.width)) << shift;
    return (index & ~mask) | (static_cast<BasisIndex>(value) << shift);
}

BasisIndex qubit_mask(std::size_t num_qubits, Qubit q)
{
    return BasisIndex{1} << (num_qubits - 1 - q);
}

void validate_gate(const Gate& gate, std::size_t num_qubits)
{
    if (gate.target >= num_qubits) {
        throw CircuitError("target qubit " + std::to_string(gate.target) + " out of range");
    }
    if (gate.kind == GateKind::MCX) {
        if (gate.controls.empty()) {
            throw CircuitError("MCX needs at least one control");
        }
    } else if (!gate.controls.empty()) {
        throw CircuitError("only MCX gates carry controls");
    }
    std::vector<Qubit> seen{gate.target};
    for (const auto& c : gate.controls) {
        if (c.qubit >= num_qubits) {
            throw CircuitError("control qubit " + std::to_string(c.qubit) + " out of range");
        }
        if (std::find(seen.begin(), seen.end(), c.qubit) != seen.end()) {
            throw CircuitError("qubit " + std::to_string(c.qubit) + " used twice in one gate");
        }
        seen.push_back(c.qubit);
    }
}

std::string to_string(const Gate& gate)
{
    std::ostringstream out;
    switch (gate.kind) {
    case GateKind::X: out << "X"; break;
    case GateKind::H: out << "H"; break;
    case GateKind::Z: out << "Z"; break;
    case GateKind::MCX: out << "MCX"; break;
    }
    out << " t=" << gate.target;
    if (!gate.controls.empty()) {
        out << " c=";
        for (std::size_t i = 0; i < gate.controls.size(); ++i) {
            const auto& c = gate.controls[i];
            out << (i ? "," : "") << (c.polarity == Polarity::OnOne ? '+' : '-') << c.qubit;
        }
    }
    return out.str();
}

Circuit& Circuit::append(Gate gate)
{
    validate_gate(gate, num_qubits());
    gates_.push_back(std::move(gate));
    return *this;
}

Circuit& Circuit::append(const Circuit& other)
{
    if (other.layout_ != layout_) {
        throw LayoutError("cannot append a circuit with a different register layout");
    }
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
}

Circuit& Circuit::load(const Register& reg, std::uint64_t value)
{
    if (value > reg.max_value()) {
        throw RangeError("value " + std::to_string(value) + " does not fit register '" + reg.name + "'");
    }
    for (std::size_t j = 0; j < reg.width; ++j) {
        if ((value >> j) & 1U) {
            x(reg.bit(j));
        }
    }
    return *this;
}

std::string Circuit::dump() const
{
    std::string out;
    for (const auto& g : gates_) {
        out += to_string(g);
        out += '\n';
    }
    return out;
}

Circuit new_circuit(const std::vector<RegisterSpec>& registers)
{
    return Circuit(RegisterLayout(registers));
}

Circuit compose(const Circuit& first, const Circuit& second)
{
    Circuit out = first;
    out.append(second);
    return out;
}

Circuit inverse(const Circuit& circuit)
{
    Circuit out(circuit.layout());
    const auto& gates = circuit.gates();
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        out.append(*it);
    }
    return out;
}

std::vector<Control> value_controls(const Register& reg, std::uint64_t value)
{
    if (value > reg.max_value()) {
        throw RangeError("value " + std::to_string(value) + " does not fit register '" + reg.name + "'");
    }
    std::vector<Control> controls;
    controls.reserve(reg.width);
    for (std::size_t i = 0; i < reg.width; ++i) {
        const bool set = (value >> (reg.width - 1 - i)) & 1U;
        controls.push_back({reg.qubit(i), set ? Polarity::OnOne : Polarity::OnZero});
    }
    return controls;
}

Circuit lift_function(const RegisterLayout& layout, std::span<const std::uint64_t> table,
                      const Register& in_reg, const Register& out_reg)
{
    if (in_reg.width >= 63 || table.size() != (std::size_t{1} << in_reg.width)) {
        throw ArgumentError("function table has " + std::to_string(table.size()) +
                            " rows; input register needs " +
                            std::to_string(std::uint64_t{1} << std::min<std::size_t>(in_reg.width, 63)));
    }
    for (std::size_t q = out_reg.offset; q < out_reg.offset + out_reg.width; ++q) {
        if (in_reg.contains(q)) {
            throw LayoutError("function input and output registers overlap");
        }
    }
    Circuit circuit(layout);
    for (std::uint64_t x = 0; x < table.size(); ++x) {
        const std::uint64_t fx = table[x];
        if (fx > out_reg.max_value()) {
            throw ArgumentError("table row " + std::to_string(x) + " does not fit the output width");
        }
        if (fx == 0) {
            continue;
        }
        const auto controls = value_controls(in_reg, x);
        for (std::size_t j = 0; j < out_reg.width; ++j) {
            if ((fx >> j) & 1U) {
                circuit.mcx(controls, out_reg.bit(j));
            }
        }
    }
    return circuit;
}

} // namespace qbsc
