#pragma once

// Reversible arithmetic: ripple-carry adder, controlled adder and the
// shift-and-add multiplier |x>|y>|0> -> |x>|y>|x*y>.
//
// The adder is the Toffoli/CNOT ripple-carry construction with one carry
// ancilla per low-order sum bit. Addend bits above the addend width are
// treated as constant zero, so the same builder adds an n-bit value into
// any wider sum register.

#include "qbsc/circuit.hpp"

#include <span>
#include <utility>

namespace qbsc {

struct ArithLayout {
    RegisterLayout circuit_layout;
    Register x_reg;
    Register y_reg;     ///< unused by the plain adder
    Register out_reg;   ///< sum register (n + 1) or product register (2n)
    Register carry_reg;
};

/// Carry ancillas needed to add into a sum register of `sum_width` qubits.
std::size_t adder_carry_width(std::size_t sum_width);
/// Carry ancillas needed by the n-bit multiplier (2n - 1).
std::size_t multiplier_carry_width(std::size_t n);

/// Appends |x>|s> -> |x>|s + x mod 2^width(s)> with every gate also
/// conditioned on `extra_controls`. Requires width(s) > width(x).
void append_adder(Circuit& circuit, const Register& x, const Register& sum, const Register& carry,
                  std::span<const Control> extra_controls = {});

/// Standalone adder over x(n), s(n+1), carry(n).
std::pair<Circuit, ArithLayout> build_adder(std::size_t n);

/// Adder conditioned on `control`, which must lie outside the adder footprint.
Circuit build_controlled_adder(const RegisterLayout& layout, const Register& x, const Register& sum,
                               const Register& carry, Qubit control);
/// Standalone controlled adder over ctrl(1), x(n), s(n+1), carry(n).
std::pair<Circuit, ArithLayout> build_controlled_adder(std::size_t n);

/// n controlled, shifted additions of x into `out`, one per bit of y.
/// On a non-zero product register the result is z + x*y mod 2^(2n).
Circuit build_multiplier(const RegisterLayout& layout, const Register& x, const Register& y,
                         const Register& out, const Register& carry);
/// Standalone multiplier over x(n), y(n), out(2n), carry(2n-1).
std::pair<Circuit, ArithLayout> build_multiplier(std::size_t n);

} // namespace qbsc
