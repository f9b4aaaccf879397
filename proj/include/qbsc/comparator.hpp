#pragma once

// Quantum bit-string comparator.
//
// Compares two equal-width registers a and b from the most significant bit
// down. Outputs O1 = 1 iff a > b and O2 = 1 iff a < b; both stay 0 on
// equality. Each bit position owns a unit cell writing
//   g_i = a_i AND NOT b_i,   l_i = NOT a_i AND b_i
// onto fresh ancillas. An enable chain e_i ("every position above i was
// equal") passes the decision down: position 0 writes O1/O2 directly and
// seeds e_1 with a Toffoli activated on zero; later positions contribute
// only under e_i.
//
// Work qubits: 2n indicators + (n - 1) enables; with O1 and O2 the
// comparator needs 3n + 1 qubits initialized to |0>.

#include "qbsc/circuit.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qbsc {

enum class ComparatorOutcome { GT, LT, EQ };

/// Outcome condition on (a, b), read as "a REL b".
enum class ComparatorPredicate { GT, LT, EQ, LEQ, GEQ, NEQ };

std::string to_string(ComparatorOutcome outcome);
std::string to_string(ComparatorPredicate predicate);
/// Accepts "GT", "LT", "EQ", "LEQ", "GEQ", "NEQ"; anything else is an ArgumentError.
ComparatorPredicate parse_comparator_predicate(std::string_view name);

struct ComparatorLayout {
    RegisterLayout circuit_layout;
    Register a_reg;
    Register b_reg;
    Register out_reg;  ///< two qubits: O1 then O2
    Register work_reg; ///< g_0..g_{n-1}, l_0..l_{n-1}, e_1..e_{n-1}
    Qubit o1 = 0;
    Qubit o2 = 0;
    /// Every qubit that starts and ends in |0>: work qubits, then O1, O2.
    std::vector<Qubit> ancillas;
    std::size_t ancilla_count = 0;

    std::size_t width() const { return a_reg.width; }
    Register o1_register() const { return {"O1", o1, 1}; }
    Register o2_register() const { return {"O2", o2, 1}; }

    Qubit greater_flag(std::size_t position) const;
    Qubit less_flag(std::size_t position) const;
    /// Enable qubit for positions 1..n-1.
    Qubit enable_flag(std::size_t position) const;
};

ComparatorOutcome compare_classical(std::uint64_t a, std::uint64_t b, std::size_t n);
bool predicate_holds(ComparatorPredicate predicate, ComparatorOutcome outcome);

/// Work-register width for an n-bit comparator (3n - 1).
std::size_t comparator_work_width(std::size_t n);

/// Register specs `<prefix>_out` (2) and `<prefix>_anc` (3n - 1).
std::vector<RegisterSpec> comparator_register_specs(std::size_t n, const std::string& prefix = "cmp");

/// Binds comparator roles to registers of an existing layout.
ComparatorLayout make_comparator_layout(const RegisterLayout& layout, std::string_view a_reg,
                                        std::string_view b_reg, std::string_view out_reg,
                                        std::string_view work_reg);

/// Indicator pair (g_i, l_i) for one bit position.
Circuit build_unit_cell(std::size_t position, const ComparatorLayout& layout);

/// Full comparator on the layout's registers.
Circuit build_comparator(const ComparatorLayout& layout);
/// Standalone comparator over registers a(n), b(n), cmp_out(2), cmp_anc(3n-1).
std::pair<Circuit, ComparatorLayout> build_comparator(std::size_t n);

/// Control sets on O1/O2 realizing `predicate`; the predicate holds iff exactly one set fires.
std::vector<std::vector<Control>> predicate_controls(const ComparatorLayout& layout,
                                                     ComparatorPredicate predicate);

/// comparator, X on `flip_target` under the predicate, inverse comparator.
Circuit build_predicate_flip(const ComparatorLayout& layout, ComparatorPredicate predicate, Qubit flip_target);

} // namespace qbsc
