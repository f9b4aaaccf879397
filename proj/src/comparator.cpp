#include "qbsc/comparator.hpp"

#include "qbsc/errors.hpp"

#include <algorithm>

namespace qbsc {

std::string to_string(ComparatorOutcome outcome)
{
    switch (outcome) {
    case ComparatorOutcome::GT: return "GT";
    case ComparatorOutcome::LT: return "LT";
    case ComparatorOutcome::EQ: return "EQ";
    }
    return "?";
}

std::string to_string(ComparatorPredicate predicate)
{
    switch (predicate) {
    case ComparatorPredicate::GT: return "GT";
    case ComparatorPredicate::LT: return "LT";
    case ComparatorPredicate::EQ: return "EQ";
    case ComparatorPredicate::LEQ: return "LEQ";
    case ComparatorPredicate::GEQ: return "GEQ";
    case ComparatorPredicate::NEQ: return "NEQ";
    }
    return "?";
}

ComparatorPredicate parse_comparator_predicate(std::string_view name)
{
    for (auto p : {ComparatorPredicate::GT, ComparatorPredicate::LT, ComparatorPredicate::EQ,
                   ComparatorPredicate::LEQ, ComparatorPredicate::GEQ, ComparatorPredicate::NEQ}) {
        if (to_string(p) == name) {
            return p;
        }
    }
    throw ArgumentError("unknown comparator predicate '" + std::string(name) + "'");
}

Qubit ComparatorLayout::greater_flag(std::size_t position) const { return work_reg.qubit(position); }

Qubit ComparatorLayout::less_flag(std::size_t position) const { return work_reg.qubit(width() + position); }

Qubit ComparatorLayout::enable_flag(std::size_t position) const
{
    if (position == 0) {
        throw ArgumentError("position 0 has no enable qubit");
    }
    return work_reg.qubit(2 * width() + position - 1);
}

ComparatorOutcome compare_classical(std::uint64_t a, std::uint64_t b, std::size_t n)
{
    if (n == 0 || n > kMaxRegisterWidth) {
        throw ArgumentError("comparison width must be between 1 and 64");
    }
    if (n < 64 && (a >> n || b >> n)) {
        throw ArgumentError("operands do not fit in " + std::to_string(n) + " bits");
    }
    for (std::size_t i = n; i-- > 0;) {
        const bool ai = (a >> i) & 1U;
        const bool bi = (b >> i) & 1U;
        if (ai != bi) {
            return ai ? ComparatorOutcome::GT : ComparatorOutcome::LT;
        }
    }
    return ComparatorOutcome::EQ;
}

bool predicate_holds(ComparatorPredicate predicate, ComparatorOutcome outcome)
{
    switch (predicate) {
    case ComparatorPredicate::GT: return outcome == ComparatorOutcome::GT;
    case ComparatorPredicate::LT: return outcome == ComparatorOutcome::LT;
    case ComparatorPredicate::EQ: return outcome == ComparatorOutcome::EQ;
    case ComparatorPredicate::LEQ: return outcome != ComparatorOutcome::GT;
    case ComparatorPredicate::GEQ: return outcome != ComparatorOutcome::LT;
    case ComparatorPredicate::NEQ: return outcome != ComparatorOutcome::EQ;
    }
    throw ArgumentError("unknown comparator predicate");
}

std::size_t comparator_work_width(std::size_t n)
{
    if (n == 0) {
        throw ArgumentError("comparator width must be at least 1");
    }
    return 3 * n - 1;
}

std::vector<RegisterSpec> comparator_register_specs(std::size_t n, const std::string& prefix)
{
    return {{prefix + "_out", 2}, {prefix + "_anc", comparator_work_width(n)}};
}

ComparatorLayout make_comparator_layout(const RegisterLayout& layout, std::string_view a_reg,
                                        std::string_view b_reg, std::string_view out_reg,
                                        std::string_view work_reg)
{
    ComparatorLayout c;
    c.circuit_layout = layout;
    c.a_reg = layout[a_reg];
    c.b_reg = layout[b_reg];
    c.out_reg = layout[out_reg];
    c.work_reg = layout[work_reg];
    if (c.a_reg.width != c.b_reg.width) {
        throw LayoutError("comparator operands must have equal widths");
    }
    if (c.out_reg.width != 2) {
        throw LayoutError("comparator output register must hold exactly two qubits");
    }
    c.o1 = c.out_reg.qubit(0);
    c.o2 = c.out_reg.qubit(1);
    for (std::size_t i = 0; i < c.work_reg.width; ++i) {
        c.ancillas.push_back(c.work_reg.qubit(i));
    }
    c.ancillas.push_back(c.o1);
    c.ancillas.push_back(c.o2);
    c.ancilla_count = c.ancillas.size();
    return c;
}

Circuit build_unit_cell(std::size_t position, const ComparatorLayout& layout)
{
    const std::size_t n = layout.width();
    if (position >= n) {
        throw ArgumentError("unit cell position " + std::to_string(position) + " outside an " +
                            std::to_string(n) + "-bit comparator");
    }
    if (layout.work_reg.width < comparator_work_width(n)) {
        throw LayoutError("comparator needs " + std::to_string(comparator_work_width(n)) +
                          " work qubits, register '" + layout.work_reg.name + "' has " +
                          std::to_string(layout.work_reg.width));
    }
    const Qubit a = layout.a_reg.qubit(position);
    const Qubit b = layout.b_reg.qubit(position);
    Circuit cell(layout.circuit_layout);
    cell.toffoli(on_one(a), on_zero(b), layout.greater_flag(position));
    cell.toffoli(on_zero(a), on_one(b), layout.less_flag(position));
    return cell;
}

Circuit build_comparator(const ComparatorLayout& layout)
{
    const std::size_t n = layout.width();
    Circuit c(layout.circuit_layout);
    for (std::size_t i = 0; i < n; ++i) {
        c.append(build_unit_cell(i, layout));
        const Qubit g = layout.greater_flag(i);
        const Qubit l = layout.less_flag(i);
        if (i == 0) {
            c.cnot(g, layout.o1);
            c.cnot(l, layout.o2);
            if (n > 1) {
                // Equal leading bits hand the decision to position 1.
                c.toffoli(on_zero(g), on_zero(l), layout.enable_flag(1));
            }
            continue;
        }
        const Qubit e = layout.enable_flag(i);
        c.toffoli(on_one(e), on_one(g), layout.o1);
        c.toffoli(on_one(e), on_one(l), layout.o2);
        if (i + 1 < n) {
            c.mcx({on_one(e), on_zero(g), on_zero(l)}, layout.enable_flag(i + 1));
        }
    }
    return c;
}

std::pair<Circuit, ComparatorLayout> build_comparator(std::size_t n)
{
    std::vector<RegisterSpec> specs{{"a", n}, {"b", n}};
    for (auto& s : comparator_register_specs(n)) {
        specs.push_back(std::move(s));
    }
    RegisterLayout layout(specs);
    ComparatorLayout cl = make_comparator_layout(layout, "a", "b", "cmp_out", "cmp_anc");
    return {build_comparator(cl), std::move(cl)};
}

std::vector<std::vector<Control>> predicate_controls(const ComparatorLayout& layout,
                                                     ComparatorPredicate predicate)
{
    const Qubit o1 = layout.o1;
    const Qubit o2 = layout.o2;
    switch (predicate) {
    case ComparatorPredicate::GT: return {{on_one(o1)}};
    case ComparatorPredicate::LT: return {{on_one(o2)}};
    case ComparatorPredicate::EQ: return {{on_zero(o1), on_zero(o2)}};
    case ComparatorPredicate::LEQ: return {{on_zero(o1)}};
    case ComparatorPredicate::GEQ: return {{on_zero(o2)}};
    case ComparatorPredicate::NEQ: return {{on_one(o1)}, {on_one(o2)}};
    }
    throw ArgumentError("unknown comparator predicate");
}

Circuit build_predicate_flip(const ComparatorLayout& layout, ComparatorPredicate predicate, Qubit flip_target)
{
    const auto& anc = layout.ancillas;
    if (layout.a_reg.contains(flip_target) || layout.b_reg.contains(flip_target) ||
        std::find(anc.begin(), anc.end(), flip_target) != anc.end()) {
        throw LayoutError("flip target lies inside the comparator footprint");
    }
    const Circuit compute = build_comparator(layout);
    Circuit c = compute;
    for (auto& controls : predicate_controls(layout, predicate)) {
        c.mcx(std::move(controls), flip_target);
    }
    c.append(inverse(compute));
    return c;
}

} // namespace qbsc
