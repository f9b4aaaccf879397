#include "qbsc/arith.hpp"

#include "qbsc/errors.hpp"

#include <optional>
#include <vector>

namespace qbsc {

namespace {

void check_disjoint(std::initializer_list<const Register*> regs)
{
    for (auto i = regs.begin(); i != regs.end(); ++i) {
        for (auto j = std::next(i); j != regs.end(); ++j) {
            const Register& a = **i;
            const Register& b = **j;
            if (a.offset < b.offset + b.width && b.offset < a.offset + a.width) {
                throw LayoutError("registers '" + a.name + "' and '" + b.name + "' overlap");
            }
        }
    }
}

// Gate emitter that appends the shared extra controls to every gate.
struct Emitter {
    Circuit& circuit;
    std::span<const Control> extra;

    void cx(Qubit c, Qubit t) { ccx({c}, t); }
    void ccx(std::vector<Qubit> cs, Qubit t)
    {
        std::vector<Control> controls;
        for (Qubit q : cs) {
            controls.push_back(on_one(q));
        }
        controls.insert(controls.end(), extra.begin(), extra.end());
        circuit.mcx(std::move(controls), t);
    }
};

} // namespace

std::size_t adder_carry_width(std::size_t sum_width)
{
    if (sum_width < 2) {
        throw ArgumentError("sum register needs at least two qubits");
    }
    return sum_width - 1;
}

std::size_t multiplier_carry_width(std::size_t n)
{
    if (n == 0) {
        throw ArgumentError("multiplier width must be at least 1");
    }
    return 2 * n - 1;
}

void append_adder(Circuit& circuit, const Register& x, const Register& sum, const Register& carry,
                  std::span<const Control> extra_controls)
{
    const std::size_t n = x.width;
    const std::size_t m = sum.width;
    if (m <= n) {
        throw ArgumentError("sum register must be wider than the addend");
    }
    if (carry.width < adder_carry_width(m)) {
        throw LayoutError("adder into " + std::to_string(m) + " qubits needs " +
                          std::to_string(adder_carry_width(m)) + " carry qubits");
    }
    check_disjoint({&x, &sum, &carry});
    for (const auto& c : extra_controls) {
        if (x.contains(c.qubit) || sum.contains(c.qubit) || carry.contains(c.qubit)) {
            throw LayoutError("adder control qubit " + std::to_string(c.qubit) + " lies inside the adder");
        }
    }

    Emitter e{circuit, extra_controls};
    // Bit i of the addend; positions at or above n are constant zero.
    auto a = [&](std::size_t i) -> std::optional<Qubit> {
        return i < n ? std::optional<Qubit>(x.bit(i)) : std::nullopt;
    };
    auto s = [&](std::size_t i) { return sum.bit(i); };
    // c_0 .. c_{m-2} are ancillas; the carry out of position m-2 lands in the top sum bit.
    auto c = [&](std::size_t i) { return i == m - 1 ? sum.bit(m - 1) : carry.bit(i); };

    auto carry_block = [&](std::size_t i) {
        if (auto ai = a(i)) {
            e.ccx({*ai, s(i)}, c(i + 1));
            e.cx(*ai, s(i));
        }
        e.ccx({c(i), s(i)}, c(i + 1));
    };
    auto carry_block_inverse = [&](std::size_t i) {
        e.ccx({c(i), s(i)}, c(i + 1));
        if (auto ai = a(i)) {
            e.cx(*ai, s(i));
            e.ccx({*ai, s(i)}, c(i + 1));
        }
    };
    auto sum_block = [&](std::size_t i) {
        if (auto ai = a(i)) {
            e.cx(*ai, s(i));
        }
        e.cx(c(i), s(i));
    };

    const std::size_t top = m - 2;
    for (std::size_t i = 0; i <= top; ++i) {
        carry_block(i);
    }
    if (auto at = a(top)) {
        e.cx(*at, s(top));
    }
    sum_block(top);
    for (std::size_t i = top; i-- > 0;) {
        carry_block_inverse(i);
        sum_block(i);
    }
}

std::pair<Circuit, ArithLayout> build_adder(std::size_t n)
{
    if (n == 0) {
        throw ArgumentError("adder width must be at least 1");
    }
    RegisterLayout layout({{"x", n}, {"s", n + 1}, {"carry", n}});
    Circuit c(layout);
    append_adder(c, layout["x"], layout["s"], layout["carry"]);
    ArithLayout al{layout, layout["x"], {}, layout["s"], layout["carry"]};
    return {std::move(c), std::move(al)};
}

Circuit build_controlled_adder(const RegisterLayout& layout, const Register& x, const Register& sum,
                               const Register& carry, Qubit control)
{
    if (control >= layout.num_qubits()) {
        throw LayoutError("control qubit outside the layout");
    }
    Circuit c(layout);
    const Control ctl = on_one(control);
    append_adder(c, x, sum, carry, std::span<const Control>(&ctl, 1));
    return c;
}

std::pair<Circuit, ArithLayout> build_controlled_adder(std::size_t n)
{
    if (n == 0) {
        throw ArgumentError("adder width must be at least 1");
    }
    RegisterLayout layout({{"ctrl", 1}, {"x", n}, {"s", n + 1}, {"carry", n}});
    Circuit c = build_controlled_adder(layout, layout["x"], layout["s"], layout["carry"], layout["ctrl"].qubit(0));
    ArithLayout al{layout, layout["x"], {}, layout["s"], layout["carry"]};
    return {std::move(c), std::move(al)};
}

Circuit build_multiplier(const RegisterLayout& layout, const Register& x, const Register& y,
                         const Register& out, const Register& carry)
{
    const std::size_t n = x.width;
    if (y.width != n) {
        throw LayoutError("multiplier operands must have equal widths");
    }
    if (out.width != 2 * n) {
        throw LayoutError("product register must be exactly twice the operand width");
    }
    if (carry.width < multiplier_carry_width(n)) {
        throw LayoutError("multiplier needs " + std::to_string(multiplier_carry_width(n)) + " carry qubits");
    }
    check_disjoint({&x, &y, &out, &carry});
    Circuit c(layout);
    for (std::size_t j = 0; j < n; ++j) {
        // Bits j .. 2n-1 of the product, i.e. the top 2n - j qubits.
        const Register window = out.slice(0, 2 * n - j);
        const Control ctl = on_one(y.bit(j));
        append_adder(c, x, window, carry, std::span<const Control>(&ctl, 1));
    }
    return c;
}

std::pair<Circuit, ArithLayout> build_multiplier(std::size_t n)
{
    if (n == 0) {
        throw ArgumentError("multiplier width must be at least 1");
    }
    RegisterLayout layout({{"x", n}, {"y", n}, {"out", 2 * n}, {"carry", multiplier_carry_width(n)}});
    Circuit c = build_multiplier(layout, layout["x"], layout["y"], layout["out"], layout["carry"]);
    ArithLayout al{layout, layout["x"], layout["y"], layout["out"], layout["carry"]};
    return {std::move(c), std::move(al)};
}

} // namespace qbsc
