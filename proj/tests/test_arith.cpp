#include "qbsc/arith.hpp"
#include "qbsc/errors.hpp"
#include "qbsc/state.hpp"

#include "reference_sim.hpp"

#include <doctest.h>

#include <random>

using namespace qbsc;

namespace {

struct Values {
    std::uint64_t x, y, out, carry, other;
};

Values run(const Circuit& c, const ArithLayout& al, std::uint64_t x, std::uint64_t y, std::uint64_t out,
           std::map<std::string, std::uint64_t> extra = {})
{
    const RegisterLayout& layout = al.circuit_layout;
    extra[al.x_reg.name] = x;
    extra[al.out_reg.name] = out;
    if (al.y_reg.width) {
        extra[al.y_reg.name] = y;
    }
    const std::size_t n = layout.num_qubits();
    const std::uint64_t r = reference::run_classical(c, reference::pack(layout, extra));
    return {reference::unpack(al.x_reg, n, r), al.y_reg.width ? reference::unpack(al.y_reg, n, r) : 0,
            reference::unpack(al.out_reg, n, r), reference::unpack(al.carry_reg, n, r), r};
}

} // namespace

TEST_SUITE("arith")
{
    TEST_CASE("adder examples")
    {
        auto [c, al] = build_adder(3);
        CHECK(run(c, al, 3, 0, 5).out == 8);
        CHECK(run(c, al, 0, 0, 13).out == 13);
        CHECK_THROWS_AS(build_adder(0), ArgumentError);
    }

    TEST_CASE("adder is exhaustive-exact")
    {
        for (std::size_t n = 1; n <= 4; ++n) {
            auto [c, al] = build_adder(n);
            const std::uint64_t mod = 1ULL << (n + 1);
            for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
                for (std::uint64_t s = 0; s < mod; ++s) {
                    const Values v = run(c, al, x, 0, s);
                    CHECK(v.x == x);
                    CHECK(v.out == (s + x) % mod);
                    CHECK(v.carry == 0);
                }
            }
        }
    }

    TEST_CASE("adder into a wider sum register")
    {
        const RegisterLayout layout({{"x", 3}, {"s", 6}, {"carry", 5}});
        Circuit c(layout);
        append_adder(c, layout["x"], layout["s"], layout["carry"]);
        const ArithLayout al{layout, layout["x"], {}, layout["s"], layout["carry"]};
        for (std::uint64_t x = 0; x < 8; ++x) {
            for (std::uint64_t s = 0; s < 64; ++s) {
                const Values v = run(c, al, x, 0, s);
                CHECK(v.out == (s + x) % 64);
                CHECK(v.carry == 0);
            }
        }
        Circuit bad(layout);
        CHECK_THROWS_AS(append_adder(bad, layout["s"], layout["x"], layout["carry"]), ArgumentError);
        CHECK_THROWS_AS(append_adder(bad, layout["x"], layout["s"], layout["carry"].slice(0, 4)), LayoutError);
    }

    TEST_CASE("controlled adder")
    {
        auto [c, al] = build_controlled_adder(3);
        for (std::uint64_t ctl = 0; ctl < 2; ++ctl) {
            for (std::uint64_t x = 0; x < 8; ++x) {
                for (std::uint64_t s = 0; s < 16; ++s) {
                    const Values v = run(c, al, x, 0, s, {{"ctrl", ctl}});
                    CHECK(v.out == (ctl ? (s + x) % 16 : s));
                    CHECK(v.x == x);
                    CHECK(v.carry == 0);
                }
            }
        }
        // Control in superposition entangles with the sum.
        const RegisterLayout& layout = al.circuit_layout;
        const std::size_t n = layout.num_qubits();
        const BasisIndex base = write_register(0, n, layout["x"], 1);
        QuantumState s = QuantumState::from_amplitudes(
            layout, {{base, 1.0}, {write_register(base, n, layout["ctrl"], 1), 1.0}});
        s.apply(c);
        const BasisIndex on = write_register(write_register(base, n, layout["ctrl"], 1), n, layout["s"], 1);
        CHECK(std::abs(s.amplitude(base) - 1.0 / std::sqrt(2.0)) < 1e-12);
        CHECK(std::abs(s.amplitude(on) - 1.0 / std::sqrt(2.0)) < 1e-12);
        CHECK(s.support_size() == 2);
    }

    TEST_CASE("multiplier is exhaustive-exact")
    {
        for (std::size_t n = 1; n <= 4; ++n) {
            auto [c, al] = build_multiplier(n);
            for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
                for (std::uint64_t y = 0; y < (1ULL << n); ++y) {
                    const Values v = run(c, al, x, y, 0);
                    CHECK(v.out == x * y);
                    CHECK(v.x == x);
                    CHECK(v.y == y);
                    CHECK(v.carry == 0);
                }
            }
        }
        auto [c4, al4] = build_multiplier(4);
        CHECK(run(c4, al4, 3, 5, 0).out == 15);
        CHECK(run(c4, al4, 9, 0, 0).out == 0);
    }

    TEST_CASE("multiplier on random 5-bit pairs")
    {
        auto [c, al] = build_multiplier(5);
        std::mt19937_64 rng(21);
        for (int i = 0; i < 10000; ++i) {
            const std::uint64_t x = rng() % 32;
            const std::uint64_t y = rng() % 32;
            const Values v = run(c, al, x, y, 0);
            CHECK(v.out == x * y);
            CHECK(v.carry == 0);
        }
    }

    TEST_CASE("multiplier layout checks")
    {
        const RegisterLayout layout({{"x", 3}, {"y", 2}, {"out", 6}, {"carry", 5}});
        CHECK_THROWS_AS(build_multiplier(layout, layout["x"], layout["y"], layout["out"], layout["carry"]),
                        LayoutError);
        CHECK(multiplier_carry_width(4) == 7);
        CHECK_THROWS_AS(build_multiplier(0), ArgumentError);
    }
}
