#include "qbsc/comparator.hpp"
#include "qbsc/errors.hpp"
#include "qbsc/state.hpp"

#include "reference_sim.hpp"

#include <doctest.h>

#include <random>

using namespace qbsc;

namespace {

struct Readout {
    std::uint64_t a;
    std::uint64_t b;
    std::uint64_t out;
};

Readout run_basis(const Circuit& c, const ComparatorLayout& cl, std::uint64_t a, std::uint64_t b)
{
    const RegisterLayout& layout = cl.circuit_layout;
    const std::uint64_t in = reference::pack(layout, {{cl.a_reg.name, a}, {cl.b_reg.name, b}});
    const std::uint64_t out = reference::run_classical(c, in);
    const std::size_t n = layout.num_qubits();
    return {reference::unpack(cl.a_reg, n, out), reference::unpack(cl.b_reg, n, out),
            reference::unpack(cl.out_reg, n, out)};
}

std::uint64_t expected_outputs(ComparatorOutcome o)
{
    switch (o) {
    case ComparatorOutcome::GT: return 0b10;
    case ComparatorOutcome::LT: return 0b01;
    case ComparatorOutcome::EQ: return 0b00;
    }
    return 0b11;
}

constexpr ComparatorPredicate kAllPredicates[] = {ComparatorPredicate::GT,  ComparatorPredicate::LT,
                                                  ComparatorPredicate::EQ,  ComparatorPredicate::LEQ,
                                                  ComparatorPredicate::GEQ, ComparatorPredicate::NEQ};

struct FlipFixture {
    RegisterLayout layout;
    ComparatorLayout cl;
    Qubit flip;
};

FlipFixture flip_fixture(std::size_t n)
{
    std::vector<RegisterSpec> specs{{"a", n}, {"b", n}};
    for (auto& s : comparator_register_specs(n)) {
        specs.push_back(s);
    }
    specs.emplace_back("flip", 1);
    RegisterLayout layout(specs);
    ComparatorLayout cl = make_comparator_layout(layout, "a", "b", "cmp_out", "cmp_anc");
    const Qubit flip = layout["flip"].qubit(0);
    return {std::move(layout), std::move(cl), flip};
}

} // namespace

TEST_SUITE("comparator")
{
    TEST_CASE("classical comparison")
    {
        CHECK(compare_classical(2, 0, 2) == ComparatorOutcome::GT);
        CHECK(compare_classical(0, 1, 2) == ComparatorOutcome::LT);
        CHECK(compare_classical(5, 5, 3) == ComparatorOutcome::EQ);
        CHECK_THROWS_AS(compare_classical(4, 0, 2), ArgumentError);
        CHECK(parse_comparator_predicate("LEQ") == ComparatorPredicate::LEQ);
        CHECK_THROWS_AS(parse_comparator_predicate("XYZ"), ArgumentError);
    }

    TEST_CASE("unit cell truth table")
    {
        auto [full, cl] = build_comparator(3);
        for (std::size_t pos = 0; pos < 3; ++pos) {
            const Circuit cell = build_unit_cell(pos, cl);
            for (int ai = 0; ai < 2; ++ai) {
                for (int bi = 0; bi < 2; ++bi) {
                    // Bit `pos` counted from the most significant end.
                    const std::uint64_t a = static_cast<std::uint64_t>(ai) << (2 - pos);
                    const std::uint64_t b = static_cast<std::uint64_t>(bi) << (2 - pos);
                    const std::uint64_t in = reference::pack(cl.circuit_layout, {{"a", a}, {"b", b}});
                    const std::uint64_t out = reference::run_classical(cell, in);
                    const std::size_t n = cl.circuit_layout.num_qubits();
                    const bool g = out & reference::qubit_bit(n, cl.greater_flag(pos));
                    const bool l = out & reference::qubit_bit(n, cl.less_flag(pos));
                    CHECK(g == (ai == 1 && bi == 0));
                    CHECK(l == (ai == 0 && bi == 1));
                }
            }
        }
        CHECK_THROWS_AS(build_unit_cell(3, cl), ArgumentError);
    }

    TEST_CASE("exhaustive equivalence with classical comparison")
    {
        for (std::size_t n = 1; n <= 4; ++n) {
            auto [c, cl] = build_comparator(n);
            CHECK(cl.ancilla_count <= 3 * n + 1);
            CHECK(cl.ancilla_count == 3 * n + 1);
            for (std::uint64_t a = 0; a < (1ULL << n); ++a) {
                for (std::uint64_t b = 0; b < (1ULL << n); ++b) {
                    const Readout r = run_basis(c, cl, a, b);
                    CHECK(r.a == a);
                    CHECK(r.b == b);
                    CHECK(r.out == expected_outputs(compare_classical(a, b, n)));
                }
            }
        }
    }

    TEST_CASE("random pairs at wider widths")
    {
        std::mt19937_64 rng(17);
        for (std::size_t n = 5; n <= 6; ++n) {
            auto [c, cl] = build_comparator(n);
            for (int i = 0; i < 10000; ++i) {
                const std::uint64_t a = rng() % (1ULL << n);
                const std::uint64_t b = rng() % (1ULL << n);
                CHECK(run_basis(c, cl, a, b).out == expected_outputs(compare_classical(a, b, n)));
            }
        }
    }

    TEST_CASE("superposed inputs match the comparator truth table")
    {
        struct Column {
            std::uint64_t a;
            std::uint64_t b_alpha;
            std::uint64_t b_beta;
            // P(O1 = 1) and P(O2 = 1) as c0 + c_alpha |alpha|^2 + c_beta |beta|^2.
            double o1[3];
            double o2[3];
        };
        const Column columns[] = {
            {0b10, 0b00, 0b01, {1, 0, 0}, {0, 0, 0}},
            {0b00, 0b01, 0b10, {0, 0, 0}, {1, 0, 0}},
            {0b10, 0b00, 0b11, {0, 1, 0}, {0, 0, 1}},
            {0b11, 0b01, 0b11, {0, 1, 0}, {0, 0, 0}},
            {0b01, 0b01, 0b11, {0, 0, 0}, {0, 0, 1}},
        };
        auto [c, cl] = build_comparator(2);
        const std::size_t n = cl.circuit_layout.num_qubits();
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
        for (const auto& col : columns) {
            for (int trial = 0; trial < 20; ++trial) {
                const double t = angle(rng) / 4.0;
                const Amplitude alpha = std::polar(std::cos(t), angle(rng));
                const Amplitude beta = std::polar(std::sin(t), angle(rng));
                const BasisIndex base = write_register(0, n, cl.a_reg, col.a);
                QuantumState s = QuantumState::from_amplitudes(
                    cl.circuit_layout, {{write_register(base, n, cl.b_reg, col.b_alpha), alpha},
                                        {write_register(base, n, cl.b_reg, col.b_beta), beta}});
                s.apply(c);
                const double pa = std::norm(alpha);
                const double pb = std::norm(beta);
                const double o1 = marginal_distribution(s, cl.o1_register()).probability(1);
                const double o2 = marginal_distribution(s, cl.o2_register()).probability(1);
                CHECK(std::abs(o1 - (col.o1[0] + col.o1[1] * pa + col.o1[2] * pb)) < 1e-12);
                CHECK(std::abs(o2 - (col.o2[0] + col.o2[1] * pa + col.o2[2] * pb)) < 1e-12);
            }
        }
    }

    TEST_CASE("predicate flips touch only the flip target")
    {
        for (std::size_t n = 1; n <= 3; ++n) {
            const FlipFixture f = flip_fixture(n);
            const std::size_t total = f.layout.num_qubits();
            for (auto pred : kAllPredicates) {
                const Circuit c = build_predicate_flip(f.cl, pred, f.flip);
                for (std::uint64_t a = 0; a < (1ULL << n); ++a) {
                    for (std::uint64_t b = 0; b < (1ULL << n); ++b) {
                        const std::uint64_t in = reference::pack(f.layout, {{"a", a}, {"b", b}});
                        const std::uint64_t out = reference::run_classical(c, in);
                        const bool holds = predicate_holds(pred, compare_classical(a, b, n));
                        CHECK(out == (holds ? in ^ reference::qubit_bit(total, f.flip) : in));
                    }
                }
            }
        }
    }

    TEST_CASE("GT, LT and EQ partition every reference; LEQ is LT or EQ")
    {
        const std::size_t n = 4;
        const FlipFixture f = flip_fixture(n);
        std::map<ComparatorPredicate, Circuit> circuits;
        for (auto pred : kAllPredicates) {
            circuits.emplace(pred, build_predicate_flip(f.cl, pred, f.flip));
        }
        auto flips = [&](ComparatorPredicate p, std::uint64_t a, std::uint64_t b) {
            const std::uint64_t in = reference::pack(f.layout, {{"a", a}, {"b", b}});
            return reference::run_classical(circuits.at(p), in) != in;
        };
        for (std::uint64_t a = 0; a < 16; ++a) {
            for (std::uint64_t b = 0; b < 16; ++b) {
                const int count = flips(ComparatorPredicate::GT, a, b) + flips(ComparatorPredicate::LT, a, b) +
                                  flips(ComparatorPredicate::EQ, a, b);
                CHECK(count == 1);
                CHECK(flips(ComparatorPredicate::LEQ, a, b) ==
                      (flips(ComparatorPredicate::LT, a, b) || flips(ComparatorPredicate::EQ, a, b)));
                CHECK(flips(ComparatorPredicate::NEQ, a, b) == !flips(ComparatorPredicate::EQ, a, b));
            }
        }
    }

    TEST_CASE("ancillas return to zero on superposed inputs")
    {
        const FlipFixture f = flip_fixture(3);
        std::mt19937_64 rng(12);
        std::normal_distribution<double> g;
        const Circuit c = build_predicate_flip(f.cl, ComparatorPredicate::LEQ, f.flip);
        const std::size_t total = f.layout.num_qubits();
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<BasisAmplitude> amps;
            for (std::uint64_t a = 0; a < 8; ++a) {
                for (std::uint64_t b = 0; b < 8; ++b) {
                    BasisIndex idx = write_register(0, total, f.layout["a"], a);
                    amps.push_back({write_register(idx, total, f.layout["b"], b), {g(rng), g(rng)}});
                }
            }
            QuantumState s = QuantumState::from_amplitudes(f.layout, amps);
            s.apply(c);
            for (Qubit q : f.cl.ancillas) {
                CHECK(marginal_distribution(s, Register{"q", q, 1}).probability(0) ==
                      doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("layout errors")
    {
        const FlipFixture f = flip_fixture(2);
        CHECK_THROWS_AS(build_predicate_flip(f.cl, ComparatorPredicate::EQ, f.cl.o1), LayoutError);
        CHECK_THROWS_AS(build_predicate_flip(f.cl, ComparatorPredicate::EQ, f.layout["a"].qubit(0)), LayoutError);
        const RegisterLayout small({{"a", 2}, {"b", 2}, {"o", 2}, {"w", 3}});
        const ComparatorLayout cramped = make_comparator_layout(small, "a", "b", "o", "w");
        CHECK_THROWS_AS(build_comparator(cramped), LayoutError);
    }
}
