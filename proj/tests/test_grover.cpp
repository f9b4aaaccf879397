#include "qbsc/errors.hpp"
#include "qbsc/grover.hpp"

#include "reference_sim.hpp"

#include <doctest.h>

#include <numbers>
#include <random>
#include <set>

using namespace qbsc;

namespace {

double sin2_law(std::size_t k, double theta)
{
    const double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * theta);
    return s * s;
}

GroverPlan plan_for(const OraclePredicate& pred, std::size_t n, MarkingMode mode = MarkingMode::Kickback)
{
    GroverPlan plan;
    plan.layout = oracle_workspace(pred, n);
    plan.oracle = pred;
    plan.mode = mode;
    plan.inputs = build_oracle_inputs(pred, plan.layout);
    return plan;
}

std::vector<std::uint64_t> random_subset(std::mt19937_64& rng, std::uint64_t space, std::size_t m)
{
    std::set<std::uint64_t> chosen;
    while (chosen.size() < m) {
        chosen.insert(rng() % space);
    }
    return {chosen.begin(), chosen.end()};
}

// Applies the kickback oracle to one search value; returns whether the flip
// qubit toggled, and checks every other qubit is restored.
bool kickback_flips(const OraclePredicate& pred, std::size_t n, std::uint64_t v)
{
    const RegisterLayout layout = oracle_workspace(pred, n);
    Circuit c = build_oracle_inputs(pred, layout);
    const std::uint64_t loaded = reference::run_classical(c, reference::pack(layout, {{regs::search, v}}));
    const std::uint64_t out = reference::run_classical(build_oracle(pred, layout), loaded);
    const std::uint64_t flip = reference::qubit_bit(layout.num_qubits(), layout[regs::flip].qubit(0));
    CHECK((out & ~flip) == (loaded & ~flip));
    return out != loaded;
}

} // namespace

TEST_SUITE("grover")
{
    TEST_CASE("iteration planning")
    {
        const IterationPlan p81 = plan_iterations(8, 1);
        CHECK(p81.iterations == 2);
        CHECK(p81.predicted_success == doctest::Approx(sin2_law(2, std::asin(std::sqrt(1.0 / 8)))).epsilon(1e-12));
        CHECK(std::abs(p81.predicted_success - 0.9453) < 1e-4);
        const IterationPlan p41 = plan_iterations(4, 1);
        CHECK(p41.iterations == 1);
        CHECK(p41.predicted_success == doctest::Approx(1.0).epsilon(1e-12));
        const IterationPlan p168 = plan_iterations(16, 8);
        CHECK(p168.iterations == 0);
        CHECK(p168.predicted_success == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(plan_iterations(16, 16).iterations == 0);
        CHECK(plan_iterations(1 << 10, 1).iterations == 25);
        CHECK_THROWS_AS(plan_iterations(8, 0), PlanningError);
        CHECK_THROWS_AS(plan_iterations(8, 9), ArgumentError);
        CHECK_THROWS_AS(plan_iterations_for_mass(0.0), PlanningError);
    }

    TEST_CASE("relations")
    {
        CHECK(parse_relation("greater") == Relation::Greater);
        CHECK(to_string(Relation::LessEqual) == "less_equal");
        CHECK_THROWS_AS(parse_relation("bigger"), ArgumentError);
        CHECK(relation_holds(Relation::Greater, 8, 7));
        CHECK_FALSE(relation_holds(Relation::Greater, 7, 7));
        CHECK(relation_holds(Relation::NotEqual, 1, 7));
    }

    TEST_CASE("oracles mark exactly the classical solution sets")
    {
        std::mt19937_64 rng(6);
        for (std::size_t n = 1; n <= 5; ++n) {
            const std::uint64_t space = 1ULL << n;
            std::vector<OraclePredicate> preds{predicates::Odd{},
                                               predicates::EqualConstant{rng() % space},
                                               predicates::Membership{random_subset(rng, space, 1 + rng() % space)},
                                               predicates::BranchSelect{rng() % space, rng() % space,
                                                                        rng() % space, rng() % space}};
            for (Relation rel : {Relation::Greater, Relation::Less, Relation::Equal, Relation::LessEqual,
                                 Relation::GreaterEqual, Relation::NotEqual}) {
                preds.push_back(predicates::Comparator{rng() % space, rel, std::nullopt, regs::search});
            }
            preds.push_back(predicates::Comparator{rng() % space, Relation::LessEqual,
                                                   random_subset(rng, space, 1 + rng() % space), regs::search});
            std::vector<std::uint64_t> table(space);
            for (auto& t : table) {
                t = rng() % 4;
            }
            preds.push_back(predicates::FunctionZero{table, 2, rng() % 4});
            for (const auto& pred : preds) {
                for (std::uint64_t v = 0; v < space; ++v) {
                    CHECK(kickback_flips(pred, n, v) == is_marked(pred, v));
                }
            }
        }
        std::set<std::uint64_t> greater;
        for (std::uint64_t v = 0; v < 16; ++v) {
            if (kickback_flips(predicates::Comparator{7, Relation::Greater, std::nullopt, regs::search}, 4, v)) {
                greater.insert(v);
            }
        }
        CHECK(greater == std::set<std::uint64_t>{8, 9, 10, 11, 12, 13, 14, 15});
    }

    TEST_CASE("phase-flip oracle negates marked amplitudes only")
    {
        const OraclePredicate pred = predicates::Comparator{5, Relation::Less, std::nullopt, regs::search};
        const RegisterLayout layout = oracle_workspace(pred, 3);
        QuantumState s = QuantumState::zero(layout);
        s.apply(uniform_preparation(layout, layout[regs::search]));
        s.apply(build_oracle(pred, layout, MarkingMode::PhaseFlip));
        for (std::uint64_t v = 0; v < 8; ++v) {
            const BasisIndex idx = write_register(0, layout.num_qubits(), layout[regs::search], v);
            const double expected = (v < 5 ? -1.0 : 1.0) / std::sqrt(8.0);
            CHECK(std::abs(s.amplitude(idx) - expected) < 1e-12);
        }
    }

    TEST_CASE("diffusion is the inversion about the mean")
    {
        const RegisterLayout layout({{regs::search, 2}});
        const Register& search = layout[regs::search];
        const Circuit d = build_diffusion(search, uniform_preparation(layout, search));
        for (std::uint64_t col = 0; col < 4; ++col) {
            reference::DenseSim sim(2, col);
            sim.apply(d);
            QuantumState s = basis_state(layout, {{regs::search, col}});
            s.apply(d);
            for (std::uint64_t row = 0; row < 4; ++row) {
                const double expected = 0.5 - (row == col ? 1.0 : 0.0);
                CHECK(std::abs(sim[row] - expected) < 1e-12);
                CHECK(std::abs(s.amplitude(row) - expected) < 1e-12);
            }
        }
        QuantumState u = QuantumState::zero(layout);
        u.apply(uniform_preparation(layout, search));
        QuantumState v = u;
        v.apply(d);
        CHECK(std::abs(inner_product(u, v) - 1.0) < 1e-12);
    }

    TEST_CASE("textbook exact case and full marking")
    {
        GroverPlan plan = plan_for(predicates::EqualConstant{2}, 2);
        plan.iterations = 1;
        CHECK(run_grover(plan).marked_mass == doctest::Approx(1.0).epsilon(1e-12));

        GroverPlan p5 = plan_for(predicates::EqualConstant{5}, 3);
        p5.iterations = 2;
        const GroverRun r5 = run_grover(p5);
        CHECK(std::abs(r5.marked_mass - plan_iterations(8, 1).predicted_success) < 1e-9);
        CHECK(std::abs(r5.distribution.probability(5) - 0.9453) < 1e-4);

        std::vector<std::uint64_t> all(8);
        for (std::uint64_t v = 0; v < 8; ++v) {
            all[v] = v;
        }
        GroverPlan full = plan_for(predicates::Membership{all}, 3);
        full.iterations = 3;
        CHECK(run_grover(full).marked_mass == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("marked mass follows the sin^2 law")
    {
        std::mt19937_64 rng(31);
        for (std::size_t n = 1; n <= 8; ++n) {
            const std::uint64_t space = 1ULL << n;
            std::set<std::uint64_t> counts{1, 2, 4, space / 2};
            for (std::uint64_t m : counts) {
                if (m == 0 || m > space) {
                    continue;
                }
                const auto marked = random_subset(rng, space, m);
                const GroverEngine engine(plan_for(predicates::Membership{marked}, n));
                const double theta = std::asin(std::sqrt(static_cast<double>(m) / static_cast<double>(space)));
                QuantumState s = engine.initial_state();
                for (std::size_t k = 0; k <= 10; ++k) {
                    const GroverRun r = engine.finish(s);
                    CHECK(std::abs(r.marked_mass - sin2_law(k, theta)) < 1e-9);
                    // Marked states share the marked mass evenly.
                    for (auto v : marked) {
                        CHECK(std::abs(r.distribution.probability(v) - r.marked_mass / static_cast<double>(m)) < 1e-9);
                    }
                    engine.step(s);
                }
            }
        }
    }

    TEST_CASE("kickback and phase-flip give the same search state")
    {
        const std::vector<OraclePredicate> preds{
            predicates::Comparator{9, Relation::Greater, std::nullopt, regs::search},
            predicates::Comparator{6, Relation::LessEqual, std::vector<std::uint64_t>{3, 9, 12, 5}, regs::search},
            predicates::BranchSelect{2, 7, 3, 12},
            predicates::Membership{{1, 14}},
        };
        for (const auto& pred : preds) {
            for (std::size_t k = 0; k <= 4; ++k) {
                GroverPlan kick = plan_for(pred, 4, MarkingMode::Kickback);
                GroverPlan phase = plan_for(pred, 4, MarkingMode::PhaseFlip);
                kick.iterations = phase.iterations = k;
                QuantumState a = run_grover(kick).state;
                const QuantumState b = run_grover(phase).state;
                const Qubit f = kick.layout[regs::flip].qubit(0);
                a.apply(Gate::h(f));
                a.apply(Gate::x(f));
                CHECK(fidelity(a, b) == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(std::abs(inner_product(a, b) - 1.0) < 1e-10);
            }
        }
    }

    TEST_CASE("amplification with a non-uniform preparation")
    {
        std::mt19937_64 rng(13);
        const OraclePredicate pred = predicates::Membership{{2, 7, 11}};
        for (int trial = 0; trial < 5; ++trial) {
            GroverPlan plan = plan_for(pred, 4);
            const RegisterLayout only_search({{regs::search, 4}});
            const Circuit local = reference::random_circuit(rng, only_search, 30);
            Circuit prepare(plan.layout);
            for (const Gate& g : local.gates()) {
                prepare.append(g);
            }
            plan.prepare = prepare;
            const GroverEngine engine(plan);
            QuantumState s = engine.initial_state();
            const double p0 = engine.finish(s).marked_mass;
            if (p0 < 1e-6) {
                continue;
            }
            const double theta = std::asin(std::sqrt(p0));
            for (std::size_t k = 0; k <= 6; ++k) {
                CHECK(std::abs(engine.finish(s).marked_mass - sin2_law(k, theta)) < 1e-9);
                engine.step(s);
            }

            // Same trajectory when the prepared state is given directly.
            GroverPlan direct = plan_for(pred, 4);
            QuantumState prepared = QuantumState::zero(plan.layout);
            prepared.apply(prepare);
            direct.prepared_state = prepared;
            direct.iterations = 3;
            plan.iterations = 3;
            CHECK(std::abs(run_grover(direct).marked_mass - run_grover(plan).marked_mass) < 1e-10);
        }
    }

    TEST_CASE("randomized schedule")
    {
        const GroverPlan none = plan_for(predicates::Membership{{}}, 4);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const BbhtResult r = run_bbht(none, seed, 10);
            CHECK_FALSE(r.outcome.has_value());
            CHECK(r.rounds == 10);
        }
        std::vector<std::uint64_t> all(16);
        for (std::uint64_t v = 0; v < 16; ++v) {
            all[v] = v;
        }
        const BbhtResult full = run_bbht(plan_for(predicates::Membership{all}, 4), 3);
        CHECK(full.rounds == 1);
        REQUIRE(full.outcome.has_value());

        std::mt19937_64 rng(7);
        const auto marked = random_subset(rng, 64, 3);
        const GroverPlan plan = plan_for(predicates::Membership{marked}, 6);
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const BbhtResult r = run_bbht(plan, seed);
            if (r.outcome) {
                CHECK(std::find(marked.begin(), marked.end(), *r.outcome) != marked.end());
                ++hits;
            }
            for (std::size_t i = 0; i < r.iteration_counts.size(); ++i) {
                CHECK(r.iteration_counts[i] <= std::min<std::size_t>(
                                                   static_cast<std::size_t>(std::ceil(std::pow(1.2, i))), 8));
            }
        }
        CHECK(hits >= 99);
        CHECK(run_bbht(plan, 42).iteration_counts == run_bbht(plan, 42).iteration_counts);
        CHECK_THROWS_AS(run_bbht(plan, 1, 5, 1.0), ArgumentError);
    }
}
