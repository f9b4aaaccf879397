#include "qbsc/grover.hpp"

#include "qbsc/comparator.hpp"
#include "qbsc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace qbsc {

namespace {

// Comparator registers hold a = reference, b = searched value.
ComparatorPredicate comparator_predicate_for(Relation relation)
{
    switch (relation) {
    case Relation::Greater: return ComparatorPredicate::LT;
    case Relation::Less: return ComparatorPredicate::GT;
    case Relation::Equal: return ComparatorPredicate::EQ;
    case Relation::LessEqual: return ComparatorPredicate::GEQ;
    case Relation::GreaterEqual: return ComparatorPredicate::LEQ;
    case Relation::NotEqual: return ComparatorPredicate::NEQ;
    }
    throw ArgumentError("unknown relation");
}

std::vector<std::uint64_t> unique_members(const std::vector<std::uint64_t>& members)
{
    std::set<std::uint64_t> s(members.begin(), members.end());
    return {s.begin(), s.end()};
}

void check_fits(std::uint64_t value, const Register& reg, const char* what)
{
    if (value > reg.max_value()) {
        throw LayoutError(std::string(what) + " " + std::to_string(value) + " does not fit register '" +
                          reg.name + "' of width " + std::to_string(reg.width));
    }
}

std::vector<Control> with_extra(std::vector<Control> controls, const std::vector<Control>& extra)
{
    controls.insert(controls.end(), extra.begin(), extra.end());
    return controls;
}

Circuit comparator_oracle(const predicates::Comparator& p, const RegisterLayout& layout, MarkingMode mode)
{
    const Register& compared = layout[p.compared_register];
    const Register& ref = layout[regs::ref];
    if (ref.width != compared.width) {
        throw LayoutError("reference register width differs from the compared register");
    }
    check_fits(p.reference, ref, "reference");
    const ComparatorLayout cl = make_comparator_layout(layout, regs::ref, p.compared_register, regs::cmp_out,
                                                       regs::cmp_anc);
    Circuit compute(layout);
    compute.load(ref, p.reference);
    compute.append(build_comparator(cl));

    Circuit member_compute(layout);
    std::vector<Control> extra;
    if (p.members) {
        const Qubit mq = layout[regs::member].qubit(0);
        for (auto v : unique_members(*p.members)) {
            check_fits(v, compared, "member");
            member_compute.mcx(value_controls(compared, v), mq);
        }
        extra.push_back(on_one(mq));
    }

    std::vector<std::vector<Control>> sets;
    for (auto& s : predicate_controls(cl, comparator_predicate_for(p.relation))) {
        sets.push_back(with_extra(std::move(s), extra));
    }

    Circuit c = compute;
    c.append(member_compute);
    append_mark(c, sets, mode);
    c.append(inverse(member_compute));
    c.append(inverse(compute));
    return c;
}

} // namespace

std::string to_string(Relation relation)
{
    switch (relation) {
    case Relation::Greater: return "greater";
    case Relation::Less: return "less";
    case Relation::Equal: return "equal";
    case Relation::LessEqual: return "less_equal";
    case Relation::GreaterEqual: return "greater_equal";
    case Relation::NotEqual: return "not_equal";
    }
    return "?";
}

Relation parse_relation(std::string_view name)
{
    for (auto r : {Relation::Greater, Relation::Less, Relation::Equal, Relation::LessEqual, Relation::GreaterEqual,
                   Relation::NotEqual}) {
        if (to_string(r) == name) {
            return r;
        }
    }
    throw ArgumentError("unknown relation '" + std::string(name) + "'");
}

bool relation_holds(Relation relation, std::uint64_t search_value, std::uint64_t reference)
{
    switch (relation) {
    case Relation::Greater: return search_value > reference;
    case Relation::Less: return search_value < reference;
    case Relation::Equal: return search_value == reference;
    case Relation::LessEqual: return search_value <= reference;
    case Relation::GreaterEqual: return search_value >= reference;
    case Relation::NotEqual: return search_value != reference;
    }
    throw ArgumentError("unknown relation");
}

bool is_marked(const OraclePredicate& predicate, std::uint64_t v)
{
    return std::visit(
        [v](const auto& p) -> bool {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, predicates::Comparator>) {
                if (p.compared_register != regs::search) {
                    throw ArgumentError("comparator on register '" + p.compared_register +
                                        "' has no classical check over the search register");
                }
                if (!relation_holds(p.relation, v, p.reference)) {
                    return false;
                }
                return !p.members || std::find(p.members->begin(), p.members->end(), v) != p.members->end();
            } else if constexpr (std::is_same_v<P, predicates::EqualConstant>) {
                return v == p.value;
            } else if constexpr (std::is_same_v<P, predicates::Odd>) {
                return (v & 1U) != 0;
            } else if constexpr (std::is_same_v<P, predicates::Membership>) {
                return std::find(p.members.begin(), p.members.end(), v) != p.members.end();
            } else if constexpr (std::is_same_v<P, predicates::BranchSelect>) {
                return v == (p.a > p.b ? p.s1 : p.s2);
            } else {
                return v < p.table.size() && p.table[v] == p.reference;
            }
        },
        predicate);
}

std::vector<RegisterSpec> oracle_workspace_specs(const OraclePredicate& predicate, std::size_t n)
{
    if (n == 0) {
        throw ArgumentError("search register needs at least one qubit");
    }
    std::vector<RegisterSpec> specs{{regs::search, n}};
    auto add_comparator = [&specs](std::size_t width) {
        for (auto& s : comparator_register_specs(width)) {
            specs.push_back(std::move(s));
        }
    };
    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, predicates::Comparator>) {
                specs.emplace_back(regs::ref, n);
                add_comparator(n);
                if (p.members) {
                    specs.emplace_back(regs::member, 1);
                }
            } else if constexpr (std::is_same_v<P, predicates::BranchSelect>) {
                specs.emplace_back(regs::cond_a, n);
                specs.emplace_back(regs::cond_b, n);
                add_comparator(n);
            } else if constexpr (std::is_same_v<P, predicates::FunctionZero>) {
                if (p.out_width == 0) {
                    throw ArgumentError("function output width must be at least 1");
                }
                specs.emplace_back(regs::fn_out, p.out_width);
                specs.emplace_back(regs::ref, p.out_width);
                add_comparator(p.out_width);
            }
        },
        predicate);
    specs.emplace_back(regs::flip, 1);
    return specs;
}

RegisterLayout oracle_workspace(const OraclePredicate& predicate, std::size_t search_width)
{
    return RegisterLayout(oracle_workspace_specs(predicate, search_width));
}

Circuit build_oracle_inputs(const OraclePredicate& predicate, const RegisterLayout& layout)
{
    Circuit c(layout);
    if (const auto* p = std::get_if<predicates::BranchSelect>(&predicate)) {
        c.load(layout[regs::cond_a], p->a);
        c.load(layout[regs::cond_b], p->b);
    }
    return c;
}

void append_mark(Circuit& circuit, const std::vector<std::vector<Control>>& control_sets, MarkingMode mode)
{
    for (const auto& controls : control_sets) {
        if (controls.empty()) {
            throw CircuitError("mark needs at least one control");
        }
        if (mode == MarkingMode::Kickback) {
            circuit.mcx(controls, circuit.reg(regs::flip).qubit(0));
            continue;
        }
        // Controlled-Z with the last control acting as the target.
        const Control pivot = controls.back();
        const std::vector<Control> rest(controls.begin(), controls.end() - 1);
        if (pivot.polarity == Polarity::OnZero) {
            circuit.x(pivot.qubit);
        }
        if (rest.empty()) {
            circuit.z(pivot.qubit);
        } else {
            circuit.h(pivot.qubit);
            circuit.mcx(rest, pivot.qubit);
            circuit.h(pivot.qubit);
        }
        if (pivot.polarity == Polarity::OnZero) {
            circuit.x(pivot.qubit);
        }
    }
}

Circuit build_oracle(const OraclePredicate& predicate, const RegisterLayout& layout, MarkingMode mode)
{
    // A comparator may target another register, so the search register is optional here.
    const Register search = layout.contains(regs::search) ? layout[regs::search] : Register{};
    return std::visit(
        [&](const auto& p) -> Circuit {
            using P = std::decay_t<decltype(p)>;
            Circuit c(layout);
            if constexpr (std::is_same_v<P, predicates::Comparator>) {
                return comparator_oracle(p, layout, mode);
            } else if constexpr (std::is_same_v<P, predicates::EqualConstant>) {
                check_fits(p.value, search, "value");
                append_mark(c, {value_controls(search, p.value)}, mode);
            } else if constexpr (std::is_same_v<P, predicates::Odd>) {
                append_mark(c, {{on_one(search.bit(0))}}, mode);
            } else if constexpr (std::is_same_v<P, predicates::Membership>) {
                std::vector<std::vector<Control>> sets;
                for (auto v : unique_members(p.members)) {
                    check_fits(v, search, "member");
                    sets.push_back(value_controls(search, v));
                }
                append_mark(c, sets, mode);
            } else if constexpr (std::is_same_v<P, predicates::BranchSelect>) {
                check_fits(p.s1, search, "S1");
                check_fits(p.s2, search, "S2");
                const ComparatorLayout cl =
                    make_comparator_layout(layout, regs::cond_a, regs::cond_b, regs::cmp_out, regs::cmp_anc);
                const Circuit compute = build_comparator(cl);
                c.append(compute);
                append_mark(c,
                            {with_extra(value_controls(search, p.s1), {on_one(cl.o1)}),
                             with_extra(value_controls(search, p.s2), {on_zero(cl.o1)})},
                            mode);
                c.append(inverse(compute));
            } else {
                const Register& out = layout[regs::fn_out];
                const Register& ref = layout[regs::ref];
                check_fits(p.reference, ref, "reference");
                Circuit compute = lift_function(layout, p.table, search, out);
                compute.load(ref, p.reference);
                const ComparatorLayout cl =
                    make_comparator_layout(layout, regs::ref, regs::fn_out, regs::cmp_out, regs::cmp_anc);
                compute.append(build_comparator(cl));
                c.append(compute);
                append_mark(c, predicate_controls(cl, ComparatorPredicate::EQ), mode);
                c.append(inverse(compute));
            }
            return c;
        },
        predicate);
}

Circuit uniform_preparation(const RegisterLayout& layout, const Register& search)
{
    Circuit c(layout);
    for (std::size_t i = 0; i < search.width; ++i) {
        c.h(search.qubit(i));
    }
    return c;
}

Circuit build_diffusion(const Register& search, const Circuit& prepare)
{
    Circuit c = inverse(prepare);
    std::vector<Control> all_zero;
    for (std::size_t i = 0; i < search.width; ++i) {
        all_zero.push_back(on_zero(search.qubit(i)));
    }
    // I - 2|0><0| on the search register ...
    append_mark(c, {all_zero}, MarkingMode::PhaseFlip);
    // ... times -1 (X Z X Z = -I) gives 2|0><0| - I.
    const Qubit q = search.qubit(0);
    c.x(q).z(q).x(q).z(q);
    c.append(prepare);
    return c;
}

IterationPlan plan_iterations(std::uint64_t search_space, std::uint64_t marked)
{
    if (marked == 0) {
        throw PlanningError("no marked states: Grover search has nothing to amplify");
    }
    if (marked > search_space) {
        throw ArgumentError("marked count exceeds the search space");
    }
    return plan_iterations_for_mass(static_cast<double>(marked) / static_cast<double>(search_space));
}

IterationPlan plan_iterations_for_mass(double p)
{
    if (!(p > 0.0)) {
        throw PlanningError("initial marked mass is zero: nothing to amplify");
    }
    if (p > 1.0 + 1e-12) {
        throw ArgumentError("initial marked mass exceeds 1");
    }
    const double theta = std::asin(std::sqrt(std::min(p, 1.0)));
    const double x = std::numbers::pi / (4.0 * theta) - 0.5;
    // Round half toward fewer iterations; the slack absorbs asin rounding at exact ties.
    const double k = x <= 0.0 ? 0.0 : std::max(0.0, std::ceil(x - 0.5 - 1e-9));
    IterationPlan plan;
    plan.iterations = static_cast<std::size_t>(k);
    plan.theta = theta;
    const double s = std::sin((2.0 * k + 1.0) * theta);
    plan.predicted_success = s * s;
    return plan;
}

GroverEngine::GroverEngine(GroverPlan plan)
    : plan_(std::move(plan)),
      search_(plan_.layout[plan_.search_reg]),
      oracle_(build_oracle(plan_.oracle, plan_.layout, plan_.mode)),
      initial_(QuantumState::zero(plan_.layout))
{
    Circuit flip_prep(plan_.layout);
    if (plan_.mode == MarkingMode::Kickback) {
        const Qubit f = plan_.layout[regs::flip].qubit(0);
        flip_prep.x(f).h(f);
    }
    if (plan_.prepared_state) {
        if (plan_.prepared_state->layout() != plan_.layout) {
            throw LayoutError("prepared state layout differs from the plan layout");
        }
        initial_ = *plan_.prepared_state;
        initial_.apply(flip_prep);
        return;
    }
    if (plan_.inputs) {
        initial_.apply(*plan_.inputs);
    }
    initial_.apply(flip_prep);
    const Circuit prepare = plan_.prepare ? *plan_.prepare : uniform_preparation(plan_.layout, search_);
    initial_.apply(prepare);
    diffusion_ = build_diffusion(search_, prepare);
}

void GroverEngine::step(QuantumState& state) const
{
    state.apply(oracle_);
    if (diffusion_) {
        state.apply(*diffusion_);
    } else {
        state.reflect_about(initial_);
    }
}

GroverRun GroverEngine::run(std::size_t iterations) const
{
    QuantumState state = initial_;
    for (std::size_t k = 0; k < iterations; ++k) {
        step(state);
    }
    return finish(std::move(state));
}

bool GroverEngine::marked(std::uint64_t value) const
{
    return plan_.marked ? plan_.marked(value) : is_marked(plan_.oracle, value);
}

GroverRun GroverEngine::finish(QuantumState state) const
{
    MeasurementDistribution d = marginal_distribution(state, search_);
    double mass = 0.0;
    for (const auto& [v, p] : d.entries) {
        if (marked(v)) {
            mass += p;
        }
    }
    return {std::move(state), std::move(d), mass};
}

GroverRun run_grover(const GroverPlan& plan)
{
    return GroverEngine(plan).run(plan.iterations);
}

BbhtResult run_bbht(const GroverPlan& plan, std::uint64_t seed, std::size_t max_rounds, double growth)
{
    if (growth <= 1.0) {
        throw ArgumentError("growth factor must exceed 1");
    }
    const GroverEngine engine(plan);
    const double space = std::ldexp(1.0, static_cast<int>(plan.layout[plan.search_reg].width));
    const auto cap = static_cast<std::size_t>(std::ceil(std::sqrt(space)));

    std::mt19937_64 rng(seed);
    std::vector<QuantumState> trajectory{engine.initial_state()};
    BbhtResult result;
    double bound = 1.0;
    for (std::size_t r = 0; r < max_rounds; ++r) {
        const std::size_t upper = std::min(static_cast<std::size_t>(std::ceil(bound)), cap);
        bound *= growth;
        const std::size_t k = static_cast<std::size_t>(rng() % (upper + 1));
        while (trajectory.size() <= k) {
            QuantumState next = trajectory.back();
            engine.step(next);
            trajectory.push_back(std::move(next));
        }
        const auto d = marginal_distribution(trajectory[k], plan.layout[plan.search_reg]);
        const std::uint64_t outcome = sample(d, rng(), 1).begin()->first;
        result.rounds = r + 1;
        result.iteration_counts.push_back(k);
        if (engine.marked(outcome)) {
            result.outcome = outcome;
            return result;
        }
    }
    return result;
}

} // namespace qbsc
