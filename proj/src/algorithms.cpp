#include "qbsc/algorithms.hpp"

#include "qbsc/arith.hpp"
#include "qbsc/comparator.hpp"
#include "qbsc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace qbsc {

namespace {

constexpr std::size_t kMaxSearchWidth = 16;

void check_width(std::size_t n)
{
    if (n == 0 || n > kMaxSearchWidth) {
        throw ArgumentError("width n must be between 1 and " + std::to_string(kMaxSearchWidth));
    }
}

void check_value(std::uint64_t v, std::size_t n, const char* name)
{
    if (v >> n) {
        throw ArgumentError(std::string(name) + " = " + std::to_string(v) + " does not fit in " +
                            std::to_string(n) + " bits");
    }
}

// Undo X;H on the flip qubit and keep the search-register amplitudes of the
// component with every other register in |0>.
QuantumState extract_search_register(QuantumState state, std::size_t n)
{
    const RegisterLayout& layout = state.layout();
    if (layout.contains(regs::flip)) {
        const Qubit f = layout[regs::flip].qubit(0);
        state.apply(Gate::h(f));
        state.apply(Gate::x(f));
    }
    const Register& search = layout[regs::search];
    std::vector<BasisAmplitude> kept;
    for (const auto& e : state.entries()) {
        const std::uint64_t v = read_register(e.index, state.num_qubits(), search);
        if (write_register(e.index, state.num_qubits(), search, 0) == 0) {
            kept.push_back({v, e.amplitude});
        }
    }
    return QuantumState::from_amplitudes(RegisterLayout({{"q", n}}), std::move(kept));
}

void check_odd_candidate(std::uint64_t a)
{
    if (a < 3) {
        throw ArgumentError("a must be at least 3");
    }
    if (a % 2 == 0) {
        throw ArgumentError("a must be odd");
    }
}

} // namespace

SearchReport amplify(const OraclePredicate& predicate, std::size_t n, std::optional<std::size_t> iterations,
                     MarkingMode mode)
{
    SearchReport report;
    const std::uint64_t space = std::uint64_t{1} << n;
    for (std::uint64_t v = 0; v < space; ++v) {
        if (is_marked(predicate, v)) {
            report.marked.push_back(v);
        }
    }
    report.solution_found = !report.marked.empty();
    if (report.solution_found) {
        const IterationPlan plan = plan_iterations(space, report.marked.size());
        report.iterations = iterations.value_or(plan.iterations);
        const double s = std::sin((2.0 * static_cast<double>(report.iterations) + 1.0) * plan.theta);
        report.predicted_mass = s * s;
    } else {
        // The oracle is the identity; the state stays the unamplified database.
        report.iterations = iterations.value_or(0);
    }

    GroverPlan gp;
    gp.layout = oracle_workspace(predicate, n);
    gp.oracle = predicate;
    gp.iterations = report.iterations;
    if (report.solution_found) {
        gp.marked_count_hint = report.marked.size();
    }
    gp.mode = mode;
    gp.inputs = build_oracle_inputs(predicate, gp.layout);
    GroverRun run = run_grover(gp);
    report.marked_mass = run.marked_mass;
    if (report.solution_found) {
        report.best_outcome = run.distribution.most_likely();
    }
    report.distribution = std::move(run.distribution);
    return report;
}

SearchReport threshold_search(std::size_t n, std::uint64_t reference, Relation relation,
                              std::optional<std::size_t> iterations, MarkingMode mode)
{
    check_width(n);
    check_value(reference, n, "reference");
    return amplify(predicates::Comparator{reference, relation, std::nullopt, regs::search}, n, iterations, mode);
}

MinSearchTrace find_minimum(std::size_t n, const std::optional<std::vector<std::uint64_t>>& members,
                            std::uint64_t seed, const MinimumOptions& options)
{
    check_width(n);
    if (members) {
        if (members->empty()) {
            throw ArgumentError("membership set must not be empty");
        }
        for (auto v : *members) {
            check_value(v, n, "member");
        }
    }
    if (options.stability_rounds == 0) {
        throw ArgumentError("stability_rounds must be at least 1");
    }
    std::mt19937_64 rng(seed);
    std::uint64_t threshold =
        members ? (*members)[rng() % members->size()] : rng() % (std::uint64_t{1} << n);

    MinSearchTrace trace;
    trace.thresholds.push_back(threshold);
    std::size_t unchanged = 0;
    while (unchanged < options.stability_rounds) {
        GroverPlan plan;
        plan.oracle = predicates::Comparator{threshold, Relation::LessEqual, members, regs::search};
        plan.layout = oracle_workspace(plan.oracle, n);
        const BbhtResult hit = run_bbht(plan, rng(), options.max_rounds);
        ++trace.rounds;
        if (hit.outcome && *hit.outcome < threshold) {
            threshold = *hit.outcome;
            trace.thresholds.push_back(threshold);
            unchanged = 0;
        } else {
            ++unchanged;
        }
    }
    trace.result = threshold;
    return trace;
}

SearchReport find_preimage(const std::vector<std::uint64_t>& table, std::size_t n, std::size_t out_width,
                           std::uint64_t target, std::optional<std::size_t> iterations)
{
    check_width(n);
    check_width(out_width);
    if (table.size() != (std::size_t{1} << n)) {
        throw ArgumentError("function table has " + std::to_string(table.size()) + " rows, expected 2^" +
                            std::to_string(n) + " = " + std::to_string(std::size_t{1} << n));
    }
    for (auto v : table) {
        check_value(v, out_width, "table entry");
    }
    check_value(target, out_width, "target");
    return amplify(predicates::FunctionZero{table, out_width, target}, n, iterations, MarkingMode::Kickback);
}

SearchReport find_zero(const std::vector<std::uint64_t>& table, std::size_t n, std::size_t out_width,
                       std::optional<std::size_t> iterations)
{
    return find_preimage(table, n, out_width, 0, iterations);
}

std::string to_string(DatabaseMode mode)
{
    return mode == DatabaseMode::Idealized ? "idealized" : "literal-grover";
}

DatabaseMode parse_database_mode(std::string_view name)
{
    if (name == "idealized") {
        return DatabaseMode::Idealized;
    }
    if (name == "literal-grover") {
        return DatabaseMode::LiteralGrover;
    }
    throw ArgumentError("unknown database mode '" + std::string(name) + "'");
}

std::size_t bits_for(std::uint64_t a)
{
    std::size_t n = 1;
    while (n < 64 && (a >> n) != 0) {
        ++n;
    }
    return n;
}

std::vector<std::uint64_t> odd_database_values(std::uint64_t a, bool exclude_one)
{
    std::vector<std::uint64_t> values;
    for (std::uint64_t v = exclude_one ? 3 : 1; v < a; v += 2) {
        values.push_back(v);
    }
    return values;
}

OddDatabase prepare_odd_database(std::uint64_t a, std::size_t n, DatabaseMode mode, bool exclude_one)
{
    check_odd_candidate(a);
    check_width(n);
    check_value(a, n, "a");
    const auto values = odd_database_values(a, exclude_one);
    if (values.empty()) {
        throw ArgumentError("no odd value below " + std::to_string(a) + " qualifies for the database");
    }
    std::vector<BasisAmplitude> amps;
    for (auto v : values) {
        amps.push_back({v, 1.0});
    }
    QuantumState ideal = QuantumState::from_amplitudes(RegisterLayout({{"q", n}}), std::move(amps));
    if (mode == DatabaseMode::Idealized) {
        return {ideal, values, 1.0, 1.0, 0, 0};
    }
    if (exclude_one) {
        throw ArgumentError("exclude-one is only available with idealized databases");
    }

    // Stage 1: amplify values below a.
    const OraclePredicate below = predicates::Comparator{a, Relation::Less, std::nullopt, regs::search};
    const RegisterLayout layout = oracle_workspace(below, n);
    const std::uint64_t space = std::uint64_t{1} << n;
    const IterationPlan plan1 = plan_iterations(space, a);
    GroverPlan g1;
    g1.layout = layout;
    g1.oracle = below;
    g1.iterations = plan1.iterations;
    QuantumState stage1 = run_grover(g1).state;
    {
        const Qubit f = layout[regs::flip].qubit(0);
        stage1.apply(Gate::h(f));
        stage1.apply(Gate::x(f));
    }

    // Stage 2: amplify odd values, reflecting about the stage-1 output.
    double odd_mass = 0.0;
    for (const auto& [v, p] : marginal_distribution(stage1, layout[regs::search]).entries) {
        if (v & 1U) {
            odd_mass += p;
        }
    }
    const IterationPlan plan2 = plan_iterations_for_mass(odd_mass);
    GroverPlan g2;
    g2.layout = layout;
    g2.oracle = predicates::Odd{};
    g2.prepared_state = stage1;
    g2.iterations = plan2.iterations;
    QuantumState db = extract_search_register(run_grover(g2).state, n);

    // Two-stage sin^2 composition of the same quantities.
    const double s1 = std::sin((2.0 * static_cast<double>(plan1.iterations) + 1.0) * plan1.theta);
    const double below_mass = s1 * s1;
    const auto odd_low = static_cast<double>(values.size());
    const auto odd_high = static_cast<double>((space - a + 1) / 2);
    const double low_part = below_mass * odd_low / static_cast<double>(a);
    const double p = low_part + (1.0 - below_mass) * odd_high / static_cast<double>(space - a);
    const double theta = std::asin(std::sqrt(p));
    const double s2 = std::sin((2.0 * static_cast<double>(plan2.iterations) + 1.0) * theta);
    const double predicted = s2 * s2 * low_part / p;

    const double f = fidelity(ideal, db);
    return {std::move(db), values, f, predicted, plan1.iterations, plan2.iterations};
}

PrimePipelineState build_prime_pipeline(std::uint64_t a, DatabaseMode mode, bool exclude_one)
{
    check_odd_candidate(a);
    const std::size_t n = bits_for(a);
    // 14n + 1 qubits in total.
    if (n > 8) {
        throw ArgumentError("a must be below 256 for full-register simulation");
    }
    PrimePipelineState ps;
    ps.a = a;
    ps.n = n;
    ps.mode = mode;
    ps.exclude_one = exclude_one;
    std::vector<RegisterSpec> specs{{"pair", 2 * n}, {"prod", 2 * n}, {"carry", multiplier_carry_width(n)},
                                    {regs::ref, 2 * n}};
    for (auto& s : comparator_register_specs(2 * n)) {
        specs.push_back(std::move(s));
    }
    specs.emplace_back(regs::flip, 1);
    ps.layout = RegisterLayout(specs);
    const Register& pair = ps.layout["pair"];
    ps.multiplier = build_multiplier(ps.layout, pair.slice(0, n, "x"), pair.slice(n, n, "y"), ps.layout["prod"],
                                     ps.layout["carry"]);
    if (odd_database_values(a, exclude_one).empty()) {
        return ps;
    }
    ps.b_o1 = prepare_odd_database(a, n, mode, exclude_one);
    ps.b_o2 = prepare_odd_database(a, n, mode, exclude_one);

    std::vector<BasisAmplitude> amps;
    const std::size_t total = ps.layout.num_qubits();
    for (const auto& ex : ps.b_o1->state.entries()) {
        for (const auto& ey : ps.b_o2->state.entries()) {
            const auto x = static_cast<std::uint64_t>(ex.index);
            const auto y = static_cast<std::uint64_t>(ey.index);
            amps.push_back({write_register(0, total, pair, (x << n) | y), ex.amplitude * ey.amplitude});
        }
    }
    QuantumState s = QuantumState::from_amplitudes(ps.layout, std::move(amps), Storage::Sparse);
    s.apply(ps.multiplier);
    ps.product_state = std::move(s);
    return ps;
}

std::string to_string(Primality p) { return p == Primality::Prime ? "prime" : "composite"; }

PrimeResult is_prime(std::uint64_t a, std::uint64_t seed, const PrimeOptions& options)
{
    check_odd_candidate(a);
    if (options.repetitions && *options.repetitions == 0) {
        throw ArgumentError("repetitions must be at least 1");
    }
    const PrimePipelineState ps = build_prime_pipeline(a, options.mode, options.exclude_one);
    const auto values = odd_database_values(a, options.exclude_one);

    PrimeResult result;
    result.a = a;
    result.database_size = values.size();
    result.pair_count = values.size() * values.size();
    for (auto x : values) {
        for (auto y : values) {
            result.marked_pairs += (x > 1 && y > 1 && x * y == a) ? 1 : 0;
        }
    }
    result.qubits = ps.layout.num_qubits();
    if (!ps.product_state) {
        return result;
    }
    result.database_fidelity = ps.b_o1->fidelity * ps.b_o2->fidelity;
    result.predicted_database_fidelity = ps.b_o1->predicted_fidelity * ps.b_o2->predicted_fidelity;

    const std::size_t n = ps.n;
    const std::uint64_t low_mask = (std::uint64_t{1} << n) - 1;
    GroverPlan plan;
    plan.layout = ps.layout;
    plan.search_reg = "pair";
    plan.prepared_state = ps.product_state;
    plan.oracle = predicates::Comparator{a, Relation::Equal, std::nullopt, "prod"};
    // The oracle marks every pair with x*y == a; only factors strictly between 1 and a witness compositeness.
    const auto nontrivial = [a](std::uint64_t x, std::uint64_t y) { return x > 1 && y > 1 && x * y == a; };
    plan.marked = [nontrivial, n, low_mask](std::uint64_t v) { return nontrivial(v >> n, v & low_mask); };
    const GroverEngine engine(plan);

    const std::size_t repetitions =
        options.repetitions.value_or(static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(a)))) + 3);
    // k uniform in [0, ceil(sqrt(pairs))] succeeds with probability >= 1/4 for any
    // marked count, without knowing it. Counts are dealt without replacement so a
    // poor k is not retried before the rest of the range has been used.
    const auto cap = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(result.pair_count))));
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> deck;
    std::vector<QuantumState> trajectory{engine.initial_state()};
    for (std::size_t r = 0; r < repetitions; ++r) {
        if (deck.empty()) {
            deck.resize(cap + 1);
            std::iota(deck.begin(), deck.end(), std::size_t{0});
            std::shuffle(deck.begin(), deck.end(), rng);
        }
        const std::size_t k = deck.back();
        deck.pop_back();
        while (trajectory.size() <= k) {
            QuantumState next = trajectory.back();
            engine.step(next);
            trajectory.push_back(std::move(next));
        }
        const GroverRun run = engine.finish(trajectory[k]);
        const std::uint64_t measured = sample(run.distribution, rng(), 1).begin()->first;
        PrimeAttempt attempt;
        attempt.iterations = k;
        attempt.hit_probability = run.marked_mass;
        attempt.x = measured >> n;
        attempt.y = measured & low_mask;
        attempt.verified = nontrivial(attempt.x, attempt.y);
        result.miss_probability *= 1.0 - run.marked_mass;
        result.attempts.push_back(attempt);
        result.final_distribution = run.distribution;
        if (attempt.verified) {
            result.classification = Primality::Composite;
            result.witness = std::make_pair(attempt.x, attempt.y);
            break;
        }
    }
    return result;
}

std::vector<std::uint64_t> factorize(std::uint64_t a, std::uint64_t seed)
{
    check_odd_candidate(a);
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> factors;
    std::vector<std::uint64_t> pending{a};
    while (!pending.empty()) {
        const std::uint64_t v = pending.back();
        pending.pop_back();
        const PrimeResult r = is_prime(v, rng(), {DatabaseMode::Idealized, true, std::nullopt});
        if (r.classification == Primality::Prime) {
            factors.push_back(v);
        } else {
            pending.push_back(r.witness->first);
            pending.push_back(r.witness->second);
        }
    }
    std::sort(factors.begin(), factors.end());
    return factors;
}

SearchReport conditional_search(std::uint64_t a, std::uint64_t b, std::uint64_t s1, std::uint64_t s2,
                                std::size_t n, std::optional<std::size_t> iterations, MarkingMode mode)
{
    check_width(n);
    check_value(a, n, "a");
    check_value(b, n, "b");
    check_value(s1, n, "s1");
    check_value(s2, n, "s2");
    return amplify(predicates::BranchSelect{a, b, s1, s2}, n, iterations, mode);
}

} // namespace qbsc
