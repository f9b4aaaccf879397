#pragma once

// Grover iteration machinery: oracle assembly from predicates, diffusion
// about a preparation, iteration planning, fixed-count runs and the
// randomized schedule for an unknown number of marked states.
//
// Oracles live on a workspace layout whose registers follow the names in
// `regs`. Every oracle loads its own constants, computes, marks and
// uncomputes, so all auxiliary registers start and end in |0>.

#include "qbsc/circuit.hpp"
#include "qbsc/state.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qbsc {

namespace regs {
inline constexpr const char* search = "search";
inline constexpr const char* ref = "ref";
inline constexpr const char* cmp_out = "cmp_out";
inline constexpr const char* cmp_anc = "cmp_anc";
inline constexpr const char* member = "member";
inline constexpr const char* fn_out = "fn_out";
inline constexpr const char* cond_a = "cond_a";
inline constexpr const char* cond_b = "cond_b";
inline constexpr const char* flip = "flip";
} // namespace regs

/// Relation of the searched value to a reference: "search REL reference".
enum class Relation { Greater, Less, Equal, LessEqual, GreaterEqual, NotEqual };

std::string to_string(Relation relation);
Relation parse_relation(std::string_view name);
bool relation_holds(Relation relation, std::uint64_t search_value, std::uint64_t reference);

enum class MarkingMode {
    Kickback,  ///< X onto a flip qubit held in (|0> - |1>)/sqrt(2)
    PhaseFlip, ///< direct Z-based phase flip, flip qubit untouched
};

namespace predicates {

/// Comparator oracle against a classical reference loaded into `ref`.
/// With `members`, marks only values that are also in the set.
struct Comparator {
    std::uint64_t reference = 0;
    Relation relation = Relation::Greater;
    std::optional<std::vector<std::uint64_t>> members;
    std::string compared_register = regs::search;
};

struct EqualConstant {
    std::uint64_t value = 0;
};

/// Marks odd values (least significant bit set).
struct Odd {};

struct Membership {
    std::vector<std::uint64_t> members;
};

/// Marks s1 when a > b, otherwise s2. a and b sit in cond_a/cond_b.
struct BranchSelect {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint64_t s1 = 0;
    std::uint64_t s2 = 0;
};

/// Marks x with f(x) == reference; f given as a table of width out_width.
struct FunctionZero {
    std::vector<std::uint64_t> table;
    std::size_t out_width = 0;
    std::uint64_t reference = 0;
};

} // namespace predicates

using OraclePredicate =
    std::variant<predicates::Comparator, predicates::EqualConstant, predicates::Odd, predicates::Membership,
                 predicates::BranchSelect, predicates::FunctionZero>;

/// Classical evaluation of a predicate on a search-register value.
bool is_marked(const OraclePredicate& predicate, std::uint64_t search_value);

/// Register specs the predicate needs around an n-qubit search register.
std::vector<RegisterSpec> oracle_workspace_specs(const OraclePredicate& predicate, std::size_t search_width);
RegisterLayout oracle_workspace(const OraclePredicate& predicate, std::size_t search_width);

/// Gates loading classical inputs before preparation (cond_a/cond_b for BranchSelect).
Circuit build_oracle_inputs(const OraclePredicate& predicate, const RegisterLayout& layout);

/// Phase-flips exactly the search values satisfying the predicate.
Circuit build_oracle(const OraclePredicate& predicate, const RegisterLayout& layout,
                     MarkingMode mode = MarkingMode::Kickback);

/// Marks the basis states on which every control set fires (at most one may fire).
void append_mark(Circuit& circuit, const std::vector<std::vector<Control>>& control_sets, MarkingMode mode);

/// Hadamard on every search qubit.
Circuit uniform_preparation(const RegisterLayout& layout, const Register& search);

/// A S0 A^-1 with S0 = 2|0><0| - I on the search register; equals 2|s><s| - I
/// for uniform A.
Circuit build_diffusion(const Register& search, const Circuit& prepare);

struct IterationPlan {
    std::size_t iterations = 0;
    double predicted_success = 0.0;
    double theta = 0.0;
};

/// theta = asin(sqrt(M/N)); k = max(0, round(pi/(4 theta) - 1/2)), ties to fewer.
IterationPlan plan_iterations(std::uint64_t search_space, std::uint64_t marked);
/// Same rule from an initial marked probability p in (0, 1].
IterationPlan plan_iterations_for_mass(double initial_marked_mass);

struct GroverPlan {
    RegisterLayout layout;
    std::string search_reg = regs::search;
    /// Applied once before preparation; not part of the diffusion.
    std::optional<Circuit> inputs;
    /// Preparation A; default is uniform_preparation.
    std::optional<Circuit> prepare;
    /// A|0> given directly (flip qubit in |0>); diffusion becomes reflection about it.
    std::optional<QuantumState> prepared_state;
    OraclePredicate oracle;
    std::size_t iterations = 0;
    std::optional<std::uint64_t> marked_count_hint;
    MarkingMode mode = MarkingMode::Kickback;
    /// Classical check used for marked mass and verification; default is is_marked(oracle, .).
    std::function<bool(std::uint64_t)> marked;
};

struct GroverRun {
    QuantumState state;
    MeasurementDistribution distribution;
    double marked_mass = 0.0;
};

/// Holds the compiled oracle and diffusion of a plan and steps through iterations.
class GroverEngine {
public:
    explicit GroverEngine(GroverPlan plan);

    const GroverPlan& plan() const { return plan_; }
    /// State after flip preparation, inputs and A.
    const QuantumState& initial_state() const { return initial_; }
    const Circuit& oracle() const { return oracle_; }

    /// One oracle + diffusion round.
    void step(QuantumState& state) const;
    GroverRun run(std::size_t iterations) const;
    GroverRun finish(QuantumState state) const;
    bool marked(std::uint64_t value) const;

private:
    GroverPlan plan_;
    Register search_;
    Circuit oracle_;
    std::optional<Circuit> diffusion_;
    QuantumState initial_;
};

GroverRun run_grover(const GroverPlan& plan);

struct BbhtResult {
    std::optional<std::uint64_t> outcome;
    std::size_t rounds = 0;
    std::vector<std::size_t> iteration_counts;
};

inline constexpr double kBbhtGrowth = 6.0 / 5.0;
inline constexpr std::size_t kBbhtMaxRounds = 30;

/// Randomized schedule for unknown M: round r draws k uniformly from
/// [0, min(ceil(growth^r), ceil(sqrt N))], measures once and verifies.
BbhtResult run_bbht(const GroverPlan& plan, std::uint64_t seed, std::size_t max_rounds = kBbhtMaxRounds,
                    double growth = kBbhtGrowth);

} // namespace qbsc
