#pragma once

// End-to-end searches built on the comparator oracle: threshold search,
// minimum finding, zero/preimage finding, primality testing with factor
// extraction, and comparator-controlled conditional search.

#include "qbsc/grover.hpp"
#include "qbsc/state.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qbsc {

struct SearchReport {
    /// Classical solution set, used for planning and mass bookkeeping.
    std::vector<std::uint64_t> marked;
    bool solution_found = false;
    std::size_t iterations = 0;
    double predicted_mass = 0.0;
    double marked_mass = 0.0;
    std::optional<MeasurementDistribution> distribution;
    std::optional<std::uint64_t> best_outcome;
};

/// Grover search over an n-qubit register with the planned iteration count
/// for the classically counted solutions (or `iterations` when given). An
/// empty solution set yields solution_found == false and the unamplified
/// distribution.
SearchReport amplify(const OraclePredicate& predicate, std::size_t n, std::optional<std::size_t> iterations,
                     MarkingMode mode = MarkingMode::Kickback);

/// Marks values `relation` the reference (Greater or Less). Iterations
/// default to the planned optimum for the classical marked count.
SearchReport threshold_search(std::size_t n, std::uint64_t reference, Relation relation,
                              std::optional<std::size_t> iterations = std::nullopt,
                              MarkingMode mode = MarkingMode::Kickback);

struct MinimumOptions {
    std::size_t max_rounds = kBbhtMaxRounds;
    std::size_t stability_rounds = 6;
};

struct MinSearchTrace {
    /// Successive references; each entry is strictly smaller than the previous one.
    std::vector<std::uint64_t> thresholds;
    /// Searches performed, including the ones that returned the current threshold.
    std::size_t rounds = 0;
    std::uint64_t result = 0;
};

/// Repeats a "value <= threshold" search, replacing the threshold by each
/// verified measurement, until it stays put `stability_rounds` times in a row.
/// Without `members` the database is every n-bit value.
MinSearchTrace find_minimum(std::size_t n, const std::optional<std::vector<std::uint64_t>>& members,
                            std::uint64_t seed, const MinimumOptions& options = {});

/// Grover search for x with f(x) == target over an explicit table of 2^n rows.
SearchReport find_preimage(const std::vector<std::uint64_t>& table, std::size_t n, std::size_t out_width,
                           std::uint64_t target, std::optional<std::size_t> iterations = std::nullopt);
SearchReport find_zero(const std::vector<std::uint64_t>& table, std::size_t n, std::size_t out_width,
                       std::optional<std::size_t> iterations = std::nullopt);

enum class DatabaseMode { Idealized, LiteralGrover };

std::string to_string(DatabaseMode mode);
DatabaseMode parse_database_mode(std::string_view name);

/// Smallest n with 2^n > a.
std::size_t bits_for(std::uint64_t a);

/// Odd values in [1, a-1], or [3, a-1] with exclude_one.
std::vector<std::uint64_t> odd_database_values(std::uint64_t a, bool exclude_one);

struct OddDatabase {
    QuantumState state;                  ///< single n-qubit register "q"
    std::vector<std::uint64_t> values;   ///< support of the ideal database
    double fidelity = 1.0;               ///< against the ideal database
    double predicted_fidelity = 1.0;     ///< two-stage sin^2 composition
    std::size_t below_iterations = 0;    ///< rounds of the "value < a" stage
    std::size_t odd_iterations = 0;      ///< rounds of the odd-value stage
};

/// Uniform superposition over odd values below a. Idealized mode builds it
/// directly; literal mode runs a "< a" Grover stage and then an odd-value
/// stage whose diffusion reflects about the first stage's output.
OddDatabase prepare_odd_database(std::uint64_t a, std::size_t n, DatabaseMode mode, bool exclude_one = false);

struct PrimePipelineState {
    std::uint64_t a = 0;
    std::size_t n = 0;
    DatabaseMode mode = DatabaseMode::Idealized;
    bool exclude_one = false;
    RegisterLayout layout; ///< pair(2n: x then y), prod(2n), carry, ref, cmp_out, cmp_anc, flip
    std::optional<OddDatabase> b_o1; ///< empty when no odd value qualifies
    std::optional<OddDatabase> b_o2;
    /// Both databases on the pair register after the multiplier; flip qubit in |0>.
    std::optional<QuantumState> product_state;
    Circuit multiplier;
};

/// Database preparation and PROD stage. product_state is empty when the database is.
PrimePipelineState build_prime_pipeline(std::uint64_t a, DatabaseMode mode = DatabaseMode::Idealized,
                                        bool exclude_one = false);

struct PrimeOptions {
    DatabaseMode mode = DatabaseMode::Idealized;
    bool exclude_one = false;
    /// Defaults to ceil(log2 a) + 3.
    std::optional<std::size_t> repetitions;
};

struct PrimeAttempt {
    std::size_t iterations = 0;
    double hit_probability = 0.0; ///< exact mass on pairs with x*y == a
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    bool verified = false;
};

enum class Primality { Prime, Composite };

struct PrimeResult {
    std::uint64_t a = 0;
    Primality classification = Primality::Prime;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> witness;
    std::vector<PrimeAttempt> attempts;
    std::size_t database_size = 0;   ///< odd values per database copy
    std::size_t pair_count = 0;      ///< database_size^2
    std::size_t marked_pairs = 0;    ///< database pairs (x, y), both above 1, with x*y == a
    /// Product of (1 - hit probability) over the attempts made.
    double miss_probability = 1.0;
    double database_fidelity = 1.0;           ///< product of both copies
    double predicted_database_fidelity = 1.0;
    std::size_t qubits = 0;
    /// Pair-register distribution of the last attempt (outcome = x * 2^n + y).
    std::optional<MeasurementDistribution> final_distribution;
};

std::string to_string(Primality p);

/// Amplitude amplification over the product database with an equality
/// comparator against a; each measured pair is checked by multiplication.
PrimeResult is_prime(std::uint64_t a, std::uint64_t seed, const PrimeOptions& options = {});

/// Prime factors of an odd a >= 3 in ascending order, by recursive witnesses.
/// Runs is_prime with exclude_one on idealized databases.
std::vector<std::uint64_t> factorize(std::uint64_t a, std::uint64_t seed);

/// If a > b search for s1, otherwise for s2, on a separate n-qubit register.
SearchReport conditional_search(std::uint64_t a, std::uint64_t b, std::uint64_t s1, std::uint64_t s2,
                                std::size_t n, std::optional<std::size_t> iterations = std::nullopt,
                                MarkingMode mode = MarkingMode::Kickback);

} // namespace qbsc
