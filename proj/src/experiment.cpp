#include "qbsc/experiment.hpp"

#include "qbsc/algorithms.hpp"
#include "qbsc/comparator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qbsc {

using nlohmann::json;

std::string to_string(const Diagnostic& diagnostic)
{
    return diagnostic.field.empty() ? diagnostic.message : diagnostic.field + ": " + diagnostic.message;
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics)
{
    std::string text = "invalid config";
    for (const auto& d : diagnostics) {
        text += "\n  " + to_string(d);
    }
    return text;
}

constexpr std::uint64_t kMaxWidth = 16;
constexpr std::uint64_t kMaxPrimeCandidate = 255;
constexpr std::uint64_t kMaxShots = 100'000'000;

// Collects diagnostics while reading fields of one JSON object.
class FieldReader {
public:
    FieldReader(const json& object, std::string prefix, std::vector<Diagnostic>& out)
        : object_(object), prefix_(std::move(prefix)), out_(out)
    {
    }

    std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    void fail(const std::string& key, const std::string& message) { out_.push_back({path(key), message}); }

    bool has(const std::string& key) const { return object_.contains(key); }

    std::optional<std::uint64_t> integer(const std::string& key, bool required, std::uint64_t lo = 0,
                                         std::uint64_t hi = UINT64_MAX)
    {
        seen_.insert(key);
        if (!object_.contains(key)) {
            if (required) {
                fail(key, key + " is required");
            }
            return std::nullopt;
        }
        const json& v = object_.at(key);
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
            fail(key, key + " must not be negative");
            return std::nullopt;
        }
        if (!v.is_number_unsigned()) {
            fail(key, key + " must be a non-negative integer");
            return std::nullopt;
        }
        const auto value = v.get<std::uint64_t>();
        if (value < lo || value > hi) {
            fail(key, key + " must be between " + std::to_string(lo) + " and " + std::to_string(hi));
            return std::nullopt;
        }
        return value;
    }

    std::optional<std::string> text(const std::string& key, const std::vector<std::string>& allowed)
    {
        seen_.insert(key);
        if (!object_.contains(key)) {
            return std::nullopt;
        }
        const json& v = object_.at(key);
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            for (const auto& a : allowed) {
                if (s == a) {
                    return s;
                }
            }
        }
        std::string options;
        for (const auto& a : allowed) {
            options += (options.empty() ? "" : ", ") + a;
        }
        fail(key, key + " must be one of: " + options);
        return std::nullopt;
    }

    std::optional<bool> boolean(const std::string& key)
    {
        seen_.insert(key);
        if (!object_.contains(key)) {
            return std::nullopt;
        }
        if (!object_.at(key).is_boolean()) {
            fail(key, key + " must be true or false");
            return std::nullopt;
        }
        return object_.at(key).get<bool>();
    }

    /// Array of non-negative integers; an empty optional when absent or malformed.
    std::optional<std::vector<std::uint64_t>> integers(const std::string& key, bool required)
    {
        seen_.insert(key);
        if (!object_.contains(key)) {
            if (required) {
                fail(key, key + " is required");
            }
            return std::nullopt;
        }
        const json& v = object_.at(key);
        if (!v.is_array()) {
            fail(key, key + " must be an array of non-negative integers");
            return std::nullopt;
        }
        std::vector<std::uint64_t> values;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number_unsigned()) {
                fail(key, key + "[" + std::to_string(i) + "] must be a non-negative integer");
                return std::nullopt;
            }
            values.push_back(v[i].get<std::uint64_t>());
        }
        return values;
    }

    /// Marks a key handled without reading it through this reader.
    void accept(const std::string& key) { seen_.insert(key); }

    void reject_unknown()
    {
        for (const auto& [key, value] : object_.items()) {
            if (!seen_.contains(key)) {
                fail(key, "unknown field '" + key + "'");
            }
        }
    }

private:
    const json& object_;
    std::string prefix_;
    std::vector<Diagnostic>& out_;
    std::set<std::string> seen_;
};

void require_fits(FieldReader& r, const std::string& key, std::optional<std::uint64_t> value,
                  std::optional<std::uint64_t> width, const std::string& width_name)
{
    if (value && width && *width < 64 && (*value >> *width) != 0) {
        r.fail(key, key + " = " + std::to_string(*value) + " does not fit in " + width_name + " = " +
                        std::to_string(*width) + " bits");
    }
}

const std::vector<std::string> kRelations{"greater", "less", "equal", "less_equal", "greater_equal", "not_equal"};
const std::vector<std::string> kMarkingModes{"kickback", "phase-flip"};
const std::vector<std::string> kDatabaseModes{"idealized", "literal-grover"};

void validate_b_operand(FieldReader& r, const json& b, std::optional<std::uint64_t> n)
{
    if (b.is_number_unsigned()) {
        require_fits(r, "b", b.get<std::uint64_t>(), n, "n");
        return;
    }
    if (!b.is_array() || b.empty()) {
        r.fail("b", "b must be a non-negative integer or a non-empty list of {value, amplitude}");
        return;
    }
    double weight = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const std::string key = "b[" + std::to_string(i) + "]";
        const json& term = b[i];
        if (!term.is_object() || !term.contains("value") || !term.contains("amplitude")) {
            r.fail(key, "each term needs 'value' and 'amplitude'");
            continue;
        }
        if (!term.at("value").is_number_unsigned()) {
            r.fail(key + ".value", "value must be a non-negative integer");
        } else {
            require_fits(r, key + ".value", term.at("value").get<std::uint64_t>(), n, "n");
        }
        const json& amp = term.at("amplitude");
        if (amp.is_number()) {
            weight += std::norm(amp.get<double>());
        } else if (amp.is_array() && amp.size() == 2 && amp[0].is_number() && amp[1].is_number()) {
            weight += std::norm(std::complex<double>(amp[0].get<double>(), amp[1].get<double>()));
        } else {
            r.fail(key + ".amplitude", "amplitude must be a number or [re, im]");
        }
    }
    if (weight == 0.0) {
        r.fail("b", "b amplitudes must not all be zero");
    }
}

void validate_params(const std::string& kind, const json& params, std::vector<Diagnostic>& out)
{
    FieldReader r(params, "params", out);
    if (kind == "compare") {
        const auto n = r.integer("n", true, 1, kMaxWidth);
        require_fits(r, "a", r.integer("a", true), n, "n");
        r.accept("b");
        if (!params.contains("b")) {
            r.fail("b", "b is required (an integer or a list of {value, amplitude})");
        } else {
            validate_b_operand(r, params.at("b"), n);
        }
    } else if (kind == "threshold") {
        const auto n = r.integer("n", true, 1, kMaxWidth);
        require_fits(r, "reference", r.integer("reference", true), n, "n");
        r.text("relation", kRelations);
        if (!params.contains("relation")) {
            r.fail("relation", "relation is required");
        }
        r.integer("iterations", false);
        r.text("mode", kMarkingModes);
    } else if (kind == "minimum") {
        const auto n = r.integer("n", true, 1, kMaxWidth);
        if (const auto members = r.integers("members", false)) {
            if (members->empty()) {
                r.fail("members", "members must not be empty");
            }
            for (auto v : *members) {
                require_fits(r, "members", v, n, "n");
            }
        }
        r.integer("max_rounds", false, 1, 1000);
        r.integer("stability_rounds", false, 1, 1000);
    } else if (kind == "zero") {
        const auto n = r.integer("n", true, 1, kMaxWidth);
        auto out_width = r.integer("out_width", false, 1, kMaxWidth);
        if (!params.contains("out_width")) {
            out_width = n;
        }
        const auto table = r.integers("table", true);
        if (table && n) {
            if (table->size() != (std::size_t{1} << *n)) {
                r.fail("table", "table has " + std::to_string(table->size()) + " entries but 2^n = " +
                                    std::to_string(std::size_t{1} << *n));
            }
            for (std::size_t i = 0; i < table->size(); ++i) {
                require_fits(r, "table[" + std::to_string(i) + "]", (*table)[i], out_width, "out_width");
            }
        }
        require_fits(r, "target", r.integer("target", false), out_width, "out_width");
        r.integer("iterations", false);
    } else if (kind == "prime" || kind == "factor") {
        const auto a = r.integer("a", true, 3, kMaxPrimeCandidate);
        if (a && *a % 2 == 0) {
            r.fail("a", "a must be odd");
        }
        if (kind == "prime") {
            const auto mode = r.text("mode", kDatabaseModes);
            r.integer("repetitions", false, 1, 1000);
            const auto exclude_one = r.boolean("exclude_one");
            if (exclude_one.value_or(false)) {
                if (mode && *mode != "idealized") {
                    r.fail("exclude_one", "exclude_one requires mode idealized");
                }
                if (a && *a < 5) {
                    r.fail("exclude_one", "exclude_one needs a >= 5 so the database is not empty");
                }
            }
        }
    } else if (kind == "conditional") {
        const auto n = r.integer("n", true, 1, kMaxWidth);
        for (const char* key : {"a", "b", "s1", "s2"}) {
            require_fits(r, key, r.integer(key, true), n, "n");
        }
        r.integer("iterations", false);
        r.text("mode", kMarkingModes);
    }
    r.reject_unknown();
}

MarkingMode marking_mode(const json& params)
{
    return params.value("mode", std::string("kickback")) == "phase-flip" ? MarkingMode::PhaseFlip
                                                                          : MarkingMode::Kickback;
}

std::optional<std::size_t> optional_count(const json& params, const char* key)
{
    if (!params.contains(key)) {
        return std::nullopt;
    }
    return params.at(key).get<std::size_t>();
}

json engine_info(std::size_t qubits, bool forced_sparse = false)
{
    const bool dense = !forced_sparse && qubits < kDenseQubitLimit;
    return {{"storage", dense ? "dense" : "sparse"}, {"qubits", qubits}};
}

json distribution_json(const MeasurementDistribution& d)
{
    json entries = json::array();
    for (const auto& [outcome, p] : d.entries) {
        entries.push_back({{"outcome", outcome}, {"probability", p}});
    }
    return {{"register", d.reg.name}, {"width", d.reg.width}, {"entries", std::move(entries)}};
}

json report_summary(const SearchReport& report, std::size_t n)
{
    json s;
    s["search_space"] = std::uint64_t{1} << n;
    s["marked"] = report.marked;
    s["marked_count"] = report.marked.size();
    s["solution_found"] = report.solution_found;
    s["iterations"] = report.iterations;
    if (report.solution_found) {
        s["optimal_iterations"] = plan_iterations(std::uint64_t{1} << n, report.marked.size()).iterations;
    }
    s["predicted_marked_mass"] = report.predicted_mass;
    s["marked_mass"] = report.marked_mass;
    s["best_outcome"] = report.best_outcome ? json(*report.best_outcome) : json(nullptr);
    // Largest relative departure from a uniform split of the marked mass.
    if (report.distribution && report.marked_mass > 0.0) {
        double deviation = 0.0;
        const double share = 1.0 / static_cast<double>(report.marked.size());
        for (auto v : report.marked) {
            deviation = std::max(deviation, std::abs(report.distribution->probability(v) / report.marked_mass - share));
        }
        s["marked_uniformity_deviation"] = deviation;
    }
    return s;
}

void add_search_notes(json& notes, const SearchReport& report, std::size_t n)
{
    const std::uint64_t space = std::uint64_t{1} << n;
    if (!report.solution_found) {
        notes.push_back("no value satisfies the predicate; the distribution is the unamplified database");
    } else if (2 * report.marked.size() == space) {
        notes.push_back("M = N/2 gives theta = pi/4, so the marked mass is sin^2((2k+1) pi/4) = 1/2 for every k; "
                        "amplification cannot raise it and the state stays the uniform superposition");
    }
    if (report.solution_found && report.best_outcome &&
        std::find(report.marked.begin(), report.marked.end(), *report.best_outcome) == report.marked.end()) {
        notes.push_back("the most likely outcome is not a solution at this iteration count");
    }
}

json run_compare(const json& p, json& result)
{
    const auto n = p.at("n").get<std::size_t>();
    const auto a = p.at("a").get<std::uint64_t>();
    auto [circuit, cl] = build_comparator(n);
    const RegisterLayout& layout = cl.circuit_layout;
    const std::size_t total = layout.num_qubits();
    const BasisIndex base = write_register(0, total, cl.a_reg, a);

    std::vector<BasisAmplitude> amps;
    const json& b = p.at("b");
    if (b.is_number()) {
        amps.push_back({write_register(base, total, cl.b_reg, b.get<std::uint64_t>()), 1.0});
    } else {
        for (const auto& term : b) {
            const json& amp = term.at("amplitude");
            const Amplitude z = amp.is_number() ? Amplitude(amp.get<double>())
                                                : Amplitude(amp[0].get<double>(), amp[1].get<double>());
            amps.push_back({write_register(base, total, cl.b_reg, term.at("value").get<std::uint64_t>()), z});
        }
    }
    QuantumState input = QuantumState::from_amplitudes(layout, std::move(amps));

    // Classical prediction: each basis b contributes its weight to one outcome.
    std::map<std::string, double> predicted{{"GT", 0.0}, {"LT", 0.0}, {"EQ", 0.0}};
    for (const auto& [v, w] : marginal_distribution(input, cl.b_reg).entries) {
        predicted[to_string(compare_classical(a, v, n))] += w;
    }

    QuantumState out = input;
    out.apply(circuit);
    const MeasurementDistribution joint = marginal_distribution(out, cl.out_reg);
    const MeasurementDistribution o1 = marginal_distribution(out, cl.o1_register());
    const MeasurementDistribution o2 = marginal_distribution(out, cl.o2_register());
    std::map<std::string, double> measured{
        {"GT", joint.probability(0b10)}, {"LT", joint.probability(0b01)}, {"EQ", joint.probability(0b00)}};
    double deviation = 0.0;
    for (const auto& [k, v] : predicted) {
        deviation = std::max(deviation, std::abs(v - measured[k]));
    }

    json s;
    s["outcome_probabilities"] = measured;
    s["predicted_outcome_probabilities"] = predicted;
    s["max_deviation"] = deviation;
    s["o1"] = {{"0", o1.probability(0)}, {"1", o1.probability(1)}};
    s["o2"] = {{"0", o2.probability(0)}, {"1", o2.probability(1)}};
    s["ancilla_count"] = cl.ancilla_count;
    result["engine"] = engine_info(total);
    result["notes"].push_back("outcome encodes O1 * 2 + O2: 2 = a > b, 1 = a < b, 0 = a == b");
    result["notes"].push_back("comparator only, without uncomputation: work qubits keep the per-position flags");
    result["distribution"] = distribution_json(joint);
    return s;
}

json run_threshold(const json& p, json& result, MeasurementDistribution& dist)
{
    const auto n = p.at("n").get<std::size_t>();
    const auto reference = p.at("reference").get<std::uint64_t>();
    const Relation relation = parse_relation(p.at("relation").get<std::string>());
    const SearchReport report =
        threshold_search(n, reference, relation, optional_count(p, "iterations"), marking_mode(p));
    const OraclePredicate pred = predicates::Comparator{reference, relation, std::nullopt, regs::search};
    result["engine"] = engine_info(oracle_workspace(pred, n).num_qubits());
    add_search_notes(result["notes"], report, n);
    dist = *report.distribution;
    json s = report_summary(report, n);
    s["reference"] = reference;
    s["relation"] = to_string(relation);
    return s;
}

json run_minimum(const json& p, std::uint64_t seed, json& result, MeasurementDistribution& dist)
{
    const auto n = p.at("n").get<std::size_t>();
    std::optional<std::vector<std::uint64_t>> members;
    if (p.contains("members")) {
        members = p.at("members").get<std::vector<std::uint64_t>>();
    }
    MinimumOptions options;
    options.max_rounds = optional_count(p, "max_rounds").value_or(options.max_rounds);
    options.stability_rounds = optional_count(p, "stability_rounds").value_or(options.stability_rounds);
    const MinSearchTrace trace = find_minimum(n, members, seed, options);

    std::uint64_t classical = members ? *std::min_element(members->begin(), members->end()) : 0;
    // Final search below the returned value; a single solution when it is the minimum.
    const OraclePredicate last = predicates::Comparator{trace.result, Relation::LessEqual, members, regs::search};
    const SearchReport report = amplify(last, n, std::nullopt);
    result["engine"] = engine_info(oracle_workspace(last, n).num_qubits());
    result["notes"].push_back("distribution: final threshold search for values <= the returned minimum");
    dist = *report.distribution;

    json s;
    s["result"] = trace.result;
    s["classical_minimum"] = classical;
    s["correct"] = trace.result == classical;
    s["thresholds"] = trace.thresholds;
    s["rounds"] = trace.rounds;
    s["stability_rounds"] = options.stability_rounds;
    s["final_marked_count"] = report.marked.size();
    s["final_marked_mass"] = report.marked_mass;
    return s;
}

json run_zero(const json& p, json& result, MeasurementDistribution& dist)
{
    const auto n = p.at("n").get<std::size_t>();
    const auto out_width = optional_count(p, "out_width").value_or(n);
    const auto table = p.at("table").get<std::vector<std::uint64_t>>();
    const auto target = p.value("target", std::uint64_t{0});
    const SearchReport report = find_preimage(table, n, out_width, target, optional_count(p, "iterations"));
    const OraclePredicate pred = predicates::FunctionZero{table, out_width, target};
    result["engine"] = engine_info(oracle_workspace(pred, n).num_qubits());
    add_search_notes(result["notes"], report, n);
    dist = *report.distribution;
    json s = report_summary(report, n);
    s["target"] = target;
    return s;
}

json prime_summary(const PrimeResult& r, const json& p)
{
    json s;
    s["a"] = r.a;
    s["classification"] = to_string(r.classification);
    s["witness"] = r.witness ? json::array({r.witness->first, r.witness->second}) : json(nullptr);
    json attempts = json::array();
    for (const auto& at : r.attempts) {
        attempts.push_back({{"iterations", at.iterations},
                            {"hit_probability", at.hit_probability},
                            {"x", at.x},
                            {"y", at.y},
                            {"verified", at.verified}});
    }
    s["attempts"] = std::move(attempts);
    s["database_size"] = r.database_size;
    s["pair_count"] = r.pair_count;
    s["marked_pairs"] = r.marked_pairs;
    s["miss_probability"] = r.miss_probability;
    s["database_fidelity"] = r.database_fidelity;
    s["predicted_database_fidelity"] = r.predicted_database_fidelity;
    s["mode"] = p.value("mode", std::string("idealized"));
    s["exclude_one"] = p.value("exclude_one", false);
    bool composite = false;
    for (std::uint64_t d = 3; d * d <= r.a; d += 2) {
        composite = composite || r.a % d == 0;
    }
    s["trial_division"] = composite ? "composite" : "prime";
    return s;
}

void add_prime_notes(json& notes, const PrimeResult& r)
{
    notes.push_back("pair outcome encodes x * 2^n + y with n = " + std::to_string(bits_for(r.a)));
    notes.push_back("full quantum registers simulated: " + std::to_string(r.qubits) + " qubits");
    if (r.classification == Primality::Prime && r.marked_pairs > 0) {
        notes.push_back("no witness was measured although factor pairs exist; miss probability " +
                        json(r.miss_probability).dump());
    }
}

json run_prime(const json& p, std::uint64_t seed, json& result, MeasurementDistribution& dist)
{
    PrimeOptions options;
    options.mode = parse_database_mode(p.value("mode", std::string("idealized")));
    options.exclude_one = p.value("exclude_one", false);
    options.repetitions = optional_count(p, "repetitions");
    const PrimeResult r = is_prime(p.at("a").get<std::uint64_t>(), seed, options);
    result["engine"] = engine_info(r.qubits, true);
    add_prime_notes(result["notes"], r);
    dist = *r.final_distribution;
    return prime_summary(r, p);
}

json run_factor(const json& p, std::uint64_t seed, json& result, MeasurementDistribution& dist)
{
    const auto a = p.at("a").get<std::uint64_t>();
    const PrimeResult r = is_prime(a, seed, {});
    const std::vector<std::uint64_t> factors = factorize(a, seed);
    result["engine"] = engine_info(r.qubits, true);
    add_prime_notes(result["notes"], r);
    result["notes"].push_back("distribution: last attempt of the primality search on a");
    dist = *r.final_distribution;
    json s = prime_summary(r, p);
    s["factors"] = factors;
    std::uint64_t product = 1;
    for (auto f : factors) {
        product *= f;
    }
    s["factors_multiply_to_a"] = product == a;
    return s;
}

json run_conditional(const json& p, json& result, MeasurementDistribution& dist)
{
    const auto n = p.at("n").get<std::size_t>();
    const auto a = p.at("a").get<std::uint64_t>();
    const auto b = p.at("b").get<std::uint64_t>();
    const auto s1 = p.at("s1").get<std::uint64_t>();
    const auto s2 = p.at("s2").get<std::uint64_t>();
    const SearchReport report =
        conditional_search(a, b, s1, s2, n, optional_count(p, "iterations"), marking_mode(p));
    const OraclePredicate pred = predicates::BranchSelect{a, b, s1, s2};
    result["engine"] = engine_info(oracle_workspace(pred, n).num_qubits());
    add_search_notes(result["notes"], report, n);
    dist = *report.distribution;
    json s = report_summary(report, n);
    s["branch"] = a > b ? "s1" : "s2";
    s["target"] = a > b ? s1 : s2;
    return s;
}

} // namespace

ConfigError::ConfigError(std::vector<Diagnostic> diagnostics)
    : Error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics))
{
}

json ExperimentConfig::to_json() const
{
    json j{{"kind", kind}, {"seed", seed}, {"params", params}};
    if (shots) {
        j["shots"] = *shots;
    }
    return j;
}

std::vector<Diagnostic> validate_config(const json& document)
{
    std::vector<Diagnostic> out;
    if (!document.is_object()) {
        out.push_back({"", "config must be a JSON object"});
        return out;
    }
    FieldReader top(document, "", out);
    const auto kind = top.text("kind", kExperimentKinds);
    if (!document.contains("kind")) {
        top.fail("kind", "kind is required");
    }
    top.integer("seed", false);
    top.integer("shots", false, 1, kMaxShots);
    top.accept("params");
    top.accept("description");
    top.reject_unknown();
    if (!document.contains("params")) {
        out.push_back({"params", "params is required"});
    } else if (!document.at("params").is_object()) {
        out.push_back({"params", "params must be an object"});
    } else if (kind) {
        validate_params(*kind, document.at("params"), out);
    }
    return out;
}

ExperimentConfig parse_config(const json& document)
{
    auto diagnostics = validate_config(document);
    if (!diagnostics.empty()) {
        throw ConfigError(std::move(diagnostics));
    }
    ExperimentConfig config;
    config.kind = document.at("kind").get<std::string>();
    config.seed = document.value("seed", std::uint64_t{0});
    if (document.contains("shots")) {
        config.shots = document.at("shots").get<std::uint64_t>();
    }
    config.params = document.at("params");
    return config;
}

json load_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError({{path.string(), "cannot open file"}});
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({{path.string(), std::string("not valid JSON: ") + e.what()}});
    }
}

json run_experiment(const ExperimentConfig& config)
{
    const auto diagnostics = validate_config(config.to_json());
    if (!diagnostics.empty()) {
        throw ConfigError(diagnostics);
    }
    const auto start = std::chrono::steady_clock::now();
    json result;
    result["kind"] = config.kind;
    result["config"] = config.to_json();
    result["notes"] = json::array();

    const json& p = config.params;
    MeasurementDistribution dist;
    json summary;
    if (config.kind == "compare") {
        summary = run_compare(p, result);
    } else if (config.kind == "threshold") {
        summary = run_threshold(p, result, dist);
    } else if (config.kind == "minimum") {
        summary = run_minimum(p, config.seed, result, dist);
    } else if (config.kind == "zero") {
        summary = run_zero(p, result, dist);
    } else if (config.kind == "prime") {
        summary = run_prime(p, config.seed, result, dist);
    } else if (config.kind == "factor") {
        summary = run_factor(p, config.seed, result, dist);
    } else {
        summary = run_conditional(p, result, dist);
    }
    if (!result.contains("distribution")) {
        result["distribution"] = distribution_json(dist);
    }
    result["summary"] = std::move(summary);

    if (config.shots) {
        MeasurementDistribution d;
        for (const auto& e : result["distribution"]["entries"]) {
            d.entries[e.at("outcome").get<std::uint64_t>()] = e.at("probability").get<double>();
        }
        json samples = json::array();
        for (const auto& [outcome, count] : sample(d, config.seed, *config.shots)) {
            samples.push_back({{"outcome", outcome}, {"count", count}});
        }
        result["samples"] = std::move(samples);
    }

    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    result["timing"] = {{"wall_seconds", elapsed.count()}};
    return result;
}

std::string plot_csv(const json& result)
{
    if (!result.is_object() || !result.contains("distribution") ||
        !result.at("distribution").contains("entries") || !result.at("distribution").at("entries").is_array()) {
        throw ArgumentError("result has no distribution");
    }
    std::map<std::uint64_t, double> rows;
    for (const auto& e : result.at("distribution").at("entries")) {
        rows[e.at("outcome").get<std::uint64_t>()] += e.at("probability").get<double>();
    }
    if (rows.empty()) {
        throw ArgumentError("result distribution is empty");
    }
    std::ostringstream out;
    out << "outcome,probability\n";
    for (const auto& [outcome, p] : rows) {
        out << outcome << ',' << json(p).dump() << '\n';
    }
    return out.str();
}

} // namespace qbsc
