#include "qbsc/state.hpp"

#include "qbsc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qbsc {

namespace {

// Forced dense storage is still bounded by memory.
constexpr std::size_t kDenseHardLimit = 30;

bool pick_dense(std::size_t num_qubits, Storage storage)
{
    switch (storage) {
    case Storage::Dense:
        if (num_qubits > kDenseHardLimit) {
            throw ArgumentError("dense storage is limited to 30 qubits");
        }
        return true;
    case Storage::Sparse:
        return false;
    case Storage::Auto:
        break;
    }
    return num_qubits < kDenseQubitLimit;
}

bool index_in_range(BasisIndex index, std::size_t num_qubits)
{
    return num_qubits >= 128 || index < (BasisIndex{1} << num_qubits);
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

} // namespace

QuantumState::QuantumState(RegisterLayout layout, bool dense) : layout_(std::move(layout)), dense_(dense)
{
    if (layout_.num_qubits() == 0) {
        throw ArgumentError("a state needs at least one qubit");
    }
    if (dense_) {
        dense_amps_.assign(std::size_t{1} << layout_.num_qubits(), Amplitude{});
    }
}

QuantumState QuantumState::zero(RegisterLayout layout, Storage storage)
{
    const bool dense = pick_dense(layout.num_qubits(), storage);
    QuantumState s(std::move(layout), dense);
    if (dense) {
        s.dense_amps_[0] = 1.0;
    } else {
        s.sparse_amps_.push_back({0, 1.0});
    }
    return s;
}

QuantumState QuantumState::from_amplitudes(RegisterLayout layout, std::vector<BasisAmplitude> amplitudes,
                                           Storage storage)
{
    const bool dense = pick_dense(layout.num_qubits(), storage);
    QuantumState s(std::move(layout), dense);
    const std::size_t n = s.num_qubits();
    for (const auto& a : amplitudes) {
        if (!index_in_range(a.index, n)) {
            throw RangeError("basis index outside a " + std::to_string(n) + "-qubit state");
        }
    }
    std::stable_sort(amplitudes.begin(), amplitudes.end(),
                     [](const BasisAmplitude& l, const BasisAmplitude& r) { return l.index < r.index; });
    std::vector<BasisAmplitude> merged;
    for (const auto& a : amplitudes) {
        if (!merged.empty() && merged.back().index == a.index) {
            merged.back().amplitude += a.amplitude;
        } else {
            merged.push_back(a);
        }
    }
    double norm = 0.0;
    for (const auto& a : merged) {
        norm += std::norm(a.amplitude);
    }
    if (norm == 0.0) {
        throw ArgumentError("state amplitudes are all zero");
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : merged) {
        a.amplitude *= scale;
    }
    if (dense) {
        for (const auto& a : merged) {
            s.dense_amps_[static_cast<std::size_t>(a.index)] = a.amplitude;
        }
    } else {
        s.sparse_amps_ = std::move(merged);
    }
    s.prune_and_renormalize();
    return s;
}

Amplitude QuantumState::amplitude(BasisIndex index) const
{
    if (!index_in_range(index, num_qubits())) {
        throw RangeError("basis index outside the state");
    }
    if (dense_) {
        return dense_amps_[static_cast<std::size_t>(index)];
    }
    auto it = std::lower_bound(sparse_amps_.begin(), sparse_amps_.end(), index,
                               [](const BasisAmplitude& a, BasisIndex i) { return a.index < i; });
    return (it != sparse_amps_.end() && it->index == index) ? it->amplitude : Amplitude{};
}

std::vector<BasisAmplitude> QuantumState::entries() const
{
    if (!dense_) {
        return sparse_amps_;
    }
    std::vector<BasisAmplitude> out;
    for (std::size_t i = 0; i < dense_amps_.size(); ++i) {
        if (dense_amps_[i] != Amplitude{}) {
            out.push_back({i, dense_amps_[i]});
        }
    }
    return out;
}

std::size_t QuantumState::support_size() const
{
    if (!dense_) {
        return sparse_amps_.size();
    }
    return static_cast<std::size_t>(std::count_if(dense_amps_.begin(), dense_amps_.end(),
                                                  [](const Amplitude& a) { return a != Amplitude{}; }));
}

double QuantumState::norm_squared() const
{
    double sum = 0.0;
    if (dense_) {
        for (const auto& a : dense_amps_) {
            sum += std::norm(a);
        }
    } else {
        for (const auto& a : sparse_amps_) {
            sum += std::norm(a.amplitude);
        }
    }
    return sum;
}

QuantumState::CompiledGate QuantumState::compile(const Gate& gate) const
{
    const std::size_t n = num_qubits();
    validate_gate(gate, n);
    CompiledGate c{gate.kind, qubit_mask(n, gate.target), 0, 0};
    for (const auto& ctl : gate.controls) {
        const BasisIndex m = qubit_mask(n, ctl.qubit);
        c.control_mask |= m;
        if (ctl.polarity == Polarity::OnOne) {
            c.control_value |= m;
        }
    }
    return c;
}

void QuantumState::apply(const Gate& gate)
{
    const CompiledGate c = compile(gate);
    if (c.kind == GateKind::H) {
        apply_hadamard(c.target);
    } else {
        apply_permutation_run({c});
    }
}

void QuantumState::apply(const Circuit& circuit)
{
    if (circuit.num_qubits() != num_qubits()) {
        throw CircuitError("circuit acts on " + std::to_string(circuit.num_qubits()) +
                           " qubits but the state has " + std::to_string(num_qubits()));
    }
    // Consecutive X/MCX/Z gates map each basis index independently, so a
    // sparse state runs the whole block per entry and re-sorts once.
    std::vector<CompiledGate> run;
    for (const auto& g : circuit.gates()) {
        const CompiledGate c = compile(g);
        if (c.kind == GateKind::H) {
            if (!run.empty()) {
                apply_permutation_run(run);
                run.clear();
            }
            apply_hadamard(c.target);
        } else {
            run.push_back(c);
        }
    }
    if (!run.empty()) {
        apply_permutation_run(run);
    }
}

void QuantumState::apply_permutation_run(const std::vector<CompiledGate>& run)
{
    if (dense_) {
        // Visit only indices whose target and control bits are fixed, by walking
        // the subsets of the remaining free bits.
        const std::size_t all = dense_amps_.size() - 1;
        for (const auto& g : run) {
            const auto t = static_cast<std::size_t>(g.target);
            const auto cm = static_cast<std::size_t>(g.control_mask);
            const auto cv = static_cast<std::size_t>(g.control_value);
            const std::size_t free = all & ~(cm | t);
            for (std::size_t sub = 0;; sub = (sub - free) & free) {
                const std::size_t i = sub | cv;
                if (g.kind == GateKind::Z) {
                    dense_amps_[i | t] = -dense_amps_[i | t];
                } else {
                    std::swap(dense_amps_[i], dense_amps_[i | t]);
                }
                if (sub == free) {
                    break;
                }
            }
        }
        return;
    }
    for (auto& e : sparse_amps_) {
        for (const auto& g : run) {
            if (g.kind == GateKind::Z) {
                if (e.index & g.target) {
                    e.amplitude = -e.amplitude;
                }
            } else if ((e.index & g.control_mask) == g.control_value) {
                e.index ^= g.target;
            }
        }
    }
    std::sort(sparse_amps_.begin(), sparse_amps_.end(),
              [](const BasisAmplitude& l, const BasisAmplitude& r) { return l.index < r.index; });
}

void QuantumState::apply_hadamard(BasisIndex target)
{
    if (dense_) {
        const auto t = static_cast<std::size_t>(target);
        for (std::size_t i = 0; i < dense_amps_.size(); ++i) {
            if (!(i & t)) {
                const Amplitude a0 = dense_amps_[i];
                const Amplitude a1 = dense_amps_[i | t];
                dense_amps_[i] = (a0 + a1) * kInvSqrt2;
                dense_amps_[i | t] = (a0 - a1) * kInvSqrt2;
            }
        }
        prune_and_renormalize();
        return;
    }
    // Group entries by their index with the target bit cleared.
    struct Half {
        BasisIndex key;
        bool one;
        Amplitude amp;
    };
    std::vector<Half> halves;
    halves.reserve(sparse_amps_.size());
    for (const auto& e : sparse_amps_) {
        halves.push_back({e.index & ~target, (e.index & target) != 0, e.amplitude});
    }
    std::sort(halves.begin(), halves.end(), [](const Half& l, const Half& r) {
        return l.key != r.key ? l.key < r.key : l.one < r.one;
    });
    std::vector<BasisAmplitude> out;
    out.reserve(2 * halves.size());
    for (std::size_t i = 0; i < halves.size();) {
        Amplitude a0{}, a1{};
        const BasisIndex key = halves[i].key;
        for (; i < halves.size() && halves[i].key == key; ++i) {
            (halves[i].one ? a1 : a0) = halves[i].amp;
        }
        out.push_back({key, (a0 + a1) * kInvSqrt2});
        out.push_back({key | target, (a0 - a1) * kInvSqrt2});
    }
    std::sort(out.begin(), out.end(),
              [](const BasisAmplitude& l, const BasisAmplitude& r) { return l.index < r.index; });
    sparse_amps_ = std::move(out);
    prune_and_renormalize();
}

void QuantumState::prune_and_renormalize()
{
    constexpr double kPruneSquared = kPruneThreshold * kPruneThreshold;
    double norm = 0.0;
    if (dense_) {
        for (auto& a : dense_amps_) {
            const double p = std::norm(a);
            if (p < kPruneSquared) {
                a = Amplitude{};
            } else {
                norm += p;
            }
        }
    } else {
        std::erase_if(sparse_amps_,
                      [](const BasisAmplitude& a) { return std::norm(a.amplitude) < kPruneSquared; });
        norm = norm_squared();
    }
    if (norm == 0.0) {
        throw ArgumentError("state collapsed to zero norm");
    }
    if (std::abs(norm - 1.0) > kNormDriftTolerance) {
        const double scale = 1.0 / std::sqrt(norm);
        if (dense_) {
            for (auto& a : dense_amps_) {
                a *= scale;
            }
        } else {
            for (auto& a : sparse_amps_) {
                a.amplitude *= scale;
            }
        }
    }
}

void QuantumState::reflect_about(const QuantumState& pivot)
{
    if (pivot.num_qubits() != num_qubits()) {
        throw ArgumentError("reflection pivot has a different qubit count");
    }
    const Amplitude overlap = inner_product(pivot, *this);
    const Amplitude two_c = 2.0 * overlap;
    if (dense_) {
        for (auto& a : dense_amps_) {
            a = -a;
        }
        for (const auto& p : pivot.entries()) {
            dense_amps_[static_cast<std::size_t>(p.index)] += two_c * p.amplitude;
        }
    } else {
        const auto piv = pivot.entries();
        std::vector<BasisAmplitude> out;
        out.reserve(sparse_amps_.size() + piv.size());
        std::size_t i = 0, j = 0;
        while (i < sparse_amps_.size() || j < piv.size()) {
            if (j == piv.size() || (i < sparse_amps_.size() && sparse_amps_[i].index < piv[j].index)) {
                out.push_back({sparse_amps_[i].index, -sparse_amps_[i].amplitude});
                ++i;
            } else if (i == sparse_amps_.size() || piv[j].index < sparse_amps_[i].index) {
                out.push_back({piv[j].index, two_c * piv[j].amplitude});
                ++j;
            } else {
                out.push_back({piv[j].index, two_c * piv[j].amplitude - sparse_amps_[i].amplitude});
                ++i;
                ++j;
            }
        }
        sparse_amps_ = std::move(out);
    }
    prune_and_renormalize();
}

QuantumState QuantumState::converted(Storage storage) const
{
    const bool dense = pick_dense(num_qubits(), storage);
    QuantumState s(layout_, dense);
    if (dense) {
        for (const auto& e : entries()) {
            s.dense_amps_[static_cast<std::size_t>(e.index)] = e.amplitude;
        }
    } else {
        s.sparse_amps_ = entries();
    }
    return s;
}

double MeasurementDistribution::probability(std::uint64_t outcome) const
{
    auto it = entries.find(outcome);
    return it == entries.end() ? 0.0 : it->second;
}

std::uint64_t MeasurementDistribution::most_likely() const
{
    if (entries.empty()) {
        throw ArgumentError("empty distribution");
    }
    auto best = entries.begin();
    for (auto it = entries.begin(); it != entries.end(); ++it) {
        if (it->second > best->second) {
            best = it;
        }
    }
    return best->first;
}

QuantumState basis_state(std::size_t num_qubits, std::uint64_t value)
{
    if (num_qubits == 0 || num_qubits > kMaxRegisterWidth) {
        throw ArgumentError("basis_state needs between 1 and 64 qubits");
    }
    if (num_qubits < 64 && value >= (std::uint64_t{1} << num_qubits)) {
        throw RangeError("value " + std::to_string(value) + " needs more than " + std::to_string(num_qubits) +
                         " qubits");
    }
    return basis_state(RegisterLayout({{"q", num_qubits}}), {{"q", value}});
}

QuantumState basis_state(const RegisterLayout& layout, const std::map<std::string, std::uint64_t>& values,
                         Storage storage)
{
    BasisIndex index = 0;
    for (const auto& [name, value] : values) {
        const Register& r = layout[name];
        if (value > r.max_value()) {
            throw RangeError("value " + std::to_string(value) + " does not fit register '" + name + "'");
        }
        index = write_register(index, layout.num_qubits(), r, value);
    }
    return QuantumState::from_amplitudes(layout, {{index, 1.0}}, storage);
}

QuantumState uniform_state(std::size_t num_qubits)
{
    if (num_qubits == 0) {
        throw ArgumentError("uniform_state needs at least one qubit");
    }
    if (num_qubits > kDenseHardLimit) {
        throw ArgumentError("uniform_state is limited to 30 qubits");
    }
    const std::size_t dim = std::size_t{1} << num_qubits;
    const double amp = std::pow(2.0, -static_cast<double>(num_qubits) / 2.0);
    std::vector<BasisAmplitude> amps;
    amps.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        amps.push_back({i, amp});
    }
    return QuantumState::from_amplitudes(RegisterLayout({{"q", num_qubits}}), std::move(amps));
}

QuantumState apply_gate(QuantumState state, const Gate& gate)
{
    state.apply(gate);
    return state;
}

QuantumState apply_circuit(QuantumState state, const Circuit& circuit)
{
    state.apply(circuit);
    return state;
}

MeasurementDistribution marginal_distribution(const QuantumState& state, const Register& reg)
{
    if (reg.width == 0 || reg.offset + reg.width > state.num_qubits()) {
        throw LayoutError("register '" + reg.name + "' is not part of the state");
    }
    MeasurementDistribution d{reg, {}};
    for (const auto& e : state.entries()) {
        d.entries[read_register(e.index, state.num_qubits(), reg)] += std::norm(e.amplitude);
    }
    return d;
}

MeasurementDistribution marginal_distribution(const QuantumState& state, std::string_view reg)
{
    return marginal_distribution(state, state.layout()[reg]);
}

std::map<std::uint64_t, std::size_t> sample(const MeasurementDistribution& distribution, std::uint64_t seed,
                                            std::size_t shots)
{
    if (shots == 0) {
        throw ArgumentError("shots must be at least 1");
    }
    if (distribution.entries.empty()) {
        throw ArgumentError("cannot sample an empty distribution");
    }
    std::vector<std::pair<std::uint64_t, double>> cumulative;
    double total = 0.0;
    for (const auto& [outcome, p] : distribution.entries) {
        total += p;
        cumulative.emplace_back(outcome, total);
    }
    std::mt19937_64 rng(seed);
    std::map<std::uint64_t, std::size_t> counts;
    for (std::size_t s = 0; s < shots; ++s) {
        // 53 random mantissa bits; std::uniform_real_distribution is not portable.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u,
                                   [](double v, const auto& c) { return v < c.second; });
        if (it == cumulative.end()) {
            --it;
        }
        ++counts[it->first];
    }
    return counts;
}

std::map<std::uint64_t, std::size_t> sample(const QuantumState& state, std::string_view reg,
                                            std::uint64_t seed, std::size_t shots)
{
    return sample(marginal_distribution(state, reg), seed, shots);
}

Amplitude inner_product(const QuantumState& bra, const QuantumState& ket)
{
    if (bra.num_qubits() != ket.num_qubits()) {
        throw ArgumentError("inner product of states with different qubit counts");
    }
    const auto l = bra.entries();
    const auto r = ket.entries();
    Amplitude sum{};
    std::size_t i = 0, j = 0;
    while (i < l.size() && j < r.size()) {
        if (l[i].index < r[j].index) {
            ++i;
        } else if (r[j].index < l[i].index) {
            ++j;
        } else {
            sum += std::conj(l[i].amplitude) * r[j].amplitude;
            ++i;
            ++j;
        }
    }
    return sum;
}

double fidelity(const QuantumState& s1, const QuantumState& s2)
{
    return std::min(1.0, std::norm(inner_product(s1, s2)));
}

} // namespace qbsc
