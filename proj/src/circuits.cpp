#include "nsg/circuits.hpp"

#include <memory>
#include <random>

namespace nsg {

std::string gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::Zero: return "ZERO";
        case GateKind::One: return "ONE";
        case GateKind::And: return "AND";
        case GateKind::Or: return "OR";
        case GateKind::Not: return "NOT";
    }
    throw std::invalid_argument("unknown gate kind");
}

GateKind gate_kind_from_name(const std::string& name) {
    if (name == "ZERO") return GateKind::Zero;
    if (name == "ONE") return GateKind::One;
    if (name == "AND") return GateKind::And;
    if (name == "OR") return GateKind::Or;
    if (name == "NOT") return GateKind::Not;
    throw std::invalid_argument("unknown gate kind: " + name);
}

Instance::Instance(int n_bits, std::uint32_t k, Oracle oracle)
    : n_bits_(n_bits), k_(k), oracle_(std::move(oracle)) {
    if (n_bits < 0 || n_bits > 30) throw std::invalid_argument("n_bits out of range");
    if (k >= gate_count()) throw std::invalid_argument("output index out of range");
    if (!oracle_) throw std::invalid_argument("null descriptor oracle");
}

GateDescriptor Instance::gate(std::uint32_t i) const {
    if (i >= gate_count()) throw std::invalid_argument("gate index out of range");
    return oracle_(i);
}

Instance make_table_instance(std::vector<GateDescriptor> gates, std::uint32_t k) {
    if (gates.empty() || (gates.size() & (gates.size() - 1)) != 0)
        throw std::invalid_argument("gate count must be a power of two");
    int n_bits = 0;
    while ((std::size_t{1} << n_bits) < gates.size()) ++n_bits;
    auto table = std::make_shared<std::vector<GateDescriptor>>(std::move(gates));
    return Instance(n_bits, k, [table](std::uint32_t i) { return (*table)[i]; });
}

CircuitValues evaluate(const Instance& inst) {
    const std::uint32_t n = inst.gate_count();
    CircuitValues out;
    out.v.resize(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        const GateDescriptor g = inst.gate(i);
        const int na = g.num_inputs();
        for (int j = 0; j < na; ++j)
            if (g.inputs[j] >= i)
                throw StructureError("gate " + std::to_string(i) + ": input " +
                                     std::to_string(g.inputs[j]) + " violates acyclicity");
        switch (g.kind) {
            case GateKind::Zero: out.v[i] = 0; break;
            case GateKind::One: out.v[i] = 1; break;
            case GateKind::Not: out.v[i] = !out.v[g.inputs[0]]; break;
            case GateKind::And: out.v[i] = out.v[g.inputs[0]] & out.v[g.inputs[1]]; break;
            case GateKind::Or: out.v[i] = out.v[g.inputs[0]] | out.v[g.inputs[1]]; break;
        }
    }
    return out;
}

Instance tx_instance(int h) {
    if (h < 1) throw std::invalid_argument("tx_instance requires h >= 1");
    const std::uint32_t used = 2u * static_cast<std::uint32_t>(h) + 2u;
    int n_bits = 0;
    while ((std::uint32_t{1} << n_bits) < used) ++n_bits;
    // Formula-backed oracle; padding gates are ZERO and never referenced.
    auto oracle = [used](std::uint32_t i) -> GateDescriptor {
        if (i < 2 || i >= used) return GateDescriptor{GateKind::Zero, {}};
        const std::uint32_t layer = i / 2;  // 1..h
        return GateDescriptor{GateKind::Or, {2 * (layer - 1), 2 * (layer - 1) + 1}};
    };
    return Instance(n_bits, used - 1, oracle);
}

Instance random_instance(std::uint64_t seed, int n_bits, double yes_bias) {
    if (n_bits < 1 || n_bits > 5) throw std::invalid_argument("random_instance: n_bits in [1,5]");
    std::mt19937_64 rng(seed);
    const std::uint32_t n = std::uint32_t{1} << n_bits;
    std::vector<GateDescriptor> gates(n);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::uint32_t i = 0; i < n; ++i) {
        GateDescriptor g;
        // Gate 0 has no candidates for inputs, so it is always a constant.
        const bool constant = (i == 0) || coin(rng) < 0.3;
        if (constant) {
            g.kind = coin(rng) < yes_bias ? GateKind::One : GateKind::Zero;
        } else {
            const double c = coin(rng);
            g.kind = c < 0.35 ? GateKind::And : c < 0.7 ? GateKind::Or : GateKind::Not;
            std::uniform_int_distribution<std::uint32_t> pick(0, i - 1);
            for (int j = 0; j < arity(g.kind); ++j) g.inputs[j] = pick(rng);
        }
        gates[i] = g;
    }
    std::uniform_int_distribution<std::uint32_t> pick_k(0, n - 1);
    const std::uint32_t k = pick_k(rng);
    return make_table_instance(std::move(gates), k);
}

}  // namespace nsg
