#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsg {

// Raised when a gate descriptor violates arity or acyclicity.
struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GateKind : std::uint8_t { Zero, One, And, Or, Not };

inline int arity(GateKind k) {
    switch (k) {
        case GateKind::Zero:
        case GateKind::One: return 0;
        case GateKind::Not: return 1;
        case GateKind::And:
        case GateKind::Or: return 2;
    }
    throw std::invalid_argument("unknown gate kind");
}

std::string gate_kind_name(GateKind k);
GateKind gate_kind_from_name(const std::string& name);

struct GateDescriptor {
    GateKind kind = GateKind::Zero;
    std::array<std::uint32_t, 2> inputs{};  // only the first arity(kind) entries are meaningful

    int num_inputs() const { return arity(kind); }
};

// A circuit given by a descriptor oracle over 2^n_bits gates. The oracle is
// required to be pure: the same index always yields the same descriptor.
class Instance {
  public:
    using Oracle = std::function<GateDescriptor(std::uint32_t)>;

    Instance(int n_bits, std::uint32_t k, Oracle oracle);

    int n_bits() const { return n_bits_; }
    std::uint32_t gate_count() const { return std::uint32_t{1} << n_bits_; }
    std::uint32_t output_index() const { return k_; }
    GateDescriptor gate(std::uint32_t i) const;

  private:
    int n_bits_;
    std::uint32_t k_;
    Oracle oracle_;
};

// Explicit-table instance; gates.size() must be a power of two.
Instance make_table_instance(std::vector<GateDescriptor> gates, std::uint32_t k);

struct CircuitValues {
    std::vector<std::uint8_t> v;
};

// Forward-evaluates all gates. Throws StructureError on an acyclicity or
// arity violation anywhere in the descriptor range.
CircuitValues evaluate(const Instance& inst);

inline bool is_yes(const Instance& inst) {
    return evaluate(inst).v[inst.output_index()] == 1;
}

// Tower-of-ORs tightness family: g_0, g_1 ZERO; g_{2i}, g_{2i+1} identical
// ORs of the previous layer for 1 <= i <= h; padded with unused ZERO gates up
// to the next power of two. Output index 2h+1. Always a no-instance.
Instance tx_instance(int h);

// Deterministic random circuit; k chosen uniformly. yes_bias is the weight
// of ONE among constant gates.
Instance random_instance(std::uint64_t seed, int n_bits, double yes_bias = 0.5);

}  // namespace nsg
