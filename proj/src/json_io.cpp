#include "nsg/json_io.hpp"

#include <fstream>

namespace nsg {

using nlohmann::json;

json instance_to_json(const Instance& inst) {
    json gates = json::array();
    for (std::uint32_t i = 0; i < inst.gate_count(); ++i) {
        const GateDescriptor g = inst.gate(i);
        json inputs = json::array();
        for (int j = 0; j < g.num_inputs(); ++j) inputs.push_back(g.inputs[static_cast<std::size_t>(j)]);
        gates.push_back({{"kind", gate_kind_name(g.kind)}, {"inputs", std::move(inputs)}});
    }
    return {{"n_bits", inst.n_bits()}, {"k", inst.output_index()}, {"gates", std::move(gates)}};
}

Instance instance_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("n_bits") || !doc.contains("k") ||
        !doc.contains("gates") || !doc["gates"].is_array())
        throw JsonFormatError("instance document needs n_bits, k and a gates array");
    const int n_bits = doc["n_bits"].get<int>();
    const auto k = doc["k"].get<std::uint32_t>();
    const auto& gates = doc["gates"];
    if (n_bits < 0 || n_bits > 30 || gates.size() != (std::size_t{1} << n_bits))
        throw JsonFormatError("gates array size does not match 2^n_bits");
    std::vector<GateDescriptor> table(gates.size());
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const auto& g = gates[i];
        const std::string where = "gate " + std::to_string(i);
        if (!g.is_object() || !g.contains("kind") || !g.contains("inputs") ||
            !g["inputs"].is_array())
            throw JsonFormatError(where + ": needs kind and an inputs array");
        GateDescriptor d;
        try {
            d.kind = gate_kind_from_name(g["kind"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw JsonFormatError(where + ": " + e.what());
        }
        const auto& inputs = g["inputs"];
        if (inputs.size() != static_cast<std::size_t>(arity(d.kind)))
            throw JsonFormatError(where + ": " + gate_kind_name(d.kind) + " takes " +
                                  std::to_string(arity(d.kind)) + " inputs, got " +
                                  std::to_string(inputs.size()));
        for (std::size_t j = 0; j < inputs.size(); ++j) {
            const auto idx = inputs[j].get<std::uint64_t>();
            if (idx >= gates.size())
                throw JsonFormatError(where + ": input index " + std::to_string(idx) +
                                      " out of range");
            d.inputs[j] = static_cast<std::uint32_t>(idx);
        }
        table[i] = d;
    }
    if (k >= table.size()) throw JsonFormatError("output index k out of range");
    return make_table_instance(std::move(table), k);
}

json game_to_json(const Game& g) {
    json rows = json::array();
    for (std::uint32_t s = 0; s < g.N; ++s) {
        json ts = json::array();
        for (std::uint32_t t = 0; t < g.N; ++t) {
            json ys = json::array();
            for (int y = 0; y < 4; ++y) {
                json zs = json::array();
                for (int z = 0; z < 2; ++z) {
                    const Rat& r = g.r(s, t, y, z);
                    if (r != 0 && r != 1)
                        throw JsonFormatError("game export expects a 0/1 predicate");
                    zs.push_back(r == 1 ? 1 : 0);
                }
                ys.push_back(std::move(zs));
            }
            ts.push_back(std::move(ys));
        }
        rows.push_back(std::move(ts));
    }
    return {{"N", g.N}, {"R", std::move(rows)}};
}

json strategy_to_json(const Strategy& p) {
    json rows = json::array();
    for (std::uint32_t s = 0; s < p.N; ++s) {
        json ts = json::array();
        for (std::uint32_t t = 0; t < p.N; ++t) {
            json ys = json::array();
            for (int y = 0; y < Strategy::kNumY; ++y) {
                json zs = json::array();
                for (int z = 0; z < Strategy::kNumZ; ++z)
                    zs.push_back(rat_to_string(p.at(s, t, y, z)));
                ys.push_back(std::move(zs));
            }
            ts.push_back(std::move(ys));
        }
        rows.push_back(std::move(ts));
    }
    return {{"N", p.N}, {"p", std::move(rows)}};
}

Strategy strategy_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("N") || !doc.contains("p") || !doc["p"].is_array())
        throw JsonFormatError("strategy document needs N and a p array");
    const auto n = doc["N"].get<std::uint32_t>();
    const auto& rows = doc["p"];
    Strategy p(n);
    if (rows.size() != n) throw JsonFormatError("strategy p array size does not match N");
    for (std::uint32_t s = 0; s < n; ++s) {
        const auto& ts = rows[s];
        if (!ts.is_array() || ts.size() != n)
            throw JsonFormatError("strategy row " + std::to_string(s) + " malformed");
        for (std::uint32_t t = 0; t < n; ++t) {
            const auto& ys = ts[t];
            if (!ys.is_array() || ys.size() != Strategy::kNumY)
                throw JsonFormatError("strategy cell (" + std::to_string(s) + "," +
                                      std::to_string(t) + ") malformed");
            for (int y = 0; y < Strategy::kNumY; ++y) {
                const auto& zs = ys[static_cast<std::size_t>(y)];
                if (!zs.is_array() || zs.size() != Strategy::kNumZ)
                    throw JsonFormatError("strategy cell (" + std::to_string(s) + "," +
                                          std::to_string(t) + ") malformed");
                for (int z = 0; z < Strategy::kNumZ; ++z) {
                    try {
                        p.at(s, t, y, z) =
                            rat_from_string(zs[static_cast<std::size_t>(z)].get<std::string>());
                    } catch (const std::invalid_argument& e) {
                        throw JsonFormatError("strategy cell (" + std::to_string(s) + "," +
                                              std::to_string(t) + "): " + e.what());
                    }
                }
            }
        }
    }
    p.validate();
    return p;
}

json run_report_to_json(const RunReport& report, const ProtocolConfig& cfg) {
    return {{"p_sim", report.p_sim},
            {"p_undo_alice", report.p_undo_alice},
            {"p_undo_bob", report.p_undo_bob},
            {"acceptance", report.acceptance},
            {"config",
             {{"k", cfg.k},
              {"alice_answer_bits", cfg.ay},
              {"bob_answer_bits", cfg.az},
              {"private_qubits", cfg.p_qubits},
              {"qubit_cap", cfg.qubit_cap},
              {"total_qubits", cfg.total_qubits()}}}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw JsonFormatError("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw JsonFormatError(path + ": " + e.what());
    }
    return doc;
}

void save_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out.good()) throw std::runtime_error("cannot write " + path);
    out << doc.dump(2) << "\n";
}

}  // namespace nsg
