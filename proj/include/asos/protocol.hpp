#ifndef ASOS_PROTOCOL_HPP
#define ASOS_PROTOCOL_HPP

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "asos/hypergraph.hpp"
#include "asos/scheduler.hpp"

namespace asos {

// ---------------------------------------------------------------------------
// Standardized graph operations as flat integer vectors:
//   [operation tag, component tag, payload length, payload...]
// Tags: alteration=0, addition=1, elimination=2, rescheduling=3;
// component: node=0, hyperedge=1. The layout is frozen; solution files store
// one encoded op per line, integers space-separated.
// ---------------------------------------------------------------------------

enum class OperationType { Alteration = 0, Addition = 1, Elimination = 2, Rescheduling = 3 };

struct AlterNode {
    int property_id = -1;
    std::optional<int> new_kind_id;
    std::optional<ValueKind> new_value_kind;
    bool operator==(const AlterNode&) const = default;
};

struct AlterEdge {
    int mechanism_id = -1;
    int new_fn_ref = -1;
    bool operator==(const AlterEdge&) const = default;
};

struct AddNode {
    int kind_id = -1;
    ValueKind value_kind = ValueKind::Real;
    bool operator==(const AddNode&) const = default;
};

struct AddEdge {
    std::vector<int> source_ids;
    std::vector<int> target_ids;
    int fn_ref = -1;
    bool operator==(const AddEdge&) const = default;
};

struct Eliminate {
    std::vector<std::uint8_t> mask; // ascending component id order
    bool operator==(const Eliminate&) const = default;
};

struct Reschedule {
    std::vector<int> mechanism_ids;
    bool operator==(const Reschedule&) const = default;
};

struct OperationVector {
    OperationType operation_type = OperationType::Alteration;
    ComponentType component_type = ComponentType::Node;
    std::variant<AlterNode, AlterEdge, AddNode, AddEdge, Eliminate, Reschedule> content;
    bool operator==(const OperationVector&) const = default;
};

inline OperationVector alter_node_op(AlterNode a) {
    return {OperationType::Alteration, ComponentType::Node, std::move(a)};
}
inline OperationVector alter_edge_op(AlterEdge a) {
    return {OperationType::Alteration, ComponentType::Hyperedge, std::move(a)};
}
inline OperationVector add_node_op(AddNode a) {
    return {OperationType::Addition, ComponentType::Node, std::move(a)};
}
inline OperationVector add_edge_op(AddEdge a) {
    return {OperationType::Addition, ComponentType::Hyperedge, std::move(a)};
}
inline OperationVector eliminate_op(ComponentType ct, std::vector<std::uint8_t> mask) {
    return {OperationType::Elimination, ct, Eliminate{std::move(mask)}};
}
inline OperationVector reschedule_op(std::vector<int> ids) {
    return {OperationType::Rescheduling, ComponentType::Hyperedge, Reschedule{std::move(ids)}};
}

// --- encode ---------------------------------------------------------------

inline std::vector<long long> encode(const OperationVector& op) {
    std::vector<long long> payload;
    switch (op.operation_type) {
        case OperationType::Alteration:
            if (op.component_type == ComponentType::Node) {
                const auto& a = std::get<AlterNode>(op.content);
                payload = {a.property_id,
                           a.new_kind_id ? 1 : 0, a.new_kind_id.value_or(0),
                           a.new_value_kind ? 1 : 0,
                           a.new_value_kind ? static_cast<long long>(*a.new_value_kind) : 0};
            } else {
                const auto& a = std::get<AlterEdge>(op.content);
                payload = {a.mechanism_id, a.new_fn_ref};
            }
            break;
        case OperationType::Addition:
            if (op.component_type == ComponentType::Node) {
                const auto& a = std::get<AddNode>(op.content);
                payload = {a.kind_id, static_cast<long long>(a.value_kind)};
            } else {
                const auto& a = std::get<AddEdge>(op.content);
                payload.push_back(static_cast<long long>(a.source_ids.size()));
                for (int id : a.source_ids) payload.push_back(id);
                payload.push_back(static_cast<long long>(a.target_ids.size()));
                for (int id : a.target_ids) payload.push_back(id);
                payload.push_back(a.fn_ref);
            }
            break;
        case OperationType::Elimination: {
            const auto& e = std::get<Eliminate>(op.content);
            for (auto bit : e.mask) payload.push_back(bit);
            break;
        }
        case OperationType::Rescheduling: {
            const auto& r = std::get<Reschedule>(op.content);
            for (int id : r.mechanism_ids) payload.push_back(id);
            break;
        }
    }
    std::vector<long long> out;
    out.reserve(payload.size() + 3);
    out.push_back(static_cast<long long>(op.operation_type));
    out.push_back(op.component_type == ComponentType::Node ? 0 : 1);
    out.push_back(static_cast<long long>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

// --- decode ---------------------------------------------------------------

inline OperationVector decode(const std::vector<long long>& seq) {
    auto need = [&](std::size_t at) -> long long {
        if (at >= seq.size()) throw DecodeError("truncated operation vector", at);
        return seq[at];
    };
    long long op_tag = need(0);
    if (op_tag < 0 || op_tag > 3) throw DecodeError("operation tag out of range", 0);
    long long comp_tag = need(1);
    if (comp_tag != 0 && comp_tag != 1) throw DecodeError("component tag out of range", 1);
    long long len = need(2);
    if (len < 0) throw DecodeError("negative payload length", 2);
    if (seq.size() != static_cast<std::size_t>(len) + 3)
        throw DecodeError("payload length mismatch", seq.size() < static_cast<std::size_t>(len) + 3
                                                         ? seq.size()
                                                         : static_cast<std::size_t>(len) + 3);
    auto at = [&](long long i) { return need(static_cast<std::size_t>(3 + i)); };

    OperationVector op;
    op.operation_type = static_cast<OperationType>(op_tag);
    op.component_type = comp_tag == 0 ? ComponentType::Node : ComponentType::Hyperedge;
    switch (op.operation_type) {
        case OperationType::Alteration:
            if (comp_tag == 0) {
                if (len != 5) throw DecodeError("node alteration payload must have 5 entries", 2);
                AlterNode a;
                a.property_id = static_cast<int>(at(0));
                if (at(1)) a.new_kind_id = static_cast<int>(at(2));
                if (at(3)) {
                    long long vk = at(4);
                    if (vk < 0 || vk > 4) throw DecodeError("value kind out of range", 7);
                    a.new_value_kind = static_cast<ValueKind>(vk);
                }
                op.content = a;
            } else {
                if (len != 2) throw DecodeError("edge alteration payload must have 2 entries", 2);
                op.content = AlterEdge{static_cast<int>(at(0)), static_cast<int>(at(1))};
            }
            break;
        case OperationType::Addition:
            if (comp_tag == 0) {
                if (len != 2) throw DecodeError("node addition payload must have 2 entries", 2);
                long long vk = at(1);
                if (vk < 0 || vk > 4) throw DecodeError("value kind out of range", 4);
                op.content = AddNode{static_cast<int>(at(0)), static_cast<ValueKind>(vk)};
            } else {
                AddEdge a;
                long long i = 0;
                long long ns = at(i++);
                if (ns < 0 || i + ns > len) throw DecodeError("bad source count", static_cast<std::size_t>(3 + i - 1));
                for (long long k = 0; k < ns; ++k) a.source_ids.push_back(static_cast<int>(at(i++)));
                long long nt = at(i++);
                if (nt < 0 || i + nt + 1 != len)
                    throw DecodeError("bad target count", static_cast<std::size_t>(3 + i - 1));
                for (long long k = 0; k < nt; ++k) a.target_ids.push_back(static_cast<int>(at(i++)));
                a.fn_ref = static_cast<int>(at(i++));
                op.content = a;
            }
            break;
        case OperationType::Elimination: {
            Eliminate e;
            for (long long k = 0; k < len; ++k) {
                long long bit = at(k);
                if (bit != 0 && bit != 1) throw DecodeError("mask entries must be 0/1", static_cast<std::size_t>(3 + k));
                e.mask.push_back(static_cast<std::uint8_t>(bit));
            }
            op.content = e;
            break;
        }
        case OperationType::Rescheduling: {
            Reschedule r;
            for (long long k = 0; k < len; ++k) r.mechanism_ids.push_back(static_cast<int>(at(k)));
            op.content = r;
            break;
        }
    }
    return op;
}

// --- line format ------------------------------------------------------------

inline std::string encode_to_line(const OperationVector& op) {
    std::ostringstream os;
    auto seq = encode(op);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) os << ' ';
        os << seq[i];
    }
    return os.str();
}

inline OperationVector decode_from_line(const std::string& line) {
    std::istringstream is(line);
    std::vector<long long> seq;
    long long x;
    while (is >> x) seq.push_back(x);
    return decode(seq);
}

// --- apply ------------------------------------------------------------------

struct ChangeReport {
    std::vector<ComponentRef> activation_changes;
    std::vector<int> added_properties;
    std::vector<int> added_mechanisms;
    std::vector<int> altered_properties;
    std::vector<int> altered_mechanisms;
    bool rescheduled = false;
    bool empty() const {
        return activation_changes.empty() && added_properties.empty() && added_mechanisms.empty() &&
               altered_properties.empty() && altered_mechanisms.empty() && !rescheduled;
    }
};

/// Applies one standardized operation to the graph/scheduler pair.
/// Elimination masks address components in ascending id order and must match
/// the current component count.
inline ChangeReport apply_operation(Hypergraph& graph, Scheduler& scheduler, const OperationVector& op) {
    ChangeReport report;
    switch (op.operation_type) {
        case OperationType::Alteration:
            if (op.component_type == ComponentType::Node) {
                const auto& a = std::get<AlterNode>(op.content);
                graph.property(a.property_id);
                if (a.new_kind_id) graph.alter_property_kind(a.property_id, *a.new_kind_id);
                if (a.new_value_kind) graph.alter_property_value_kind(a.property_id, *a.new_value_kind);
                if (a.new_kind_id || a.new_value_kind) report.altered_properties.push_back(a.property_id);
            } else {
                const auto& a = std::get<AlterEdge>(op.content);
                graph.alter_mechanism_fn(a.mechanism_id, a.new_fn_ref);
                report.altered_mechanisms.push_back(a.mechanism_id);
            }
            break;
        case OperationType::Addition:
            if (op.component_type == ComponentType::Node) {
                const auto& a = std::get<AddNode>(op.content);
                report.added_properties.push_back(graph.add_property(a.kind_id, a.value_kind));
            } else {
                const auto& a = std::get<AddEdge>(op.content);
                report.added_mechanisms.push_back(graph.add_mechanism(a.source_ids, a.target_ids, a.fn_ref));
            }
            break;
        case OperationType::Elimination: {
            const auto& e = std::get<Eliminate>(op.content);
            std::size_t count = op.component_type == ComponentType::Node ? graph.properties().size()
                                                                         : graph.mechanisms().size();
            if (e.mask.size() != count)
                throw ContractError("elimination mask length " + std::to_string(e.mask.size()) +
                                    " does not match component count " + std::to_string(count));
            for (std::size_t i = 0; i < e.mask.size(); ++i) {
                ComponentRef ref{op.component_type, static_cast<int>(i)};
                bool want = e.mask[i] != 0;
                bool cur = op.component_type == ComponentType::Node
                               ? graph.property(ref.id).active
                               : graph.mechanism(ref.id).active;
                if (cur == want) continue;
                auto changed = graph.set_activation(ref, want);
                report.activation_changes.insert(report.activation_changes.end(), changed.begin(), changed.end());
            }
            break;
        }
        case OperationType::Rescheduling: {
            const auto& r = std::get<Reschedule>(op.content);
            scheduler.reschedule(r.mechanism_ids);
            report.rescheduled = true;
            break;
        }
    }
    return report;
}

inline std::vector<std::uint8_t> activation_mask(const Hypergraph& graph, ComponentType ct) {
    std::vector<std::uint8_t> mask;
    if (ct == ComponentType::Node) {
        mask.reserve(graph.properties().size());
        for (const auto& p : graph.properties()) mask.push_back(p.active ? 1 : 0);
    } else {
        mask.reserve(graph.mechanisms().size());
        for (const auto& m : graph.mechanisms()) mask.push_back(m.active ? 1 : 0);
    }
    return mask;
}

} // namespace asos

#endif
