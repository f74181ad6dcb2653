#ifndef ASOS_HYPERGRAPH_HPP
#define ASOS_HYPERGRAPH_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "asos/errors.hpp"
#include "asos/rng.hpp"
#include "asos/value.hpp"

namespace asos {

// ---------------------------------------------------------------------------
// Representation units: properties (nodes) and mechanisms (directed
// hyperedges). Ids are dense indices assigned in insertion order, so a
// scenario script always rebuilds to identical ids.
// ---------------------------------------------------------------------------

struct Property {
    int id = -1;
    int kind_id = -1;
    ValueKind value_kind = ValueKind::Real;
    bool active = true;
    std::string label; // diagnostic only, not part of identity
};

struct Mechanism {
    int id = -1;
    std::vector<int> source_ids; // unique, insertion order kept for argument order
    std::vector<int> target_ids;
    int fn_ref = -1;
    bool active = true;
    std::vector<int> group_keys; // optional subset of source_ids used by the allocator
    std::string label;
};

struct ObjectKind {
    int kind_id = -1;
    std::string name;
    std::vector<int> property_ids;
};

struct ObjectInstance {
    int instance_id = -1;
    int kind_id = -1;
    std::map<int, Value> state; // property id -> value
};

enum class ComponentType { Node, Hyperedge };

struct ComponentRef {
    ComponentType type = ComponentType::Node;
    int id = -1;
    bool operator==(const ComponentRef&) const = default;
    auto operator<=>(const ComponentRef&) const = default;
};

inline ComponentRef node_ref(int id) { return {ComponentType::Node, id}; }
inline ComponentRef edge_ref(int id) { return {ComponentType::Hyperedge, id}; }

// ---------------------------------------------------------------------------
// Function registry. Mechanism fn_refs index into it. Entries declare their
// arity contract (kAnyArity for environment rules whose arity is fixed by the
// mechanism declaration) and, optionally, which other entries they invoke;
// that metadata feeds the cross-call validator.
// ---------------------------------------------------------------------------

class Hypergraph;

struct MechContext {
    Hypergraph* graph = nullptr;
    RandomStream* rng = nullptr;
    void* env = nullptr; // scenario environment, owned by the simulation driver
    int mechanism_id = -1;
    int instance_id = -1;
};

using MechFn = std::function<std::vector<Value>(const std::vector<Value>&, MechContext&)>;

constexpr int kAnyArity = -1;

struct FunctionEntry {
    std::string name;
    int input_arity = kAnyArity;
    int output_arity = kAnyArity;
    MechFn fn;
    std::vector<int> invokes;   // fn ids this function is declared to call
    bool per_instance = true;   // pure per-instance rule (groupable / batchable)
};

class FunctionRegistry {
public:
    int register_fn(FunctionEntry e) {
        int id = static_cast<int>(entries_.size());
        entries_.push_back(std::move(e));
        by_name_[entries_.back().name] = id;
        return id;
    }

    const FunctionEntry& at(int id) const {
        if (id < 0 || id >= static_cast<int>(entries_.size()))
            throw ReferenceError("unknown fn_ref " + std::to_string(id));
        return entries_[static_cast<std::size_t>(id)];
    }

    bool contains(int id) const { return id >= 0 && id < static_cast<int>(entries_.size()); }

    int id_of(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) throw ReferenceError("unknown function '" + name + "'");
        return it->second;
    }

    bool has(const std::string& name) const { return by_name_.count(name) > 0; }

    int size() const { return static_cast<int>(entries_.size()); }

private:
    std::vector<FunctionEntry> entries_;
    std::map<std::string, int> by_name_;
};

// ---------------------------------------------------------------------------
// Abstraction-principle diagnostics
// ---------------------------------------------------------------------------

enum class ViolationType { Overlap, Dependency, CrossCall };

struct Violation {
    ViolationType type;
    int mechanism_a = -1;
    int mechanism_b = -1;
    std::string detail;
};

// ---------------------------------------------------------------------------
// Hypergraph
// ---------------------------------------------------------------------------

class Hypergraph {
public:
    explicit Hypergraph(FunctionRegistry* registry = nullptr) : registry_(registry) {}

    FunctionRegistry* registry() const { return registry_; }
    void set_registry(FunctionRegistry* r) { registry_ = r; }

    // --- kinds and instances -------------------------------------------------

    int add_kind(const std::string& name) {
        int id = static_cast<int>(kinds_.size());
        kinds_.push_back({id, name, {}});
        return id;
    }

    int add_instance(int kind_id) {
        check_kind(kind_id);
        ObjectInstance inst;
        inst.instance_id = static_cast<int>(instances_.size());
        inst.kind_id = kind_id;
        for (int pid : kinds_[static_cast<std::size_t>(kind_id)].property_ids)
            inst.state[pid] = Value::zero_of(properties_[static_cast<std::size_t>(pid)].value_kind);
        instances_.push_back(std::move(inst));
        return instances_.back().instance_id;
    }

    // --- nodes ----------------------------------------------------------------

    int add_property(int kind_id, ValueKind vk, const std::string& label = "") {
        check_kind(kind_id);
        Property p;
        p.id = static_cast<int>(properties_.size());
        p.kind_id = kind_id;
        p.value_kind = vk;
        p.active = true;
        p.label = label;
        properties_.push_back(p);
        kinds_[static_cast<std::size_t>(kind_id)].property_ids.push_back(p.id);
        // every existing instance of the kind gains the default value
        for (auto& inst : instances_)
            if (inst.kind_id == kind_id) inst.state[p.id] = Value::zero_of(vk);
        return p.id;
    }

    // --- hyperedges -------------------------------------------------------

    int add_mechanism(std::vector<int> source_ids, std::vector<int> target_ids, int fn_ref,
                      std::vector<int> group_keys = {}, const std::string& label = "") {
        for (int pid : source_ids) check_property(pid);
        for (int pid : target_ids) check_property(pid);
        dedupe_keep_order(source_ids);
        dedupe_keep_order(target_ids);
        for (int k : group_keys)
            if (std::find(source_ids.begin(), source_ids.end(), k) == source_ids.end())
                throw ContractError("group key " + std::to_string(k) + " is not a source property");
        if (registry_) {
            const FunctionEntry& e = registry_->at(fn_ref);
            if (e.input_arity != kAnyArity && e.input_arity != static_cast<int>(source_ids.size()))
                throw ContractError("fn '" + e.name + "' wants " + std::to_string(e.input_arity) +
                                    " inputs, mechanism declares " + std::to_string(source_ids.size()));
            if (e.output_arity != kAnyArity && e.output_arity != static_cast<int>(target_ids.size()))
                throw ContractError("fn '" + e.name + "' yields " + std::to_string(e.output_arity) +
                                    " outputs, mechanism declares " + std::to_string(target_ids.size()));
        }
        Mechanism m;
        m.id = static_cast<int>(mechanisms_.size());
        m.source_ids = std::move(source_ids);
        m.target_ids = std::move(target_ids);
        m.fn_ref = fn_ref;
        m.group_keys = std::move(group_keys);
        m.label = label;
        mechanisms_.push_back(std::move(m));
        return mechanisms_.back().id;
    }

    // --- activation plasticity ---------------------------------------------

    /// Sets a component's activation state. Deactivating a node cascades to
    /// every mechanism that lists it as a source. Activating a mechanism is
    /// suppressed while any of its source nodes is inactive, which keeps the
    /// cascade closure intact under arbitrary call sequences. Returns every
    /// component whose state changed.
    std::vector<ComponentRef> set_activation(ComponentRef ref, bool active) {
        std::vector<ComponentRef> changed;
        if (ref.type == ComponentType::Node) {
            Property& p = property_mut(ref.id);
            if (p.active != active) {
                p.active = active;
                changed.push_back(ref);
            }
            if (!active) {
                for (auto& m : mechanisms_) {
                    if (!m.active) continue;
                    if (std::find(m.source_ids.begin(), m.source_ids.end(), ref.id) != m.source_ids.end()) {
                        m.active = false;
                        changed.push_back(edge_ref(m.id));
                    }
                }
            }
        } else {
            Mechanism& m = mechanism_mut(ref.id);
            if (active && !sources_active(m)) return changed; // suppressed
            if (m.active != active) {
                m.active = active;
                changed.push_back(ref);
            }
        }
        return changed;
    }

    // --- abstraction-principle validation -----------------------------------

    std::vector<Violation> validate_principles() const {
        std::vector<Violation> out;
        for (std::size_t a = 0; a < mechanisms_.size(); ++a) {
            for (std::size_t b = a + 1; b < mechanisms_.size(); ++b) {
                const Mechanism& ma = mechanisms_[a];
                const Mechanism& mb = mechanisms_[b];
                if (same_id_set(ma.source_ids, mb.source_ids) && same_id_set(ma.target_ids, mb.target_ids)) {
                    if (ma.fn_ref == mb.fn_ref)
                        out.push_back({ViolationType::Overlap, ma.id, mb.id,
                                       "identical sources, targets and function"});
                    else
                        out.push_back({ViolationType::Dependency, ma.id, mb.id,
                                       "source and target sets entirely overlapped"});
                }
            }
        }
        if (registry_) {
            for (const auto& ma : mechanisms_) {
                if (!registry_->contains(ma.fn_ref)) continue;
                const auto& calls = registry_->at(ma.fn_ref).invokes;
                for (const auto& mb : mechanisms_) {
                    if (ma.id == mb.id) continue;
                    if (std::find(calls.begin(), calls.end(), mb.fn_ref) != calls.end())
                        out.push_back({ViolationType::CrossCall, ma.id, mb.id,
                                       "function declared to invoke the other mechanism's function"});
                }
            }
        }
        return out;
    }

    /// Structural checks used after protocol applications.
    void check_integrity() const {
        std::set<int> pids;
        for (const auto& p : properties_) {
            if (!pids.insert(p.id).second) throw ContractError("duplicate property id");
            check_kind(p.kind_id);
        }
        for (const auto& m : mechanisms_) {
            for (int pid : m.source_ids) check_property(pid);
            for (int pid : m.target_ids) check_property(pid);
            if (registry_) registry_->at(m.fn_ref);
        }
        for (const auto& inst : instances_) {
            const auto& kind = kinds_[static_cast<std::size_t>(inst.kind_id)];
            if (inst.state.size() != kind.property_ids.size())
                throw ContractError("instance state out of sync with kind");
            for (int pid : kind.property_ids) {
                auto it = inst.state.find(pid);
                if (it == inst.state.end()) throw ContractError("instance missing property value");
                if (!it->second.matches(properties_[static_cast<std::size_t>(pid)].value_kind))
                    throw ContractError("instance value kind mismatch");
            }
        }
    }

    // --- accessors ----------------------------------------------------------

    const std::vector<Property>& properties() const { return properties_; }
    const std::vector<Mechanism>& mechanisms() const { return mechanisms_; }
    const std::vector<ObjectKind>& kinds() const { return kinds_; }
    const std::vector<ObjectInstance>& instances() const { return instances_; }

    const Property& property(int id) const {
        if (id < 0 || id >= static_cast<int>(properties_.size()))
            throw ReferenceError("unknown property " + std::to_string(id));
        return properties_[static_cast<std::size_t>(id)];
    }
    Property& property_mut(int id) { return const_cast<Property&>(property(id)); }

    const Mechanism& mechanism(int id) const {
        if (id < 0 || id >= static_cast<int>(mechanisms_.size()))
            throw ReferenceError("unknown mechanism " + std::to_string(id));
        return mechanisms_[static_cast<std::size_t>(id)];
    }
    Mechanism& mechanism_mut(int id) { return const_cast<Mechanism&>(mechanism(id)); }

    const ObjectKind& kind(int id) const {
        check_kind(id);
        return kinds_[static_cast<std::size_t>(id)];
    }

    ObjectInstance& instance_mut(int id) {
        if (id < 0 || id >= static_cast<int>(instances_.size()))
            throw ReferenceError("unknown instance " + std::to_string(id));
        return instances_[static_cast<std::size_t>(id)];
    }
    const ObjectInstance& instance(int id) const { return const_cast<Hypergraph*>(this)->instance_mut(id); }

    /// Instance ids of a kind in ascending order.
    std::vector<int> instances_of_kind(int kind_id) const {
        std::vector<int> out;
        for (const auto& inst : instances_)
            if (inst.kind_id == kind_id) out.push_back(inst.instance_id);
        return out;
    }

    /// First instance of the property's kind; the resolution rule for
    /// reading non-subject (shared/singleton) sources during execution.
    int representative_instance(int property_id) const {
        int kid = property(property_id).kind_id;
        for (const auto& inst : instances_)
            if (inst.kind_id == kid) return inst.instance_id;
        throw ReferenceError("kind " + std::to_string(kid) + " has no instances");
    }

    const Value& value_of(int instance_id, int property_id) const {
        const auto& inst = instance(instance_id);
        auto it = inst.state.find(property_id);
        if (it == inst.state.end())
            throw ReferenceError("instance " + std::to_string(instance_id) +
                                 " has no property " + std::to_string(property_id));
        return it->second;
    }

    void set_value(int instance_id, int property_id, Value v) {
        auto& inst = instance_mut(instance_id);
        auto it = inst.state.find(property_id);
        if (it == inst.state.end())
            throw ReferenceError("instance " + std::to_string(instance_id) +
                                 " has no property " + std::to_string(property_id));
        const Property& p = property(property_id);
        if (!v.matches(p.value_kind)) {
            // scalar results coerce to the declared kind; sequences must match
            if (v.kind() == ValueKind::Seq || p.value_kind == ValueKind::Seq)
                throw ContractError("value kind mismatch writing property " + std::to_string(property_id));
            switch (p.value_kind) {
                case ValueKind::Real: v = Value::real(v.as_real()); break;
                case ValueKind::Int: v = Value::integer(v.as_int()); break;
                case ValueKind::Bool: v = Value::boolean(v.as_bool()); break;
                case ValueKind::Cat: v = Value::cat(v.as_int()); break;
                default: break;
            }
        }
        it->second = std::move(v);
    }

    /// Convenience for singleton kinds (market, factor world).
    double scalar(int property_id) const {
        return value_of(representative_instance(property_id), property_id).as_real();
    }
    void set_scalar(int property_id, double x) {
        const Property& p = property(property_id);
        Value v = p.value_kind == ValueKind::Real ? Value::real(x)
                : p.value_kind == ValueKind::Int  ? Value::integer(static_cast<std::int64_t>(x))
                : p.value_kind == ValueKind::Bool ? Value::boolean(x != 0.0)
                                                  : Value::cat(static_cast<std::int64_t>(x));
        set_value(representative_instance(property_id), property_id, std::move(v));
    }

    // --- alteration support -------------------------------------------------

    void alter_property_kind(int property_id, int new_kind_id) {
        check_kind(new_kind_id);
        Property& p = property_mut(property_id);
        if (p.kind_id == new_kind_id) return;
        auto& old_list = kinds_[static_cast<std::size_t>(p.kind_id)].property_ids;
        old_list.erase(std::remove(old_list.begin(), old_list.end(), property_id), old_list.end());
        for (auto& inst : instances_) {
            if (inst.kind_id == p.kind_id) inst.state.erase(property_id);
            if (inst.kind_id == new_kind_id) inst.state[property_id] = Value::zero_of(p.value_kind);
        }
        p.kind_id = new_kind_id;
        kinds_[static_cast<std::size_t>(new_kind_id)].property_ids.push_back(property_id);
    }

    void alter_property_value_kind(int property_id, ValueKind vk) {
        Property& p = property_mut(property_id);
        if (p.value_kind == vk) return;
        // convert stored values first so a failure leaves the graph untouched
        std::vector<std::pair<int, Value>> converted;
        for (auto& inst : instances_) {
            if (inst.kind_id != p.kind_id) continue;
            converted.emplace_back(inst.instance_id, inst.state.at(property_id).convert_to(vk));
        }
        for (auto& [iid, v] : converted)
            instances_[static_cast<std::size_t>(iid)].state[property_id] = std::move(v);
        p.value_kind = vk;
    }

    void alter_mechanism_fn(int mechanism_id, int new_fn_ref) {
        Mechanism& m = mechanism_mut(mechanism_id);
        if (registry_) {
            const FunctionEntry& e = registry_->at(new_fn_ref);
            if (e.input_arity != kAnyArity && e.input_arity != static_cast<int>(m.source_ids.size()))
                throw ContractError("fn '" + e.name + "' arity does not match mechanism sources");
            if (e.output_arity != kAnyArity && e.output_arity != static_cast<int>(m.target_ids.size()))
                throw ContractError("fn '" + e.name + "' arity does not match mechanism targets");
        }
        m.fn_ref = new_fn_ref;
    }

    bool sources_active(const Mechanism& m) const {
        for (int pid : m.source_ids)
            if (!property(pid).active) return false;
        return true;
    }

private:
    void check_kind(int kind_id) const {
        if (kind_id < 0 || kind_id >= static_cast<int>(kinds_.size()))
            throw ReferenceError("unknown kind " + std::to_string(kind_id));
    }
    void check_property(int pid) const { property(pid); }

    static void dedupe_keep_order(std::vector<int>& ids) {
        std::set<int> seen;
        std::vector<int> out;
        for (int id : ids)
            if (seen.insert(id).second) out.push_back(id);
        ids = std::move(out);
    }

    static bool same_id_set(const std::vector<int>& a, const std::vector<int>& b) {
        if (a.size() != b.size()) return false;
        std::vector<int> sa = a, sb = b;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        return sa == sb;
    }

    FunctionRegistry* registry_;
    std::vector<Property> properties_;
    std::vector<Mechanism> mechanisms_;
    std::vector<ObjectKind> kinds_;
    std::vector<ObjectInstance> instances_;
};

} // namespace asos

#endif
