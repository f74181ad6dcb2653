#ifndef ASOS_SCHEDULER_HPP
#define ASOS_SCHEDULER_HPP

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "asos/hypergraph.hpp"

namespace asos {

// ---------------------------------------------------------------------------
// DAG scheduler: mechanism execution order is a topological order of an
// authored dependency DAG, with ascending-id tie-breaking so plans are
// reproducible. Plans admit elimination, addition and repetition.
// ---------------------------------------------------------------------------

struct ScheduleDag {
    std::set<int> nodes;                     // mechanism ids
    std::set<std::pair<int, int>> edges;     // (before, after)

    void add_node(int id) { nodes.insert(id); }
    void add_edge(int before, int after) {
        nodes.insert(before);
        nodes.insert(after);
        edges.insert({before, after});
    }
};

struct ExecutionPlan {
    std::vector<int> steps; // mechanism ids, repetitions permitted
};

struct AllocationGroup {
    int mechanism_id = -1;
    // each group: instances sharing the same grouping-key value tuple,
    // ordered by key tuple then ascending instance id
    std::vector<std::vector<int>> groups;
};

struct StepEvent {
    int step_index = -1;
    int mechanism_id = -1;
    int instance_count = 0;
};

/// Topological order; simultaneously-ready nodes drain in ascending id.
/// A cycle raises CycleError naming one cycle's node set.
inline ExecutionPlan build_plan(const ScheduleDag& dag) {
    std::map<int, int> indegree;
    std::map<int, std::vector<int>> out;
    for (int n : dag.nodes) indegree[n] = 0;
    for (const auto& [a, b] : dag.edges) {
        out[a].push_back(b);
        ++indegree[b];
    }
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (const auto& [n, d] : indegree)
        if (d == 0) ready.push(n);
    ExecutionPlan plan;
    while (!ready.empty()) {
        int n = ready.top();
        ready.pop();
        plan.steps.push_back(n);
        for (int m : out[n])
            if (--indegree[m] == 0) ready.push(m);
    }
    if (plan.steps.size() != dag.nodes.size()) {
        // walk the residual graph to report one concrete cycle
        std::set<int> remaining;
        for (const auto& [n, d] : indegree)
            if (d > 0) remaining.insert(n);
        std::vector<int> cycle;
        if (!remaining.empty()) {
            int start = *remaining.begin();
            std::vector<int> path;
            std::set<int> on_path;
            int cur = start;
            while (!on_path.count(cur)) {
                on_path.insert(cur);
                path.push_back(cur);
                for (int nxt : out[cur])
                    if (remaining.count(nxt)) { cur = nxt; break; }
            }
            auto it = std::find(path.begin(), path.end(), cur);
            cycle.assign(it, path.end());
        }
        throw CycleError("schedule dag contains a cycle", cycle);
    }
    return plan;
}

/// Bound to one hypergraph; owns the DAG and the current plan.
class Scheduler {
public:
    explicit Scheduler(Hypergraph* graph) : graph_(graph) {}

    ScheduleDag& dag() { return dag_; }
    const ScheduleDag& dag() const { return dag_; }
    const ExecutionPlan& plan() const { return plan_; }

    void rebuild_plan() { plan_ = build_plan(dag_); }

    /// Replaces the plan verbatim (repetition and omission allowed) and
    /// collapses the backing DAG to the chain induced by first occurrences.
    void reschedule(const std::vector<int>& indices) {
        for (int id : indices) graph_->mechanism(id); // existence check
        plan_.steps = indices;
        dag_ = ScheduleDag{};
        std::vector<int> uniq;
        std::set<int> seen;
        for (int id : indices)
            if (seen.insert(id).second) uniq.push_back(id);
        for (int id : uniq) dag_.add_node(id);
        for (std::size_t i = 1; i < uniq.size(); ++i) dag_.add_edge(uniq[i - 1], uniq[i]);
    }

    Hypergraph* graph() const { return graph_; }

private:
    Hypergraph* graph_;
    ScheduleDag dag_;
    ExecutionPlan plan_;
};

/// Groups the subject kind's instances by the tuple of grouping-key values.
/// The subject kind is the kind of the mechanism's first target property.
/// Mechanisms with no grouping keys yield one group of all instances.
inline AllocationGroup allocate_groups(const Hypergraph& graph, int mechanism_id) {
    const Mechanism& m = graph.mechanism(mechanism_id);
    AllocationGroup alloc;
    alloc.mechanism_id = mechanism_id;
    if (m.target_ids.empty()) return alloc;
    int subject_kind = graph.property(m.target_ids.front()).kind_id;
    std::vector<int> instances = graph.instances_of_kind(subject_kind);
    if (m.group_keys.empty()) {
        if (!instances.empty()) alloc.groups.push_back(std::move(instances));
        return alloc;
    }
    std::map<std::vector<double>, std::vector<int>> buckets;
    for (int iid : instances) {
        std::vector<double> key;
        key.reserve(m.group_keys.size());
        for (int pid : m.group_keys) {
            const Property& p = graph.property(pid);
            int holder = p.kind_id == subject_kind ? iid : graph.representative_instance(pid);
            key.push_back(graph.value_of(holder, pid).as_real());
        }
        buckets[key].push_back(iid);
    }
    for (auto& [key, members] : buckets) alloc.groups.push_back(std::move(members));
    return alloc;
}

namespace detail {

inline std::vector<Value> gather_sources(const Hypergraph& graph, const Mechanism& m,
                                         int subject_kind, int instance_id) {
    std::vector<Value> in;
    in.reserve(m.source_ids.size());
    for (int pid : m.source_ids) {
        const Property& p = graph.property(pid);
        int holder = (p.kind_id == subject_kind && instance_id >= 0)
                         ? instance_id
                         : graph.representative_instance(pid);
        in.push_back(graph.value_of(holder, pid));
    }
    return in;
}

inline void scatter_targets(Hypergraph& graph, const Mechanism& m, int instance_id,
                            std::vector<Value>&& out) {
    if (out.size() != m.target_ids.size())
        throw ContractError("mechanism " + std::to_string(m.id) + " produced " +
                            std::to_string(out.size()) + " outputs for " +
                            std::to_string(m.target_ids.size()) + " targets");
    for (std::size_t k = 0; k < out.size(); ++k)
        graph.set_value(instance_id, m.target_ids[k], std::move(out[k]));
}

} // namespace detail

/// Runs the plan in order with strict sequential semantics: each step reads
/// current values and writes its targets before the next step entry runs.
/// Inactive mechanisms are skipped. When every subject-kind source of a
/// per-instance function is a grouping key, the function runs once per group
/// and the result is broadcast; otherwise it runs per instance.
inline std::vector<StepEvent> execute_step(Hypergraph& graph, const ExecutionPlan& plan,
                                           RandomStream& rng, void* env = nullptr) {
    std::vector<StepEvent> log;
    int step_index = 0;
    for (int mid : plan.steps) {
        const Mechanism& m = graph.mechanism(mid);
        ++step_index;
        if (!m.active) continue;
        const FunctionEntry& entry = graph.registry()->at(m.fn_ref);
        MechContext ctx{&graph, &rng, env, mid, -1};

        StepEvent ev{step_index - 1, mid, 0};
        try {
            if (m.target_ids.empty()) {
                // environment rule with no property outputs
                auto in = detail::gather_sources(graph, m, -1, -1);
                entry.fn(in, ctx);
            } else {
                int subject_kind = graph.property(m.target_ids.front()).kind_id;
                AllocationGroup alloc = allocate_groups(graph, mid);
                bool shareable = entry.per_instance && !m.group_keys.empty();
                if (shareable) {
                    for (int pid : m.source_ids) {
                        const Property& p = graph.property(pid);
                        if (p.kind_id == subject_kind &&
                            std::find(m.group_keys.begin(), m.group_keys.end(), pid) == m.group_keys.end()) {
                            shareable = false;
                            break;
                        }
                    }
                }
                for (const auto& group : alloc.groups) {
                    if (shareable) {
                        ctx.instance_id = group.front();
                        auto in = detail::gather_sources(graph, m, subject_kind, group.front());
                        auto out = entry.fn(in, ctx);
                        for (int iid : group) {
                            auto copy = out;
                            detail::scatter_targets(graph, m, iid, std::move(copy));
                            ++ev.instance_count;
                        }
                    } else {
                        for (int iid : group) {
                            ctx.instance_id = iid;
                            auto in = detail::gather_sources(graph, m, subject_kind, iid);
                            auto out = entry.fn(in, ctx);
                            detail::scatter_targets(graph, m, iid, std::move(out));
                            ++ev.instance_count;
                        }
                    }
                }
            }
        } catch (const StepError&) {
            throw;
        } catch (const std::exception& e) {
            throw StepError(std::string("mechanism failed: ") + e.what(), mid);
        }
        log.push_back(ev);
    }
    return log;
}

} // namespace asos

#endif
