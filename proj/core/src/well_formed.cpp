#include "dqbfloc/well_formed.hpp"

#include "dqbfloc/error.hpp"
#include "dqbfloc/formula.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace dqbfloc {

namespace {

VarSet intersect(const VarSet& a, const VarSet& b) {
    VarSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

/// Representative root path for every reachable node (breadth-first, lowest child index first).
std::vector<EdgePath> node_paths(const QuantifierGraph& g) {
    std::vector<EdgePath> paths(g.arena_size());
    std::vector<std::uint8_t> seen(g.arena_size(), 0);
    std::deque<NodeId> queue{g.root().target};
    seen[g.root().target] = 1;
    while (!queue.empty()) {
        NodeId id = queue.front();
        queue.pop_front();
        const auto& children = g.node(id).children;
        for (std::uint32_t i = 0; i < children.size(); ++i) {
            NodeId c = children[i].target;
            if (seen[c])
                continue;
            seen[c] = 1;
            paths[c] = paths[id];
            paths[c].push_back(i);
            queue.push_back(c);
        }
    }
    return paths;
}

class Checker {
public:
    explicit Checker(const Dqbf& f) : f_(f), cache_(f.graph) {}

    WellFormedReport run() {
        const auto& g = f_.graph;
        auto paths = node_paths(g);
        auto order = g.topological_order();
        std::vector<std::uint8_t> path_count(g.arena_size(), 0);
        path_count[g.root().target] = 1;
        for (NodeId id : order)
            for (const auto& c : g.node(id).children)
                path_count[c.target] = static_cast<std::uint8_t>(std::min(2, path_count[c.target] + path_count[id]));

        check_edge(g.root(), {}, 1);
        for (NodeId id : order) {
            const Node& n = g.node(id);
            if (!n.is_inner())
                continue;
            for (std::uint32_t i = 0; i < n.children.size(); ++i) {
                EdgePath p = paths[id];
                p.push_back(i);
                check_edge(n.children[i], p, path_count[id]);
            }
            check_siblings(n, paths[id]);
        }
        return std::move(report_);
    }

private:
    void add(std::string rule, EdgePath edge, VarId v, std::string message) {
        report_.violations.push_back(Violation{std::move(rule), std::move(edge), v, std::move(message)});
    }

    [[nodiscard]] std::string name(VarId v) const { return f_.vars.contains(v) ? f_.vars.name(v) : "#" + std::to_string(v.value); }

    void check_edge(const Edge& e, const EdgePath& path, int source_paths) {
        const auto& a = e.annotation;
        if (a.empty())
            return;
        const VarPartition& below = cache_.of_node(e.target);
        const VarSet bound_below = below.quantified();
        for (VarId v : a.all()) {
            if (!f_.vars.contains(v)) {
                add("registry", path, v, "annotated variable is not registered");
                continue;
            }
            if (source_paths > 1)
                add("duplicate-binding", path, v, name(v) + " is bound on a shared edge and thus quantified more than once");
            if (bound_below.contains(v))
                add("rebinding", path, v, name(v) + " is quantified again below its binding");
        }
        for (VarId v : intersect(a.foralls, a.exists))
            add("annotation", path, v, name(v) + " is both universally and existentially bound on one edge");
        for (VarId x : a.foralls)
            if (f_.vars.contains(x) && !f_.vars.is_universal(x))
                add("kind", path, x, name(x) + " is bound universally but registered " + std::string(to_string(f_.vars[x].kind)));
        for (VarId y : a.exists) {
            if (!f_.vars.contains(y))
                continue;
            if (!f_.vars.is_existential(y)) {
                add("kind", path, y, name(y) + " is bound existentially but registered " + std::string(to_string(f_.vars[y].kind)));
                continue;
            }
            const VarSet& deps = f_.vars[y].deps;
            if (deps.contains(y))
                add("dependency-set", path, y, name(y) + " depends on itself");
            for (VarId d : deps)
                if (f_.vars.contains(d) && f_.vars.is_existential(d))
                    add("dependency-set", path, y, "dependency set of " + name(y) + " contains existential " + name(d));
            for (VarId d : intersect(deps, bound_below))
                add("dependency-set", path, y,
                    "dependency set of " + name(y) + " contains " + name(d) + ", which is quantified below the binding of " + name(y));
        }
    }

    void check_siblings(const Node& n, const EdgePath& path) {
        std::vector<VarPartition> parts;
        parts.reserve(n.children.size());
        for (const auto& c : n.children)
            parts.push_back(cache_.of_edge(c));
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const VarSet q = parts[i].quantified();
            if (q.empty())
                continue;
            for (std::size_t j = 0; j < parts.size(); ++j) {
                if (i == j)
                    continue;
                EdgePath ep = path;
                ep.push_back(static_cast<std::uint32_t>(i));
                for (VarId v : intersect(q, parts[j].all()))
                    add("disjointness", ep, v,
                        name(v) + " is quantified in operand " + std::to_string(i) + " and occurs in operand " + std::to_string(j));
                for (VarId y : parts[j].exists)
                    for (VarId v : intersect(q, f_.vars[y].deps))
                        add("disjointness", ep, v,
                            name(v) + " is quantified in operand " + std::to_string(i) + " and belongs to the dependency set of " +
                                name(y) + " in operand " + std::to_string(j));
            }
        }
    }

    const Dqbf& f_;
    PartitionCache cache_;
    WellFormedReport report_;
};

} // namespace

std::string WellFormedReport::to_string() const {
    std::ostringstream os;
    for (const auto& v : violations)
        os << v.rule << " at " << dqbfloc::to_string(v.edge) << ": " << v.message << '\n';
    return os.str();
}

WellFormedReport well_formed(const Dqbf& f) {
    return Checker(f).run();
}

void require_well_formed(const Dqbf& f, const std::string& stage) {
    auto report = well_formed(f);
    if (!report.ok())
        throw WellFormednessError("ill-formed graph after " + stage + ":\n" + report.to_string());
}

} // namespace dqbfloc
