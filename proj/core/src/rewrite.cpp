#include "dqbfloc/rewrite.hpp"

#include "dqbfloc/error.hpp"
#include "dqbfloc/formula.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <sstream>

namespace dqbfloc {

namespace {

struct RuleInfo {
    RuleId id;
    std::string_view name;
    Soundness soundness;
};

constexpr std::array<RuleInfo, 9> kRules{{
    {RuleId::DropExists, "drop-exists", Soundness::Equisat},
    {RuleId::DropForall, "drop-forall", Soundness::Equisat},
    {RuleId::ForallCofactor, "forall-cofactor", Soundness::Equivalence},
    {RuleId::ExistsCofactor, "exists-cofactor", Soundness::Equisat},
    {RuleId::ForallAndDistribute, "forall-and-distribute", Soundness::Equisat},
    {RuleId::ForallAndScope, "forall-and-scope", Soundness::Equisat},
    {RuleId::ForallOpScope, "forall-op-scope", Soundness::Equivalence},
    {RuleId::ExistsOrDistribute, "exists-or-distribute", Soundness::Equisat},
    {RuleId::ExistsOpScope, "exists-op-scope", Soundness::Equivalence},
}};

const RuleInfo& info(RuleId r) {
    return kRules.at(static_cast<std::size_t>(r));
}

bool is_universal_rule(RuleId r) {
    switch (r) {
    case RuleId::DropForall:
    case RuleId::ForallCofactor:
    case RuleId::ForallAndDistribute:
    case RuleId::ForallAndScope:
    case RuleId::ForallOpScope:
        return true;
    default:
        return false;
    }
}

VarSet intersect(const VarSet& a, const VarSet& b) {
    VarSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

Edge bare(const Edge& e) {
    return Edge{e.target, e.negated, {}};
}

std::size_t count_incoming(const QuantifierGraph& g, NodeId target) {
    std::size_t n = g.root().target == target ? 1 : 0;
    for (NodeId id : g.postorder())
        for (const auto& c : g.node(id).children)
            if (c.target == target)
                ++n;
    return n;
}

/// Checks the side conditions of one rule application and records every result.
class Checker {
public:
    Checker(Dqbf& f, const EdgePath& at, RuleId rule, VarId var, const RuleArgs& args)
        : f_(f), at_(at), rule_(rule), var_(var), args_(args), cache_(f.graph) {}

    /// Returns the child subset to act on, or nullopt after recording a refusal.
    std::optional<std::vector<std::uint32_t>> run() {
        const Edge* edge = nullptr;
        try {
            edge = &edge_at(f_.graph, at_);
        } catch (const PreconditionError& e) {
            refuse("position", e.what());
            return std::nullopt;
        }
        const Edge& e = *edge;
        const bool universal = is_universal_rule(rule_);
        const std::string vname = name(var_);
        if (!require("bound", universal ? e.annotation.foralls.contains(var_) : e.annotation.exists.contains(var_),
                     vname + " is not " + (universal ? "universally" : "existentially") + " bound on edge " + to_string(at_)))
            return std::nullopt;

        if (universal && rule_ != RuleId::DropForall) {
            for (VarId y : e.annotation.exists)
                if (f_.vars[y].deps.contains(var_))
                    return fail("innermost", vname + " ∈ D_" + name(y) + " for " + name(y) + " bound on the same edge");
            pass("innermost");
        }

        const Node& n = f_.graph.node(e.target);
        switch (rule_) {
        case RuleId::DropExists:
        case RuleId::DropForall: {
            const bool occurs = cache_.of_node(e.target).mentions(var_);
            if (!require(std::string(universal ? "x" : "y") + " ∉ var(φ)", !occurs, vname + " occurs in the subformula"))
                return std::nullopt;
            return std::vector<std::uint32_t>{};
        }
        case RuleId::ForallCofactor:
        case RuleId::ExistsCofactor:
            return check_cofactor(e);
        default:
            break;
        }

        if (!require("gate", n.is_inner() && !e.negated, "the subformula is not an And/Or gate in negation normal form"))
            return std::nullopt;
        const bool is_and = n.kind == NodeKind::And;
        if ((rule_ == RuleId::ForallAndDistribute || rule_ == RuleId::ForallAndScope) &&
            !require("gate", is_and, "the gate is a disjunction"))
            return std::nullopt;
        if (rule_ == RuleId::ExistsOrDistribute && !require("gate", !is_and, "the gate is a conjunction"))
            return std::nullopt;

        std::vector<VarPartition> parts;
        for (const auto& c : n.children)
            parts.push_back(cache_.of_edge(c));
        auto dependent = [&](const VarPartition& p) {
            return std::any_of(p.exists.begin(), p.exists.end(), [&](VarId y) { return f_.vars[y].deps.contains(var_); });
        };

        std::vector<std::uint32_t> subset;
        if (args_.children) {
            subset = *args_.children;
            std::sort(subset.begin(), subset.end());
            subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
            if (!subset.empty() && subset.back() >= n.children.size())
                return fail("child subset", "child index " + std::to_string(subset.back()) + " out of range");
        } else {
            for (std::uint32_t i = 0; i < parts.size(); ++i)
                if (parts[i].mentions(var_) || (rule_ == RuleId::ForallOpScope && dependent(parts[i])))
                    subset.push_back(i);
        }
        auto in_subset = [&](std::uint32_t i) { return std::binary_search(subset.begin(), subset.end(), i); };

        const std::string phi1 = universal ? "x ∉ var(φ1)" : "y ∉ var(φ1)";
        for (std::uint32_t i = 0; i < parts.size(); ++i)
            if (!in_subset(i) && parts[i].mentions(var_))
                return fail(phi1, vname + " occurs in child " + std::to_string(i) + " outside the chosen subset");
        pass(phi1);

        if (rule_ == RuleId::ForallOpScope) {
            for (std::uint32_t i = 0; i < parts.size(); ++i) {
                if (in_subset(i))
                    continue;
                for (VarId y : parts[i].exists)
                    if (f_.vars[y].deps.contains(var_))
                        return fail("x ∉ D_y for all y ∈ V∃(φ1)",
                                    vname + " ∈ D_" + name(y) + " for " + name(y) + " ∈ V∃(φ1), child " + std::to_string(i));
            }
            pass("x ∉ D_y for all y ∈ V∃(φ1)");
        }

        const std::size_t k = subset.size();
        switch (rule_) {
        case RuleId::ForallAndDistribute:
            if (!require("child subset", k >= 1, "no child receives the quantifier"))
                return std::nullopt;
            break;
        case RuleId::ExistsOrDistribute:
            if (!require("child subset", k >= 2, "distribution needs at least two children containing " + vname))
                return std::nullopt;
            if (!check_vocc(e, subset))
                return std::nullopt;
            break;
        default:
            if (!require("child subset", k >= 1 && k < n.children.size(),
                         k == 0 ? "no child contains " + vname : "every child is in the subset; nothing to move"))
                return std::nullopt;
        }
        return subset;
    }

    [[nodiscard]] const std::optional<Refusal>& refusal() const { return refusal_; }
    std::vector<ConditionResult> take_conditions() { return std::move(conditions_); }

private:
    std::string name(VarId v) const { return f_.vars.contains(v) ? f_.vars.name(v) : "#" + std::to_string(v.value); }

    void pass(std::string condition) { conditions_.push_back({std::move(condition), true, {}}); }

    void refuse(std::string condition, std::string detail) {
        conditions_.push_back({condition, false, detail});
        if (!refusal_)
            refusal_ = Refusal{rule_, at_, var_, std::move(condition), std::move(detail)};
    }

    std::nullopt_t fail(std::string condition, std::string detail) {
        refuse(std::move(condition), std::move(detail));
        return std::nullopt;
    }

    bool require(std::string condition, bool ok, std::string detail) {
        if (ok)
            pass(std::move(condition));
        else
            refuse(std::move(condition), std::move(detail));
        return ok;
    }

    std::optional<std::vector<std::uint32_t>> check_cofactor(const Edge& e) {
        if (!require("quantifier-free", !has_annotations_below(f_.graph, bare(e)), "the subformula contains quantifiers"))
            return std::nullopt;
        if (rule_ == RuleId::ForallCofactor)
            return std::vector<std::uint32_t>{};
        const VarSet& dy = f_.vars[var_].deps;
        const VarPartition root = var_partition(f_.graph, f_.graph.root());
        VarSet offending;
        for (VarId v : true_support(f_.graph, bare(e))) {
            if (v == var_ || dy.contains(v) || root.free_support.contains(v))
                continue;
            if (root.exists.contains(v) && std::includes(dy.begin(), dy.end(), f_.vars[v].deps.begin(), f_.vars[v].deps.end()))
                continue;
            offending.insert(v);
        }
        if (!require("var(φ) ⊆ D_y ∪ V_free(ψ) ∪ {v ∈ V∃(ψ) | D_v ⊆ D_y}", offending.empty(),
                     format_set(offending, f_.vars) + " not allowed in the support"))
            return std::nullopt;
        return std::vector<std::uint32_t>{};
    }

    bool check_vocc(const Edge& e, const std::vector<std::uint32_t>& subset) {
        if (!args_.check_vocc) {
            pass("Vocc checks disabled");
            return true;
        }
        const VarSet& dy = f_.vars[var_].deps;
        const Node& n = f_.graph.node(e.target);
        std::vector<VarSet> vocc;
        for (std::uint32_t i : subset)
            vocc.push_back(vocc_of(f_, n.children[i], dy));
        for (std::size_t i = 0; i < vocc.size(); ++i)
            for (std::size_t j = i + 1; j < vocc.size(); ++j) {
                VarSet common = intersect(vocc[i], vocc[j]);
                if (!common.empty()) {
                    refuse("Vocc(φ1) ∩ Vocc(φ2) = ∅", "Vocc(φ1) ∩ Vocc(φ2) = " + format_set(common, f_.vars) + " ≠ ∅ for children " +
                                                          std::to_string(subset[i]) + " and " + std::to_string(subset[j]));
                    return false;
                }
            }
        pass("Vocc(φ1) ∩ Vocc(φ2) = ∅");
        const VarSet outside = vocc_outside(f_, at_, var_, subset);
        std::size_t non_disjoint = 0;
        std::string touching;
        for (std::size_t i = 0; i < vocc.size(); ++i) {
            VarSet common = intersect(vocc[i], outside);
            if (common.empty())
                continue;
            ++non_disjoint;
            touching += (touching.empty() ? "" : ", ") + std::string("child ") + std::to_string(subset[i]) + " shares " +
                        format_set(common, f_.vars);
        }
        return require("Vocc(φi) ∩ Vocc(ψ∖ψ1) = ∅ for all but one child", non_disjoint <= 1,
                       touching + " with Vocc(ψ∖ψ1) = " + format_set(outside, f_.vars));
    }

    Dqbf& f_;
    const EdgePath& at_;
    RuleId rule_;
    VarId var_;
    const RuleArgs& args_;
    PartitionCache cache_;
    std::vector<ConditionResult> conditions_;
    std::optional<Refusal> refusal_;
};

void strip_dependency(VarTable& vars, const VarSet& existentials, VarId x) {
    for (VarId y : existentials) {
        VarSet deps = vars[y].deps;
        if (deps.erase(x))
            vars.set_deps(y, std::move(deps));
    }
}

void rename_dependency(VarTable& vars, const VarSet& existentials, VarId from, VarId to) {
    for (VarId y : existentials) {
        VarSet deps = vars[y].deps;
        if (deps.erase(from)) {
            deps.insert(to);
            vars.set_deps(y, std::move(deps));
        }
    }
}

RewriteReceipt mutate(Dqbf& f, const EdgePath& at, RuleId rule, VarId var, std::vector<std::uint32_t> subset) {
    auto& g = f.graph;
    RewriteReceipt r;
    r.rule = rule;
    r.position = at;
    r.var = var;
    r.soundness = info(rule).soundness;
    r.children = subset;

    switch (rule) {
    case RuleId::DropExists:
        edge_at_mut(g, at).annotation.erase(var);
        return r;
    case RuleId::DropForall: {
        Edge& e = edge_at_mut(g, at);
        e.annotation.erase(var);
        strip_dependency(f.vars, var_partition(g, e).exists, var);
        return r;
    }
    case RuleId::ForallCofactor:
    case RuleId::ExistsCofactor: {
        const Edge e = edge_at(g, at);
        Edge lo = cofactor(g, bare(e), var, false);
        Edge hi = cofactor(g, bare(e), var, true);
        Edge out = rule == RuleId::ForallCofactor ? g.make_and({lo, hi}) : g.make_or({lo, hi});
        out.annotation = e.annotation;
        out.annotation.erase(var);
        edge_at_mut(g, at) = std::move(out);
        return r;
    }
    default:
        break;
    }

    // Gate rules rewrite the children of the target, so the target must not be shared.
    {
        const Edge e = edge_at(g, at);
        if (count_incoming(g, e.target) > 1) {
            const Node& n = g.node(e.target);
            const NodeKind kind = n.kind;
            std::vector<Edge> children = n.children;
            const NodeId clone = g.add_node(kind, std::move(children));
            edge_at_mut(g, at).target = clone;
        }
    }
    const NodeId target = edge_at(g, at).target;
    const NodeKind kind = g.node(target).kind;
    std::vector<Edge> children = g.node(target).children;
    auto in_subset = [&](std::uint32_t i) { return std::binary_search(subset.begin(), subset.end(), i); };

    switch (rule) {
    case RuleId::ForallAndDistribute:
    case RuleId::ExistsOrDistribute: {
        const bool universal = rule == RuleId::ForallAndDistribute;
        bool first = true;
        for (std::uint32_t i = 0; i < children.size(); ++i) {
            const VarSet inner = var_partition(g, children[i]).exists;
            if (!in_subset(i)) {
                if (universal)
                    strip_dependency(f.vars, inner, var);
                continue;
            }
            VarId bound = var;
            if (!first) {
                bound = f.vars.add_copy(var);
                r.fresh_vars.emplace_back(var, bound);
                if (universal)
                    rename_dependency(f.vars, inner, var, bound);
                children[i] = rename_var(g, children[i], var, bound);
            }
            first = false;
            (universal ? children[i].annotation.foralls : children[i].annotation.exists).insert(bound);
        }
        break;
    }
    default: {
        const bool universal = is_universal_rule(rule);
        if (rule == RuleId::ForallAndScope)
            for (std::uint32_t i = 0; i < children.size(); ++i)
                if (!in_subset(i))
                    strip_dependency(f.vars, var_partition(g, children[i]).exists, var);
        if (subset.size() == 1) {
            auto& a = children[subset.front()].annotation;
            (universal ? a.foralls : a.exists).insert(var);
            break;
        }
        std::vector<Edge> grouped;
        std::vector<Edge> rest;
        for (std::uint32_t i = 0; i < children.size(); ++i)
            (in_subset(i) ? grouped : rest).push_back(children[i]);
        const NodeId merged = g.add_node(kind, std::move(grouped));
        r.created_nodes.push_back(merged);
        Edge merged_edge{merged, false, {}};
        (universal ? merged_edge.annotation.foralls : merged_edge.annotation.exists).insert(var);
        rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(subset.front(), rest.size())), merged_edge);
        children = std::move(rest);
    }
    }
    g.node_mut(target).children = std::move(children);
    edge_at_mut(g, at).annotation.erase(var);
    return r;
}

RewriteOutcome run_rule(Dqbf& f, const EdgePath& at, RuleId rule, VarId var, const RuleArgs& args, bool dry_run) {
    Checker checker(f, at, rule, var, args);
    auto subset = checker.run();
    if (!subset)
        return *checker.refusal();
    RewriteReceipt receipt;
    receipt.rule = rule;
    receipt.position = at;
    receipt.var = var;
    receipt.soundness = info(rule).soundness;
    receipt.children = *subset;
    if (dry_run) {
        receipt.conditions = checker.take_conditions();
        return receipt;
    }
    const ExistentialSignature before = existential_signature(f, edge_at(f.graph, at));
    receipt = mutate(f, at, rule, var, std::move(*subset));
    receipt.conditions = checker.take_conditions();
    const ExistentialSignature after = existential_signature(f, edge_at(f.graph, at));
    ConditionResult sub = check_substitution(before, after, f.vars);
    receipt.substitution_preserves_existentials = sub.passed;
    return receipt;
}

} // namespace

std::string_view to_string(RuleId rule) {
    return info(rule).name;
}

std::optional<RuleId> rule_from_string(std::string_view name) {
    for (const auto& r : kRules)
        if (r.name == name)
            return r.id;
    return std::nullopt;
}

Soundness soundness_of(RuleId rule) {
    return info(rule).soundness;
}

std::string_view to_string(Soundness s) {
    return s == Soundness::Equivalence ? "equivalence" : "equisat";
}

std::string Refusal::message() const {
    std::string out = std::string(to_string(rule)) + " refused at " + to_string(position) + ": " + condition;
    if (!detail.empty())
        out += " (" + detail + ")";
    return out;
}

RewriteOutcome apply_rule(Dqbf& f, const EdgePath& at, RuleId rule, VarId var, const RuleArgs& args) {
    return run_rule(f, at, rule, var, args, false);
}

std::optional<Refusal> check_rule(const Dqbf& f, const EdgePath& at, RuleId rule, VarId var, const RuleArgs& args) {
    Dqbf scratch = f;
    auto out = run_rule(scratch, at, rule, var, args, true);
    if (auto* r = std::get_if<Refusal>(&out))
        return *r;
    return std::nullopt;
}

VarSet vocc_of(const Dqbf& f, const Edge& sub, const VarSet& dy) {
    const VarPartition psi = var_partition(f.graph, f.graph.root());
    const VarSet vars = var_partition(f.graph, sub).all();
    VarSet out = intersect(psi.foralls, vars);
    for (VarId v : intersect(psi.exists, vars)) {
        VarSet d = intersect(psi.foralls, f.vars[v].deps);
        out.insert(d.begin(), d.end());
    }
    for (VarId d : dy)
        out.erase(d);
    return out;
}

VarSet vocc_outside(const Dqbf& f, const EdgePath& at, VarId y, const std::optional<std::vector<std::uint32_t>>& subset) {
    const auto& g = f.graph;
    const Edge& e = edge_at(g, at);
    const Node& n = g.node(e.target);
    VarSet inside{y};
    PartitionCache cache(g);
    if (n.is_inner()) {
        for (std::uint32_t i = 0; i < n.children.size(); ++i) {
            if (subset && !std::binary_search(subset->begin(), subset->end(), i))
                continue;
            VarSet q = cache.of_edge(n.children[i]).quantified();
            inside.insert(q.begin(), q.end());
        }
    } else {
        VarSet q = cache.of_node(e.target).quantified();
        inside.insert(q.begin(), q.end());
    }
    const VarPartition psi = var_partition(g, g.root());
    VarSet out;
    for (VarId x : psi.foralls)
        if (!inside.contains(x))
            out.insert(x);
    for (VarId v : psi.exists) {
        if (inside.contains(v))
            continue;
        VarSet d = intersect(psi.foralls, f.vars[v].deps);
        out.insert(d.begin(), d.end());
    }
    return out;
}

ExistentialSignature existential_signature(const Dqbf& f, const Edge& sub) {
    ExistentialSignature s;
    for (VarId y : var_partition(f.graph, sub).exists)
        s.entries.emplace_back(y, f.vars[y].deps);
    return s;
}

ConditionResult check_substitution(const ExistentialSignature& before, const ExistentialSignature& after, const VarTable& vars) {
    ConditionResult r{"existential variables and dependency sets unchanged", true, {}};
    std::map<VarId, VarSet> a(before.entries.begin(), before.entries.end());
    std::map<VarId, VarSet> b(after.entries.begin(), after.entries.end());
    VarSet mismatched;
    for (const auto& [v, d] : a)
        if (auto it = b.find(v); it == b.end() || it->second != d)
            mismatched.insert(v);
    for (const auto& [v, d] : b)
        if (!a.contains(v))
            mismatched.insert(v);
    if (!mismatched.empty()) {
        r.passed = false;
        r.detail = "mismatch on " + format_set(mismatched, vars);
    }
    return r;
}

namespace {

nlohmann::json path_json(const EdgePath& p) {
    return nlohmann::json(p);
}

} // namespace

std::string to_json_line(const RewriteReceipt& r, const VarTable& vars) {
    nlohmann::json j;
    j["event"] = "rewrite";
    j["rule"] = std::string(to_string(r.rule));
    j["position"] = path_json(r.position);
    j["var"] = vars.name(r.var);
    j["children"] = r.children;
    auto fresh = nlohmann::json::array();
    for (const auto& [from, to] : r.fresh_vars)
        fresh.push_back({vars.name(from), vars.name(to)});
    j["fresh_vars"] = fresh;
    j["soundness"] = std::string(to_string(r.soundness));
    auto conds = nlohmann::json::array();
    for (const auto& c : r.conditions)
        conds.push_back({{"condition", c.name}, {"passed", c.passed}});
    j["conditions"] = conds;
    j["substitution_preserves_existentials"] = r.substitution_preserves_existentials;
    return j.dump();
}

std::string to_json_line(const Refusal& r, const VarTable& vars) {
    nlohmann::json j;
    j["event"] = "refusal";
    j["rule"] = std::string(to_string(r.rule));
    j["position"] = path_json(r.position);
    j["var"] = vars.contains(r.var) ? vars.name(r.var) : "";
    j["condition"] = r.condition;
    j["detail"] = r.detail;
    return j.dump();
}

} // namespace dqbfloc
