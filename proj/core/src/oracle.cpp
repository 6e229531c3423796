#include "dqbfloc/oracle.hpp"

#include "dqbfloc/bit_table.hpp"
#include "dqbfloc/error.hpp"
#include "dqbfloc/formula.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace dqbfloc {

TruthTable TruthTable::from_function(std::vector<VarId> inputs, const std::function<bool(const std::vector<bool>&)>& f) {
    TruthTable t{std::move(inputs), {}};
    const std::size_t rows = std::size_t{1} << t.inputs.size();
    t.rows.resize(rows);
    std::vector<bool> args(t.inputs.size());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < args.size(); ++i)
            args[i] = (r >> i) & 1U;
        t.rows[r] = f(args);
    }
    return t;
}

namespace {

std::uint64_t budget_log2(std::uint64_t budget) {
    std::uint64_t k = 0;
    while (k < 63 && (std::uint64_t{1} << (k + 1)) <= budget)
        ++k;
    return budget == 0 ? 0 : k;
}

void require_budget(std::uint64_t log2_size, const OracleOptions& opts) {
    if (log2_size >= 64 || (std::uint64_t{1} << log2_size) > opts.budget)
        throw BudgetExceeded(log2_size);
}

std::uint64_t add_saturating(std::uint64_t a, std::uint64_t b) {
    return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

VarSet occurring(const Dqbf& f) {
    const auto& g = f.graph;
    VarSet out = g.root().annotation.all();
    for (NodeId id : g.postorder()) {
        const Node& n = g.node(id);
        if (n.kind == NodeKind::Terminal)
            out.insert(n.var);
        for (const auto& c : n.children) {
            auto a = c.annotation.all();
            out.insert(a.begin(), a.end());
        }
    }
    return out;
}

VarSet universe_of(const Dqbf& f, const OracleOptions& opts) {
    VarSet v = occurring(f);
    if (opts.universe)
        v.insert(opts.universe->begin(), opts.universe->end());
    return v;
}

/// Evaluates a formula for a concrete assignment of functions to its candidate domain.
class CandidateChecker {
public:
    CandidateChecker(const Dqbf& f, const CandidateLayout& layout) : f_(f), layout_(layout) {
        if (layout.universals.size() > 24)
            throw BudgetExceeded(layout.universals.size());
        bits_ = std::size_t{1} << layout.universals.size();
        for (std::size_t i = 0; i < layout.universals.size(); ++i) {
            position_[layout.universals[i]] = i;
            leaves_[layout.universals[i]] = BitTable::projection(i, bits_);
        }
    }

    /// Table of \p t, expressed over all universal assignments.
    BitTable lift(const TruthTable& t) const {
        BitTable out(bits_, false);
        for (std::size_t m = 0; m < bits_; ++m) {
            std::size_t row = 0;
            for (std::size_t i = 0; i < t.inputs.size(); ++i)
                if ((m >> position_.at(t.inputs[i])) & 1U)
                    row |= std::size_t{1} << i;
            out.set(m, t.rows[row]);
        }
        return out;
    }

    bool check(const std::map<VarId, BitTable>& assigned) const {
        BitTable result = evaluate_table(f_.graph, f_.graph.root(), bits_, [&](VarId v) {
            if (auto it = leaves_.find(v); it != leaves_.end())
                return it->second;
            if (auto it = assigned.find(v); it != assigned.end())
                return it->second;
            throw PreconditionError("candidate does not assign " + f_.vars.name(v));
        });
        return result.all();
    }

    [[nodiscard]] std::size_t bits() const { return bits_; }

private:
    const Dqbf& f_;
    const CandidateLayout& layout_;
    std::size_t bits_ = 1;
    std::unordered_map<VarId, std::size_t> position_;
    std::unordered_map<VarId, BitTable> leaves_;
};

SkolemCandidate decode(const CandidateLayout& layout, const std::vector<bool>& bits) {
    SkolemCandidate s;
    std::size_t p = 0;
    for (std::size_t i = 0; i < layout.domain.size(); ++i) {
        TruthTable t{layout.inputs[i], {}};
        t.rows.resize(std::size_t{1} << t.inputs.size());
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            t.rows[r] = bits[p++];
        s.functions.emplace(layout.domain[i], std::move(t));
    }
    return s;
}

/// Enumerates all candidate bit strings; returns false if the visitor stopped early.
bool enumerate_bits(const CandidateLayout& layout, const OracleOptions& opts,
                    const std::function<bool(const std::vector<bool>&)>& visit) {
    require_budget(layout.universe_log2, opts);
    const std::size_t length = layout.universe_log2;
    std::vector<bool> bits(length, false);
    while (true) {
        if (!visit(bits))
            return false;
        // Increment with the last bit least significant.
        std::size_t i = length;
        while (i > 0 && bits[i - 1]) {
            bits[i - 1] = false;
            --i;
        }
        if (i == 0)
            return true;
        bits[i - 1] = true;
    }
}

std::map<VarId, BitTable> lift_all(const CandidateChecker& checker, const SkolemCandidate& s) {
    std::map<VarId, BitTable> out;
    for (const auto& [v, t] : s.functions)
        out.emplace(v, checker.lift(t));
    return out;
}

} // namespace

CandidateLayout candidate_layout(const Dqbf& f, const OracleOptions& opts) {
    CandidateLayout layout;
    VarSet universe = universe_of(f, opts);
    VarPartition p = var_partition(f.graph, f.graph.root());
    layout.universals.assign(p.foralls.begin(), p.foralls.end());
    for (VarId v : universe) {
        if (p.foralls.contains(v))
            continue;
        std::vector<VarId> in;
        if (p.exists.contains(v))
            for (VarId d : f.vars[v].deps)
                if (p.foralls.contains(d))
                    in.push_back(d);
        std::uint64_t width = in.size() >= 63 ? UINT64_MAX : (std::uint64_t{1} << in.size());
        layout.universe_log2 = add_saturating(layout.universe_log2, width);
        layout.domain.push_back(v);
        layout.inputs.push_back(std::move(in));
    }
    return layout;
}

void for_each_candidate(const Dqbf& f, const OracleOptions& opts, const std::function<bool(const SkolemCandidate&)>& visit) {
    CandidateLayout layout = candidate_layout(f, opts);
    enumerate_bits(layout, opts, [&](const std::vector<bool>& bits) { return visit(decode(layout, bits)); });
}

std::vector<SkolemCandidate> candidate_universe(const Dqbf& f, const OracleOptions& opts) {
    std::vector<SkolemCandidate> out;
    for_each_candidate(f, opts, [&](const SkolemCandidate& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

bool check_candidate(const Dqbf& f, const SkolemCandidate& s) {
    CandidateLayout layout = candidate_layout(f);
    CandidateChecker checker(f, layout);
    return checker.check(lift_all(checker, s));
}

namespace {

/// Runs \p on_pass for every candidate that turns the matrix into a tautology.
void filter_candidates(const Dqbf& f, const OracleOptions& opts, const std::function<bool(const std::vector<bool>&, const CandidateLayout&)>& on_pass) {
    CandidateLayout layout = candidate_layout(f, opts);
    require_budget(layout.universe_log2, opts);
    CandidateChecker checker(f, layout);
    // Minterm masks per domain variable and row, so that a candidate is lifted by OR-ing rows.
    std::vector<std::vector<BitTable>> minterms(layout.domain.size());
    for (std::size_t i = 0; i < layout.domain.size(); ++i) {
        const std::size_t rows = std::size_t{1} << layout.inputs[i].size();
        for (std::size_t r = 0; r < rows; ++r) {
            TruthTable t{layout.inputs[i], std::vector<bool>(rows, false)};
            t.rows[r] = true;
            minterms[i].push_back(checker.lift(t));
        }
    }
    enumerate_bits(layout, opts, [&](const std::vector<bool>& bits) {
        std::map<VarId, BitTable> assigned;
        std::size_t p = 0;
        for (std::size_t i = 0; i < layout.domain.size(); ++i) {
            BitTable mask(checker.bits(), false);
            for (const auto& m : minterms[i])
                if (bits[p++])
                    mask |= m;
            assigned.emplace(layout.domain[i], std::move(mask));
        }
        if (checker.check(assigned))
            return on_pass(bits, layout);
        return true;
    });
}

} // namespace

SemanticsSet sem_def(const Dqbf& f, const OracleOptions& opts) {
    SemanticsSet out;
    out.universe_log2 = candidate_layout(f, opts).universe_log2;
    filter_candidates(f, opts, [&](const std::vector<bool>& bits, const CandidateLayout& layout) {
        out.candidates.insert(decode(layout, bits));
        return true;
    });
    return out;
}

bool is_sat(const Dqbf& f, const OracleOptions& opts) {
    bool found = false;
    filter_candidates(f, opts, [&](const std::vector<bool>&, const CandidateLayout&) {
        found = true;
        return false;
    });
    return found;
}

bool is_sat(const PrenexDqbf& p, const OracleOptions& opts) {
    return is_sat(to_dqbf(p), opts);
}

// ---------------------------------------------------------------------------
// Recursive characterization.

namespace {

using Bits = std::vector<bool>;

struct RecSet {
    std::vector<VarId> vars;                 // ascending
    std::vector<std::vector<VarId>> inputs;  // per var
    VarSet existentials;
    std::unordered_set<Bits> members;

    [[nodiscard]] std::size_t offset(std::size_t index) const {
        std::size_t o = 0;
        for (std::size_t i = 0; i < index; ++i)
            o += std::size_t{1} << inputs[i].size();
        return o;
    }
    [[nodiscard]] std::size_t width() const { return offset(vars.size()); }
    [[nodiscard]] std::size_t index_of(VarId v) const {
        return static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
    }
};

class RecursiveSemantics {
public:
    RecursiveSemantics(const Dqbf& f, const OracleOptions& opts)
        : f_(f), opts_(opts), universe_(universe_of(f, opts)), cache_(f.graph), limit_(budget_log2(opts.budget)) {}

    RecSet of_edge(const Edge& e) {
        const Node& n = f_.graph.node(e.target);
        RecSet s;
        if (e.negated) {
            if (n.kind == NodeKind::Const) {
                s = of_node(e.target);
                complement(s);
            } else if (n.kind == NodeKind::Terminal) {
                s = literal(n.var, false);
            } else {
                throw PreconditionError("recursive semantics needs negation normal form");
            }
        } else {
            s = of_node(e.target);
        }
        // Existential quantification only relabels the variable.
        for (VarId y : e.annotation.exists)
            s.existentials.insert(y);
        for (VarId x : e.annotation.foralls)
            s = forall(s, x);
        return s;
    }

private:
    RecSet base_layout() const {
        RecSet s;
        s.vars.assign(universe_.begin(), universe_.end());
        s.inputs.assign(s.vars.size(), {});
        return s;
    }

    void check_width(std::uint64_t width) const {
        if (width > limit_)
            throw BudgetExceeded(width);
    }

    RecSet literal(VarId v, bool positive) const {
        RecSet s = base_layout();
        check_width(s.vars.size());
        const std::size_t index = s.index_of(v);
        const std::size_t count = std::size_t{1} << s.vars.size();
        for (std::size_t m = 0; m < count; ++m) {
            Bits b(s.vars.size());
            for (std::size_t i = 0; i < b.size(); ++i)
                b[i] = (m >> i) & 1U;
            if (b[index] == positive)
                s.members.insert(std::move(b));
        }
        return s;
    }

    void complement(RecSet& s) const {
        std::unordered_set<Bits> all;
        const std::size_t w = s.width();
        check_width(w);
        for (std::size_t m = 0; m < (std::size_t{1} << w); ++m) {
            Bits b(w);
            for (std::size_t i = 0; i < w; ++i)
                b[i] = (m >> i) & 1U;
            if (!s.members.contains(b))
                all.insert(std::move(b));
        }
        s.members = std::move(all);
    }

    const RecSet& of_node(NodeId id) {
        if (auto it = memo_.find(id); it != memo_.end())
            return it->second;
        const Node& n = f_.graph.node(id);
        RecSet s;
        switch (n.kind) {
        case NodeKind::Terminal:
            s = literal(n.var, true);
            break;
        case NodeKind::Const:
            s = base_layout();
            if (n.value)
                complement(s);
            break;
        default:
            s = combine(id);
        }
        return memo_.emplace(id, std::move(s)).first->second;
    }

    /// Conjunction and disjunction: restrictions of s to each operand's domain.
    RecSet combine(NodeId id) {
        const Node& n = f_.graph.node(id);
        const bool is_and = n.kind == NodeKind::And;
        const std::vector<Edge> children = n.children;
        const VarPartition& part = cache_.of_node(id);

        RecSet s;
        for (VarId v : universe_) {
            if (part.foralls.contains(v))
                continue;
            s.vars.push_back(v);
            std::vector<VarId> in;
            if (part.exists.contains(v)) {
                s.existentials.insert(v);
                for (VarId d : f_.vars[v].deps)
                    if (part.foralls.contains(d))
                        in.push_back(d);
            }
            s.inputs.push_back(std::move(in));
        }
        const std::size_t width = s.width();
        check_width(width);

        struct Projection {
            std::vector<std::pair<std::size_t, std::size_t>> ranges;  // (offset in parent, length)
            std::unordered_set<Bits> allowed;
        };
        std::vector<Projection> projections;
        for (const auto& c : children) {
            RecSet cs = of_edge(c);
            Projection pr;
            std::vector<std::pair<std::size_t, std::size_t>> child_ranges;
            for (std::size_t i = 0; i < s.vars.size(); ++i) {
                VarId v = s.vars[i];
                const bool parent_existential = s.existentials.contains(v);
                const bool child_existential = cs.existentials.contains(v);
                if (parent_existential != child_existential)
                    continue;  // existential of a sibling; non-occurring here
                const std::size_t ci = cs.index_of(v);
                if (cs.inputs[ci] != s.inputs[i])
                    throw PreconditionError("dependency inputs differ between operands; formula violates disjointness");
                const std::size_t len = std::size_t{1} << s.inputs[i].size();
                pr.ranges.emplace_back(s.offset(i), len);
                child_ranges.emplace_back(cs.offset(ci), len);
            }
            for (const auto& member : cs.members) {
                Bits key;
                for (auto [o, len] : child_ranges)
                    key.insert(key.end(), member.begin() + static_cast<std::ptrdiff_t>(o),
                               member.begin() + static_cast<std::ptrdiff_t>(o + len));
                pr.allowed.insert(std::move(key));
            }
            projections.push_back(std::move(pr));
        }

        Bits b(width, false);
        for (std::size_t m = 0; m < (std::size_t{1} << width); ++m) {
            for (std::size_t i = 0; i < width; ++i)
                b[i] = (m >> i) & 1U;
            bool result = is_and;
            for (const auto& pr : projections) {
                Bits key;
                for (auto [o, len] : pr.ranges)
                    key.insert(key.end(), b.begin() + static_cast<std::ptrdiff_t>(o), b.begin() + static_cast<std::ptrdiff_t>(o + len));
                const bool in = pr.allowed.contains(key);
                if (is_and && !in) {
                    result = false;
                    break;
                }
                if (!is_and && in) {
                    result = true;
                    break;
                }
            }
            if (result)
                s.members.insert(b);
        }
        return s;
    }

    /// Pairs s0 (x = 0) with s1 (x = 1) and recombines dependent functions by ITE on x.
    RecSet forall(const RecSet& s, VarId x) const {
        RecSet out;
        const std::size_t xi = s.index_of(x);
        if (xi >= s.vars.size() || s.vars[xi] != x || s.existentials.contains(x))
            throw PreconditionError("universal " + f_.vars.name(x) + " is not free below its binding");
        const std::size_t x_offset = s.offset(xi);
        std::vector<bool> dependent(s.vars.size(), false);
        for (std::size_t i = 0; i < s.vars.size(); ++i) {
            if (i == xi)
                continue;
            VarId v = s.vars[i];
            dependent[i] = s.existentials.contains(v) && f_.vars[v].deps.contains(x);
            out.vars.push_back(v);
            auto in = s.inputs[i];
            if (dependent[i]) {
                in.push_back(x);
                std::sort(in.begin(), in.end());
            }
            out.inputs.push_back(std::move(in));
        }
        out.existentials = s.existentials;
        check_width(out.width());

        // Group members by everything that must agree between s0 and s1.
        std::map<Bits, std::pair<std::vector<const Bits*>, std::vector<const Bits*>>> groups;
        for (const auto& m : s.members) {
            Bits key;
            for (std::size_t i = 0; i < s.vars.size(); ++i) {
                if (i == xi || dependent[i])
                    continue;
                const std::size_t o = s.offset(i);
                const std::size_t len = std::size_t{1} << s.inputs[i].size();
                key.insert(key.end(), m.begin() + static_cast<std::ptrdiff_t>(o), m.begin() + static_cast<std::ptrdiff_t>(o + len));
            }
            auto& slot = groups[key];
            (m[x_offset] ? slot.second : slot.first).push_back(&m);
        }

        for (const auto& [key, pair] : groups) {
            for (const Bits* s0 : pair.first) {
                for (const Bits* s1 : pair.second) {
                    Bits t;
                    t.reserve(out.width());
                    for (std::size_t i = 0; i < s.vars.size(); ++i) {
                        if (i == xi)
                            continue;
                        const std::size_t o = s.offset(i);
                        if (!dependent[i]) {
                            const std::size_t len = std::size_t{1} << s.inputs[i].size();
                            t.insert(t.end(), s0->begin() + static_cast<std::ptrdiff_t>(o),
                                     s0->begin() + static_cast<std::ptrdiff_t>(o + len));
                            continue;
                        }
                        const auto& old_in = s.inputs[i];
                        std::vector<VarId> new_in = old_in;
                        new_in.push_back(x);
                        std::sort(new_in.begin(), new_in.end());
                        const std::size_t xpos = static_cast<std::size_t>(std::find(new_in.begin(), new_in.end(), x) - new_in.begin());
                        for (std::size_t r = 0; r < (std::size_t{1} << new_in.size()); ++r) {
                            const bool xv = (r >> xpos) & 1U;
                            const std::size_t low = r & ((std::size_t{1} << xpos) - 1);
                            const std::size_t high = r >> (xpos + 1);
                            const std::size_t old_row = low | (high << xpos);
                            t.push_back((*(xv ? s1 : s0))[o + old_row]);
                        }
                    }
                    out.members.insert(std::move(t));
                    if (out.members.size() > (std::size_t{1} << std::min<std::uint64_t>(limit_, 62)))
                        throw BudgetExceeded(out.width());
                }
            }
        }
        return out;
    }

    const Dqbf& f_;
    const OracleOptions& opts_;
    VarSet universe_;
    PartitionCache cache_;
    std::uint64_t limit_;
    std::unordered_map<NodeId, RecSet> memo_;
};

} // namespace

SemanticsSet sem_rec(const Dqbf& f, const OracleOptions& opts) {
    CandidateLayout layout = candidate_layout(f, opts);
    require_budget(layout.universe_log2, opts);
    RecursiveSemantics rec(f, opts);
    RecSet s = rec.of_edge(f.graph.root());
    if (s.vars != layout.domain || s.inputs != layout.inputs)
        throw PreconditionError("recursive semantics produced an unexpected candidate domain");
    SemanticsSet out;
    out.universe_log2 = layout.universe_log2;
    for (const auto& m : s.members)
        out.candidates.insert(decode(layout, m));
    return out;
}

// ---------------------------------------------------------------------------
// Comparisons.

namespace {

TruthTable extend(const TruthTable& t, const std::vector<VarId>& inputs) {
    return TruthTable::from_function(inputs, [&](const std::vector<bool>& args) {
        std::size_t row = 0;
        for (std::size_t i = 0; i < t.inputs.size(); ++i) {
            auto pos = static_cast<std::size_t>(std::find(inputs.begin(), inputs.end(), t.inputs[i]) - inputs.begin());
            if (args[pos])
                row |= std::size_t{1} << i;
        }
        return static_cast<bool>(t.rows[row]);
    });
}

} // namespace

bool equivalent(const Dqbf& a, const Dqbf& b, const OracleOptions& opts) {
    OracleOptions aligned = opts;
    VarSet universe = occurring(a);
    VarSet ob = occurring(b);
    universe.insert(ob.begin(), ob.end());
    if (opts.universe)
        universe.insert(opts.universe->begin(), opts.universe->end());
    aligned.universe = universe;

    const VarPartition pa = var_partition(a.graph, a.graph.root());
    const VarPartition pb = var_partition(b.graph, b.graph.root());
    const VarSet occ_a = occurring(a);
    const VarSet occ_b = occurring(b);

    std::map<VarId, std::vector<VarId>> target_inputs;
    VarSet dropped;
    for (VarId v : universe) {
        const bool ua = pa.foralls.contains(v), ub = pb.foralls.contains(v);
        const bool ea = pa.exists.contains(v), eb = pb.exists.contains(v);
        if (ua && ub)
            continue;
        if (ua || ub) {
            const bool other_free_unused = ua ? (!eb && !occ_b.contains(v)) : (!ea && !occ_a.contains(v));
            if (!other_free_unused)
                throw VariableSetMismatch(a.vars.name(v) + " is universal in one formula and used otherwise in the other");
            dropped.insert(v);
            continue;
        }
        if (ea != eb)
            throw VariableSetMismatch(a.vars.name(v) + " is existential in one formula and free in the other");
        std::vector<VarId> in;
        if (ea) {
            VarSet deps;
            for (VarId d : a.vars[v].deps)
                if (pa.foralls.contains(d))
                    deps.insert(d);
            for (VarId d : b.vars[v].deps)
                if (pb.foralls.contains(d))
                    deps.insert(d);
            in.assign(deps.begin(), deps.end());
        }
        target_inputs.emplace(v, std::move(in));
    }

    auto normalize = [&](const SemanticsSet& s) {
        std::set<SkolemCandidate> out;
        for (const auto& c : s.candidates) {
            SkolemCandidate n;
            for (const auto& [v, t] : c.functions) {
                if (dropped.contains(v))
                    continue;
                n.functions.emplace(v, extend(t, target_inputs.at(v)));
            }
            out.insert(std::move(n));
        }
        return out;
    };
    return normalize(sem_def(a, aligned)) == normalize(sem_def(b, aligned));
}

bool equisat(const Dqbf& a, const Dqbf& b, const OracleOptions& opts) {
    return is_sat(a, opts) == is_sat(b, opts);
}

std::string dump(const SkolemCandidate& s, const VarTable& vars) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, t] : s.functions) {
        os << (first ? "" : ", ") << vars.name(v);
        first = false;
        if (!t.inputs.empty()) {
            os << '(';
            for (std::size_t i = 0; i < t.inputs.size(); ++i)
                os << (i ? "," : "") << vars.name(t.inputs[i]);
            os << ')';
        }
        os << '=';
        for (bool r : t.rows)
            os << (r ? '1' : '0');
    }
    return os.str();
}

std::string dump(const SemanticsSet& s, const VarTable& vars) {
    std::ostringstream os;
    os << s.candidates.size() << " of 2^" << s.universe_log2 << " candidates\n";
    for (const auto& c : s.candidates)
        os << "  " << dump(c, vars) << '\n';
    return os.str();
}

} // namespace dqbfloc
