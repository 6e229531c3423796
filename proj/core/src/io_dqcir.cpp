#include "dqbfloc/error.hpp"
#include "dqbfloc/formula.hpp"
#include "dqbfloc/io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace dqbfloc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool valid_name(std::string_view s) {
    if (s.empty() || s.front() == '-')
        return false;
    return std::none_of(s.begin(), s.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '(' || c == ')' || c == '=' || c == '#';
    });
}

struct Call {
    std::string_view head;
    std::vector<std::string_view> args;
};

// `head(a, b, ...)`; returns nullopt if the text is not of that shape.
std::optional<Call> parse_call(std::string_view s, std::size_t line) {
    const auto open = s.find('(');
    if (open == std::string_view::npos)
        return std::nullopt;
    if (s.back() != ')')
        throw ParseError(line, "missing ')'");
    Call c{trim(s.substr(0, open)), {}};
    std::string_view inner = trim(s.substr(open + 1, s.size() - open - 2));
    if (inner.empty())
        return c;
    while (true) {
        const auto comma = inner.find(',');
        auto arg = trim(inner.substr(0, comma));
        if (arg.empty())
            throw ParseError(line, "empty argument");
        c.args.push_back(arg);
        if (comma == std::string_view::npos)
            break;
        inner = inner.substr(comma + 1);
    }
    return c;
}

struct GateDef {
    NodeKind kind = NodeKind::And;
    bool is_not = false;
    std::vector<std::string> inputs;
    std::size_t line = 0;
};

class DqcirReader {
public:
    PrenexDqbf run(std::string_view text) {
        std::size_t lineno = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t nl = text.find('\n', pos);
            if (nl == std::string_view::npos)
                nl = text.size();
            ++lineno;
            line(trim(text.substr(pos, nl - pos)), lineno);
            pos = nl + 1;
        }
        if (!output_)
            throw ParseError(0, "missing output line");
        const Edge root = literal(*output_, output_line_);
        out_.matrix.set_root(to_nnf(out_.matrix, root));
        out_.prefix = universals_;
        out_.prefix.insert(out_.prefix.end(), existentials_.begin(), existentials_.end());
        return std::move(out_);
    }

private:
    void line(std::string_view s, std::size_t lineno) {
        if (s.empty() || s.front() == '#')
            return;
        if (const auto eq = s.find('='); eq != std::string_view::npos) {
            gate(trim(s.substr(0, eq)), trim(s.substr(eq + 1)), lineno);
            return;
        }
        auto call = parse_call(s, lineno);
        if (!call)
            throw ParseError(lineno, "unrecognized line '" + std::string(s) + "'");
        if (call->head == "output") {
            if (output_)
                throw ParseError(lineno, "duplicate output");
            if (call->args.size() != 1)
                throw ParseError(lineno, "output takes one wire");
            output_ = std::string(call->args.front());
            output_line_ = lineno;
        } else if (call->head == "forall" || call->head == "free") {
            const VarKind kind = call->head == "forall" ? VarKind::Universal : VarKind::Free;
            for (auto a : call->args)
                declare(a, kind, {}, lineno);
        } else if (call->head == "exists") {
            for (auto a : call->args)
                declare(a, VarKind::Existential, VarSet(universals_.begin(), universals_.end()), lineno);
        } else if (call->head == "depend") {
            if (call->args.empty())
                throw ParseError(lineno, "depend needs an existential variable");
            VarSet deps;
            for (std::size_t i = 1; i < call->args.size(); ++i) {
                auto it = vars_.find(std::string(call->args[i]));
                if (it == vars_.end() || !out_.vars.is_universal(it->second))
                    throw ParseError(lineno, "dependency variable " + std::string(call->args[i]) + " is not a declared universal");
                deps.insert(it->second);
            }
            declare(call->args.front(), VarKind::Existential, std::move(deps), lineno);
        } else {
            throw ParseError(lineno, "unknown declaration '" + std::string(call->head) + "'");
        }
    }

    void declare(std::string_view name, VarKind kind, VarSet deps, std::size_t lineno) {
        if (!valid_name(name) || name == "true" || name == "false")
            throw ParseError(lineno, "invalid variable name '" + std::string(name) + "'");
        std::string key(name);
        if (vars_.contains(key) || gates_.contains(key))
            throw ParseError(lineno, "name '" + key + "' declared twice");
        const VarId id = out_.vars.add(kind, key, std::move(deps));
        vars_.emplace(std::move(key), id);
        if (kind == VarKind::Universal)
            universals_.push_back(id);
        else if (kind == VarKind::Existential)
            existentials_.push_back(id);
    }

    void gate(std::string_view name, std::string_view body, std::size_t lineno) {
        if (!valid_name(name))
            throw ParseError(lineno, "invalid gate name '" + std::string(name) + "'");
        auto call = parse_call(body, lineno);
        if (!call)
            throw ParseError(lineno, "expected a gate definition");
        GateDef def;
        def.line = lineno;
        if (call->head == "and")
            def.kind = NodeKind::And;
        else if (call->head == "or")
            def.kind = NodeKind::Or;
        else if (call->head == "not")
            def.is_not = true;
        else
            throw ParseError(lineno, "unknown gate type '" + std::string(call->head) + "'");
        if (def.is_not && call->args.size() != 1)
            throw ParseError(lineno, "not takes one input");
        for (auto a : call->args)
            def.inputs.emplace_back(a);
        std::string key(name);
        if (vars_.contains(key) || gates_.contains(key))
            throw ParseError(lineno, "name '" + key + "' defined twice");
        gates_.emplace(std::move(key), std::move(def));
    }

    Edge literal(const std::string& text, std::size_t lineno) {
        const bool neg = !text.empty() && text.front() == '-';
        const std::string name = neg ? text.substr(1) : text;
        Edge e = wire(name, lineno);
        return neg ? flip(e) : e;
    }

    // Iterative evaluation keeps long gate chains off the call stack.
    Edge wire(const std::string& name, std::size_t lineno) {
        if (name == "true" || name == "false")
            return QuantifierGraph::constant(name == "true");
        if (auto it = vars_.find(name); it != vars_.end())
            return out_.matrix.literal(it->second);
        if (!gates_.contains(name))
            throw ParseError(lineno, "undefined wire '" + name + "'");

        std::vector<std::string> stack{name};
        while (!stack.empty()) {
            const std::string current = stack.back();
            if (done_.contains(current)) {
                stack.pop_back();
                continue;
            }
            const GateDef& def = gates_.at(current);
            active_.insert(current);
            bool ready = true;
            for (const auto& in : def.inputs) {
                const std::string base = in.front() == '-' ? in.substr(1) : in;
                if (base == "true" || base == "false" || vars_.contains(base) || done_.contains(base))
                    continue;
                if (!gates_.contains(base))
                    throw ParseError(def.line, "undefined wire '" + base + "'");
                if (active_.contains(base))
                    throw ParseError(def.line, "cyclic gate definition through '" + base + "'");
                stack.push_back(base);
                ready = false;
            }
            if (!ready)
                continue;
            std::vector<Edge> children;
            for (const auto& in : def.inputs) {
                const bool neg = in.front() == '-';
                const std::string base = neg ? in.substr(1) : in;
                Edge e = base == "true" || base == "false" ? QuantifierGraph::constant(base == "true")
                         : vars_.contains(base)           ? out_.matrix.literal(vars_.at(base))
                                                          : done_.at(base);
                children.push_back(neg ? flip(e) : e);
            }
            Edge result = def.is_not ? flip(children.front()) : out_.matrix.make_op(def.kind, std::move(children));
            done_.emplace(current, result);
            active_.erase(current);
            stack.pop_back();
        }
        return done_.at(name);
    }

    PrenexDqbf out_;
    std::unordered_map<std::string, VarId> vars_;
    std::unordered_map<std::string, GateDef> gates_;
    std::unordered_map<std::string, Edge> done_;
    std::unordered_set<std::string> active_;
    std::vector<VarId> universals_;
    std::vector<VarId> existentials_;
    std::optional<std::string> output_;
    std::size_t output_line_ = 0;
};

} // namespace

PrenexDqbf parse_dqcir(std::string_view text) {
    return DqcirReader{}.run(text);
}

std::string write_dqcir(const PrenexDqbf& p) {
    const QuantifierGraph& g = p.matrix;
    std::ostringstream out;
    out << "#QCIR-G14\n";

    std::vector<VarId> universals;
    std::vector<VarId> existentials;
    for (VarId v : p.prefix)
        (p.vars.is_universal(v) ? universals : existentials).push_back(v);
    std::sort(universals.begin(), universals.end());
    std::sort(existentials.begin(), existentials.end());
    const VarSet bound(p.prefix.begin(), p.prefix.end());
    const VarSet free = [&] {
        VarSet s = structural_support(g, g.root());
        for (VarId v : bound)
            s.erase(v);
        return s;
    }();

    auto join = [&](const auto& vars) {
        std::string s;
        for (VarId v : vars)
            s += (s.empty() ? "" : ", ") + p.vars.name(v);
        return s;
    };
    if (!universals.empty())
        out << "forall(" << join(universals) << ")\n";
    for (VarId y : existentials) {
        out << "depend(" << p.vars.name(y);
        for (VarId x : p.vars[y].deps) {
            if (!bound.contains(x) || !p.vars.is_universal(x))
                throw PreconditionError("dependency " + p.vars.name(x) + " of " + p.vars.name(y) + " is not in the prefix");
            out << ", " << p.vars.name(x);
        }
        out << ")\n";
    }
    if (!free.empty())
        out << "free(" << join(free) << ")\n";

    std::unordered_set<std::string> taken;
    for (std::size_t i = 0; i < p.vars.size(); ++i)
        taken.insert(p.vars.name(VarId{static_cast<std::uint32_t>(i)}));
    std::unordered_map<NodeId, std::string> gate_name;
    std::size_t counter = 0;
    auto fresh = [&] {
        std::string n;
        do
            n = "g" + std::to_string(++counter);
        while (taken.contains(n));
        return n;
    };

    auto render = [&](const Edge& e) {
        const Node& n = g.node(e.target);
        std::string base;
        if (n.kind == NodeKind::Const)
            return std::string((n.value != e.negated) ? "true" : "false");
        base = n.kind == NodeKind::Terminal ? p.vars.name(n.var) : gate_name.at(e.target);
        return (e.negated ? "-" : "") + base;
    };

    std::ostringstream gates;
    for (NodeId id : g.postorder()) {
        const Node& n = g.node(id);
        if (!n.is_inner())
            continue;
        gate_name.emplace(id, fresh());
        gates << gate_name.at(id) << " = " << (n.kind == NodeKind::And ? "and(" : "or(");
        bool first = true;
        for (const auto& c : n.children) {
            gates << (first ? "" : ", ") << render(c);
            first = false;
        }
        gates << ")\n";
    }
    out << "output(" << render(g.root()) << ")\n" << gates.str();
    return out.str();
}

} // namespace dqbfloc
