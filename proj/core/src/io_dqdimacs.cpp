#include "dqbfloc/error.hpp"
#include "dqbfloc/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

namespace dqbfloc {

std::string_view to_string(Format f) {
    return f == Format::Dqdimacs ? "dqdimacs" : "dqcir";
}

std::optional<Format> format_from_string(std::string_view name) {
    if (name == "dqdimacs")
        return Format::Dqdimacs;
    if (name == "dqcir")
        return Format::Dqcir;
    return std::nullopt;
}

std::optional<Format> format_from_path(std::string_view path) {
    const auto dot = path.rfind('.');
    if (dot == std::string_view::npos)
        return std::nullopt;
    const std::string_view ext = path.substr(dot + 1);
    if (ext == "dqdimacs" || ext == "dimacs" || ext == "cnf")
        return Format::Dqdimacs;
    if (ext == "dqcir" || ext == "qcir")
        return Format::Dqcir;
    return std::nullopt;
}

PrenexDqbf parse(std::string_view text, Format f) {
    return f == Format::Dqdimacs ? parse_dqdimacs(text) : parse_dqcir(text);
}

std::string write(const PrenexDqbf& p, Format f) {
    return f == Format::Dqdimacs ? write_dqdimacs(p) : write_dqcir(p);
}

namespace {

std::int64_t parse_int(std::string_view tok, std::size_t line) {
    std::int64_t v = 0;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
    return v;
}

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            out.push_back(line.substr(start, i - start));
    }
    return out;
}

class DqdimacsReader {
public:
    PrenexDqbf run(std::string_view text) {
        std::size_t lineno = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t nl = text.find('\n', pos);
            if (nl == std::string_view::npos)
                nl = text.size();
            ++lineno;
            line(text.substr(pos, nl - pos), lineno);
            pos = nl + 1;
        }
        if (!header_)
            throw ParseError(0, "missing 'p cnf' header");
        if (!current_.empty())
            throw ParseError(lineno, "last clause is not terminated by 0");
        if (clauses_.size() != declared_clauses_)
            throw ParseError(0, "header announces " + std::to_string(declared_clauses_) + " clauses, found " +
                                    std::to_string(clauses_.size()));
        return finish();
    }

private:
    void line(std::string_view raw, std::size_t lineno) {
        auto toks = tokens(raw);
        if (toks.empty() || toks.front().front() == 'c')
            return;
        const std::string_view head = toks.front();
        if (head == "p") {
            if (header_)
                throw ParseError(lineno, "duplicate header");
            if (toks.size() != 4 || toks[1] != "cnf")
                throw ParseError(lineno, "expected 'p cnf <vars> <clauses>'");
            const auto nv = parse_int(toks[2], lineno);
            const auto nc = parse_int(toks[3], lineno);
            if (nv < 0 || nc < 0)
                throw ParseError(lineno, "negative count in header");
            num_vars_ = static_cast<std::uint64_t>(nv);
            declared_clauses_ = static_cast<std::uint64_t>(nc);
            header_ = true;
            return;
        }
        if (!header_)
            throw ParseError(lineno, "content before 'p cnf' header");
        if (head == "a" || head == "e" || head == "d") {
            if (in_clauses_)
                throw ParseError(lineno, "quantifier line after the first clause");
            prefix_line(head.front(), toks, lineno);
            return;
        }
        in_clauses_ = true;
        for (auto tok : toks) {
            const auto lit = parse_int(tok, lineno);
            if (lit == 0) {
                clauses_.push_back(std::move(current_));
                current_.clear();
                continue;
            }
            const std::uint64_t var = static_cast<std::uint64_t>(lit < 0 ? -lit : lit);
            check_range(var, lineno);
            current_.emplace_back(lookup_or_free(var), lit < 0);
        }
    }

    void check_range(std::uint64_t var, std::size_t lineno) const {
        if (var > num_vars_)
            throw ParseError(lineno, "variable " + std::to_string(var) + " exceeds header count " + std::to_string(num_vars_));
    }

    void prefix_line(char kind, const std::vector<std::string_view>& toks, std::size_t lineno) {
        if (parse_int(toks.back(), lineno) != 0)
            throw ParseError(lineno, "quantifier line is not terminated by 0");
        std::vector<std::uint64_t> vars;
        for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
            const auto v = parse_int(toks[i], lineno);
            if (v <= 0)
                throw ParseError(lineno, "quantifier lines take positive variables");
            check_range(static_cast<std::uint64_t>(v), lineno);
            vars.push_back(static_cast<std::uint64_t>(v));
        }
        if (kind == 'd') {
            if (vars.empty())
                throw ParseError(lineno, "'d' line needs an existential variable");
            VarSet deps;
            for (std::size_t i = 1; i < vars.size(); ++i) {
                auto it = ids_.find(vars[i]);
                if (it == ids_.end() || !out_.vars.is_universal(it->second))
                    throw ParseError(lineno, "dependency variable " + std::to_string(vars[i]) + " is not a declared universal");
                deps.insert(it->second);
            }
            declare(vars[0], VarKind::Existential, std::move(deps), lineno);
            return;
        }
        for (auto v : vars) {
            if (kind == 'a')
                declare(v, VarKind::Universal, {}, lineno);
            else
                declare(v, VarKind::Existential, VarSet(universals_.begin(), universals_.end()), lineno);
        }
    }

    void declare(std::uint64_t var, VarKind kind, VarSet deps, std::size_t lineno) {
        if (ids_.contains(var))
            throw ParseError(lineno, "variable " + std::to_string(var) + " is quantified twice");
        const VarId id = out_.vars.add(kind, std::to_string(var), std::move(deps));
        ids_.emplace(var, id);
        (kind == VarKind::Universal ? universals_ : existentials_).push_back(id);
    }

    VarId lookup_or_free(std::uint64_t var) {
        if (auto it = ids_.find(var); it != ids_.end())
            return it->second;
        const VarId id = out_.vars.add(VarKind::Free, std::to_string(var));
        ids_.emplace(var, id);
        return id;
    }

    PrenexDqbf finish() {
        std::vector<Edge> conj;
        conj.reserve(clauses_.size());
        for (const auto& clause : clauses_) {
            std::vector<Edge> lits;
            lits.reserve(clause.size());
            for (auto [v, neg] : clause)
                lits.push_back(out_.matrix.literal(v, neg));
            conj.push_back(out_.matrix.make_or(std::move(lits)));
        }
        out_.matrix.set_root(out_.matrix.make_and(std::move(conj)));
        out_.prefix = universals_;
        out_.prefix.insert(out_.prefix.end(), existentials_.begin(), existentials_.end());
        return std::move(out_);
    }

    PrenexDqbf out_;
    bool header_ = false;
    bool in_clauses_ = false;
    std::uint64_t num_vars_ = 0;
    std::uint64_t declared_clauses_ = 0;
    std::map<std::uint64_t, VarId> ids_;
    std::vector<VarId> universals_;
    std::vector<VarId> existentials_;
    std::vector<Clause> clauses_;
    Clause current_;
};

std::optional<std::pair<VarId, bool>> as_literal(const QuantifierGraph& g, const Edge& e) {
    const Node& n = g.node(e.target);
    if (n.kind != NodeKind::Terminal || !e.annotation.empty())
        return std::nullopt;
    return std::pair{n.var, e.negated};
}

std::optional<Clause> as_clause(const QuantifierGraph& g, const Edge& e) {
    if (auto lit = as_literal(g, e))
        return Clause{*lit};
    const Node& n = g.node(e.target);
    if (n.kind != NodeKind::Or || e.negated || !e.annotation.empty())
        return std::nullopt;
    Clause out;
    for (const auto& c : n.children) {
        auto lit = as_literal(g, c);
        if (!lit)
            return std::nullopt;
        out.push_back(*lit);
    }
    return out;
}

} // namespace

PrenexDqbf parse_dqdimacs(std::string_view text) {
    return DqdimacsReader{}.run(text);
}

bool is_cnf_shaped(const QuantifierGraph& g, const Edge& e) {
    try {
        (void)clauses_of(g, e);
        return true;
    } catch (const PreconditionError&) {
        return false;
    }
}

std::vector<Clause> clauses_of(const QuantifierGraph& g, const Edge& e) {
    if (auto c = g.constant_value(e))
        return *c ? std::vector<Clause>{} : std::vector<Clause>{Clause{}};
    if (auto clause = as_clause(g, e))
        return {*clause};
    const Node& n = g.node(e.target);
    if (n.kind != NodeKind::And || e.negated || !e.annotation.empty())
        throw PreconditionError("matrix is not CNF-shaped");
    std::vector<Clause> out;
    for (const auto& c : n.children) {
        auto clause = as_clause(g, c);
        if (!clause)
            throw PreconditionError("matrix is not CNF-shaped");
        out.push_back(std::move(*clause));
    }
    return out;
}

std::string write_dqdimacs(const PrenexDqbf& p) {
    const auto clauses = clauses_of(p.matrix, p.matrix.root());

    std::vector<VarId> universals;
    std::vector<VarId> existentials;
    for (VarId v : p.prefix)
        (p.vars.is_universal(v) ? universals : existentials).push_back(v);
    std::sort(universals.begin(), universals.end());
    std::sort(existentials.begin(), existentials.end());
    VarSet bound(p.prefix.begin(), p.prefix.end());
    VarSet free;
    for (const auto& clause : clauses)
        for (auto [v, neg] : clause)
            if (!bound.contains(v))
                free.insert(v);

    std::map<VarId, std::uint64_t> number;
    for (const auto* group : {&universals, &existentials})
        for (VarId v : *group)
            number.emplace(v, number.size() + 1);
    for (VarId v : free)
        number.emplace(v, number.size() + 1);

    std::ostringstream out;
    out << "p cnf " << number.size() << ' ' << clauses.size() << '\n';
    if (!universals.empty()) {
        out << 'a';
        for (VarId v : universals)
            out << ' ' << number.at(v);
        out << " 0\n";
    }
    for (VarId y : existentials) {
        out << "d " << number.at(y);
        std::vector<std::uint64_t> deps;
        for (VarId x : p.vars[y].deps) {
            auto it = number.find(x);
            if (it == number.end() || !p.vars.is_universal(x))
                throw PreconditionError("dependency " + p.vars.name(x) + " of " + p.vars.name(y) + " is not in the prefix");
            deps.push_back(it->second);
        }
        std::sort(deps.begin(), deps.end());
        for (auto d : deps)
            out << ' ' << d;
        out << " 0\n";
    }
    for (const auto& clause : clauses) {
        for (auto [v, neg] : clause)
            out << (neg ? "-" : "") << number.at(v) << ' ';
        out << "0\n";
    }
    return out.str();
}

} // namespace dqbfloc
