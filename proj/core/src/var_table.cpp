#include "dqbfloc/var_table.hpp"

#include <stdexcept>

namespace dqbfloc {

std::string_view to_string(VarKind kind) {
    switch (kind) {
    case VarKind::Universal: return "universal";
    case VarKind::Existential: return "existential";
    case VarKind::Free: return "free";
    }
    return "?";
}

VarId VarTable::add(VarKind kind, std::string name, VarSet deps) {
    if (kind != VarKind::Existential && !deps.empty())
        throw std::invalid_argument("dependency set on non-existential variable " + name);
    VarId id{static_cast<std::uint32_t>(vars_.size())};
    if (name.empty())
        name = "v" + std::to_string(id.value);
    by_name_.emplace(name, id);
    vars_.push_back(VarInfo{kind, std::move(deps), std::nullopt, std::move(name)});
    copies_.push_back(0);
    return id;
}

VarId VarTable::add_copy(VarId of) {
    VarId base = base_of(of);
    std::uint32_t index = ++copies_.at(base.value);
    std::string name = vars_[base.value].name + std::string(index, '\'');
    while (by_name_.contains(name))
        name += '\'';
    VarInfo info = vars_.at(of.value);
    VarId id{static_cast<std::uint32_t>(vars_.size())};
    info.origin = VarOrigin{base, index};
    info.name = name;
    by_name_.emplace(name, id);
    vars_.push_back(std::move(info));
    copies_.push_back(0);
    return id;
}

VarId VarTable::base_of(VarId v) const {
    const auto& info = (*this)[v];
    return info.origin ? info.origin->base : v;
}

std::optional<VarId> VarTable::find(std::string_view name) const {
    if (auto it = by_name_.find(std::string(name)); it != by_name_.end())
        return it->second;
    return std::nullopt;
}

void VarTable::replace_in_deps(VarId from, VarId to) {
    for (auto& info : vars_) {
        if (info.deps.erase(from) > 0)
            info.deps.insert(to);
    }
}

std::string format_set(const VarSet& vars, const VarTable& table) {
    std::string out = "{";
    bool first = true;
    for (VarId v : vars) {
        if (!first)
            out += ", ";
        first = false;
        out += table.contains(v) ? table.name(v) : "#" + std::to_string(v.value);
    }
    return out + "}";
}

} // namespace dqbfloc
