#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dqbfloc {

/// Dense handle of a variable inside a VarTable. Ids are never reused.
struct VarId {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(VarId, VarId) = default;
};

using VarSet = std::set<VarId>;

enum class VarKind : std::uint8_t {
    Universal,
    Existential,
    Free,
};

std::string_view to_string(VarKind kind);

/// Provenance of a fresh copy created by renaming.
struct VarOrigin {
    VarId base;                  ///< variable the copy was made from (never a copy itself)
    std::uint32_t copy_index = 0;
};

struct VarInfo {
    VarKind kind = VarKind::Free;
    VarSet deps;                 ///< dependency set, existentials only
    std::optional<VarOrigin> origin;
    std::string name;
};

/**
 * \brief Registry of all variables of a formula.
 *
 * Dependency sets live here rather than on graph edges, so renaming or
 * stripping a dependency is a table update.
 */
class VarTable {
public:
    VarId add(VarKind kind, std::string name, VarSet deps = {});

    /// Fresh copy of \p of: same kind and dependency set, origin points to the base.
    VarId add_copy(VarId of);

    [[nodiscard]] const VarInfo& operator[](VarId v) const { return vars_.at(v.value); }
    [[nodiscard]] VarInfo& at(VarId v) { return vars_.at(v.value); }

    [[nodiscard]] std::size_t size() const { return vars_.size(); }
    [[nodiscard]] bool contains(VarId v) const { return v.value < vars_.size(); }
    [[nodiscard]] VarId base_of(VarId v) const;
    [[nodiscard]] std::optional<VarId> find(std::string_view name) const;
    [[nodiscard]] const std::string& name(VarId v) const { return (*this)[v].name; }

    [[nodiscard]] bool is_universal(VarId v) const { return (*this)[v].kind == VarKind::Universal; }
    [[nodiscard]] bool is_existential(VarId v) const { return (*this)[v].kind == VarKind::Existential; }

    void set_deps(VarId v, VarSet deps) { at(v).deps = std::move(deps); }

    /// Replaces \p from by \p to in every dependency set that mentions it.
    void replace_in_deps(VarId from, VarId to);

private:
    std::vector<VarInfo> vars_;
    std::vector<std::uint32_t> copies_;
    std::unordered_map<std::string, VarId> by_name_;
};

std::string format_set(const VarSet& vars, const VarTable& table);

} // namespace dqbfloc

template <>
struct std::hash<dqbfloc::VarId> {
    std::size_t operator()(dqbfloc::VarId v) const noexcept { return std::hash<std::uint32_t>{}(v.value); }
};
