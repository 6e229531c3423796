#include "dqbfloc/var_table.hpp"

#include <gtest/gtest.h>

namespace dqbfloc {
namespace {

TEST(VarTable, AddAndFind) {
    VarTable t;
    const VarId x = t.add(VarKind::Universal, "x");
    const VarId y = t.add(VarKind::Existential, "y", {x});
    EXPECT_EQ(t.size(), 2U);
    EXPECT_EQ(*t.find("y"), y);
    EXPECT_FALSE(t.find("z").has_value());
    EXPECT_TRUE(t.is_universal(x));
    EXPECT_TRUE(t.is_existential(y));
    EXPECT_EQ(t[y].deps, VarSet{x});
}

TEST(VarTable, DepsOnlyForExistentials) {
    VarTable t;
    const VarId x = t.add(VarKind::Universal, "x");
    EXPECT_THROW(t.add(VarKind::Universal, "x2", {x}), std::invalid_argument);
}

TEST(VarTable, CopiesArePrimedAndTrackTheirBase) {
    VarTable t;
    const VarId x = t.add(VarKind::Universal, "x");
    const VarId y = t.add(VarKind::Existential, "y", {x});
    const VarId y1 = t.add_copy(y);
    const VarId y2 = t.add_copy(y1);
    EXPECT_EQ(t.name(y1), "y'");
    EXPECT_EQ(t.name(y2), "y''");
    EXPECT_EQ(t.base_of(y2), y);
    EXPECT_EQ(t[y2].deps, VarSet{x});
    EXPECT_EQ(t[y2].kind, VarKind::Existential);
}

TEST(VarTable, CopyNameAvoidsExistingNames) {
    VarTable t;
    const VarId x = t.add(VarKind::Universal, "x");
    t.add(VarKind::Universal, "x'");
    EXPECT_EQ(t.name(t.add_copy(x)), "x''");
}

TEST(VarTable, ReplaceInDeps) {
    VarTable t;
    const VarId x = t.add(VarKind::Universal, "x");
    const VarId x1 = t.add_copy(x);
    const VarId y = t.add(VarKind::Existential, "y", {x});
    t.replace_in_deps(x, x1);
    EXPECT_EQ(t[y].deps, VarSet{x1});
    EXPECT_EQ(format_set(t[y].deps, t), "{x'}");
}

} // namespace
} // namespace dqbfloc
