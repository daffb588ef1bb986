#include <gtest/gtest.h>

#include <random>

#include "autocx/cycletree.hpp"
#include "fixtures.hpp"

using namespace autocx;

namespace {

std::map<Label, Cycle> nodes_of(const CycleTree& t) { return t.nodes(); }

const std::map<Label, Cycle> worked_final{
    {{0}, {0, 1, 2, 3, 4, 5}},
    {{0, 0}, {4, 5, 6, 7, 9, 10}},
    {{0, 0, 0}, {6, 7, 8}},
    {{0, 0, 1}, {9, 10}},
};

} // namespace

TEST(Labels, Formatting)
{
    EXPECT_EQ(label_str({0, 0, 1}), "⟨001⟩");
    EXPECT_EQ(label_str({0, 12}), "⟨0,12⟩");
    EXPECT_EQ(cycle_str({4, 5, 6, 7, 9, 10}), "(4,5,6,7,9,A)");
}

TEST(Labels, KleeneBrouwerOrder)
{
    EXPECT_TRUE(kb_less({0, 0}, {0}));
    EXPECT_TRUE(kb_less({0, 0, 0}, {0, 0, 1}));
    EXPECT_TRUE(kb_less({0, 1}, {1}));
    EXPECT_FALSE(kb_less({0}, {0, 0}));
    EXPECT_FALSE(kb_less({0}, {0}));
    EXPECT_FALSE(kb_less({1}, {0, 5}));
}

TEST(CycleTree, LeftClosedness)
{
    EXPECT_NO_THROW(CycleTree{worked_final});
    EXPECT_THROW(CycleTree({{{1}, {0, 1}}}), std::invalid_argument);
    EXPECT_THROW(CycleTree({{{0}, {0, 1}}, {{0, 1}, {1, 2}}}), std::invalid_argument);
    EXPECT_THROW(CycleTree({{{0, 0}, {0, 1}}}), std::invalid_argument);
}

TEST(BuildTree, WorkedExampleStages)
{
    auto [tree, st] = build_cycle_tree(StateSequence(fixture::worked_trace()));
    ASSERT_EQ(st.stages.size(), 23u);
    EXPECT_EQ(nodes_of(st.stages[9]), (std::map<Label, Cycle>{{{0}, {6, 7, 8}}}));
    EXPECT_EQ(nodes_of(st.stages[13]), (std::map<Label, Cycle>{{{0}, {6, 7, 8}}, {{1}, {9, 10}}}));
    EXPECT_EQ(nodes_of(st.stages[17]),
              (std::map<Label, Cycle>{{{0}, {4, 5, 6, 7, 9, 10}}, {{0, 0}, {6, 7, 8}}, {{0, 1}, {9, 10}}}));
    EXPECT_EQ(nodes_of(st.stages[19]), worked_final);
    EXPECT_EQ(nodes_of(st.stages[22]), worked_final);
    EXPECT_EQ(nodes_of(tree), worked_final);
    // nothing happens between the tabulated times
    EXPECT_EQ(nodes_of(st.stages[8]), (std::map<Label, Cycle>{}));
    EXPECT_EQ(st.stages[12], st.stages[9]);
    EXPECT_EQ(st.stages[16], st.stages[13]);

    ASSERT_EQ(st.completions.size(), 4u);
    EXPECT_EQ(st.completions[0].move, CycleMove::NewSibling);
    EXPECT_EQ(st.completions[1].move, CycleMove::NewSibling);
    EXPECT_EQ(st.completions[2].move, CycleMove::NewParent);
    EXPECT_EQ(st.completions[3].move, CycleMove::NewParent);
    EXPECT_EQ(st.final_labels, (std::vector<Label>{{0, 0, 0}, {0, 0, 1}, {0, 0}, {0}}));
    EXPECT_TRUE(completion_is_kb_ordered(st));
    EXPECT_TRUE(tree.adjacency_matches_labels());
    EXPECT_EQ(leaves(tree), (std::set<Label>{{0, 0, 0}, {0, 0, 1}}));
}

TEST(BuildTree, SingleCycle)
{
    auto [tree, st] = build_cycle_tree(StateSequence({0, 1, 2, 0}));
    EXPECT_EQ(nodes_of(tree), (std::map<Label, Cycle>{{{0}, {0, 1, 2}}}));
    EXPECT_EQ(leaves(tree), (std::set<Label>{{0}}));
    EXPECT_TRUE(completion_is_kb_ordered(st));
    EXPECT_TRUE(verify_internal_visits(StateSequence({0, 1, 2, 0}), tree));
}

TEST(BuildTree, NestedChain)
{
    StateSequence seq(fixture::nested_chain_trace());
    auto [tree, st] = build_cycle_tree(seq);
    EXPECT_EQ(nodes_of(tree), (std::map<Label, Cycle>{
                                  {{0}, {0, 1, 2}}, {{0, 0}, {2, 3, 4, 5, 6, 7}}, {{0, 0, 0}, {3, 4, 5, 6, 7}}}));
    ASSERT_EQ(st.completions.size(), 3u);
    EXPECT_EQ(st.completions[0].time, 8u);
    EXPECT_EQ(st.completions[1].time, 18u);
    EXPECT_EQ(st.completions[2].time, 19u);
    EXPECT_EQ(st.final_labels, (std::vector<Label>{{0, 0, 0}, {0, 0}, {0}}));
    EXPECT_EQ(leaves(tree), (std::set<Label>{{0, 0, 0}}));
    EXPECT_TRUE(completion_is_kb_ordered(st));
    EXPECT_TRUE(verify_internal_visits(seq, tree));
}

TEST(BuildTree, NoCycles)
{
    auto [tree, st] = build_cycle_tree(StateSequence({0, 1, 2, 3}));
    EXPECT_TRUE(tree.empty());
    EXPECT_TRUE(st.completions.empty());
    EXPECT_TRUE(completion_is_kb_ordered(st));
}

TEST(BuildTree, RejectsNonWitnessWalks)
{
    EXPECT_THROW(build_cycle_tree(StateSequence({0, 1, 2, 1, 0})), InvalidWitnessSequence);
}

TEST(InternalVisits, Examples)
{
    StateSequence seq(fixture::worked_trace());
    auto [tree, st] = build_cycle_tree(seq);
    EXPECT_TRUE(verify_internal_visits(seq, tree));
    EXPECT_EQ(std::count(seq.begin(), seq.end(), 4u), 2);

    // hand-built two-leaf tree that leaves the repeated states 0 and 1 uncovered
    CycleTree fake({{{0}, {7, 8}}, {{1}, {9, 10}}});
    EXPECT_FALSE(verify_internal_visits(StateSequence({0, 1, 0, 1, 0}), fake));
}

TEST(ValidatePrefix, Examples)
{
    std::vector<State> bad{0, 1, 2, 1, 0};
    EXPECT_FALSE(validate_prefix(bad));
    std::vector<State> injective{0, 1, 2, 3, 4, 5};
    EXPECT_TRUE(validate_prefix(injective));
    auto w = fixture::worked_trace();
    for (std::size_t len = 1; len <= w.size(); ++len)
        EXPECT_TRUE(validate_prefix(std::span<const State>(w.data(), len))) << len;
    std::vector<State> reenter{0, 1, 2, 0, 3, 1};
    EXPECT_FALSE(validate_prefix(reenter));
}

// The entry check is implied by the walk count: swapping the part of the walk
// that first goes around a cycle with a later detour gives a second walk.
TEST(ValidatePrefix, ReentryConditionIsImpliedByWalkCount)
{
    std::mt19937_64 rng(3);
    int rejected_by_reentry = 0;
    for (int i = 0; i < 20000; ++i) {
        std::size_t len = 2 + rng() % 14;
        std::vector<State> raw(len);
        for (auto& s : raw) s = static_cast<State>(rng() % 5);
        StateSequence seq = canonicalize(raw);
        auto s = seq.states();
        bool entry_ok = true;
        for (const auto& cc : detail::closed_cycles(s, seq.num_states()))
            for (std::size_t t = cc.time + 1; t < s.size(); ++t)
                if (std::find(cc.cycle.begin(), cc.cycle.end(), s[t]) != cc.cycle.end()
                    && !detail::cycle_has_edge(cc.cycle, s[t - 1], s[t]))
                    entry_ok = false;
        bool unique = detail::walk_count_saturated(s, seq.num_states(), s.front(), s.back(), s.size() - 1) == 1;
        if (!entry_ok) {
            ++rejected_by_reentry;
            ASSERT_FALSE(unique) << seq.str();
        }
        ASSERT_EQ(validate_prefix(s), unique);
    }
    EXPECT_GT(rejected_by_reentry, 100);
}

TEST(ValidWitnessWalks, TreeInvariants)
{
    // every valid walk on at most 6 states up to length 16
    std::size_t checked = 0;
    std::vector<State> seq{0};
    std::function<void(State)> go = [&](State used) {
        if (!validate_prefix(seq)) return;
        StateSequence s(seq);
        auto [tree, st] = build_cycle_tree(s);
        ASSERT_TRUE(tree.adjacency_matches_labels()) << s.str();
        ASSERT_TRUE(tree.is_left_closed()) << s.str();
        ASSERT_TRUE(verify_internal_visits(s, tree)) << s.str();
        ASSERT_TRUE(completion_is_kb_ordered(st)) << s.str();
        ASSERT_EQ(tree.size(), st.completions.size());
        for (const auto& stage : st.stages) ASSERT_TRUE(stage.is_left_closed());
        ++checked;
        if (seq.size() == 17) return;
        for (State next = 0; next <= std::min<State>(used, 5); ++next) {
            seq.push_back(next);
            go(std::max(used, static_cast<State>(next + 1)));
            seq.pop_back();
        }
    };
    go(1);
    EXPECT_GT(checked, 1000u);
}

TEST(Export, TextAndDot)
{
    StateSequence seq(fixture::worked_trace());
    auto [tree, st] = build_cycle_tree(seq);
    EXPECT_EQ(to_text(tree), "⟨0⟩ (0,1,2,3,4,5)\n  ⟨00⟩ (4,5,6,7,9,A)\n    ⟨000⟩ (6,7,8)\n    ⟨001⟩ (9,A)\n");
    std::string dot = to_dot(tree);
    EXPECT_NE(dot.find("⟨001⟩"), std::string::npos);
    EXPECT_NE(dot.find("(9,A)"), std::string::npos);
    std::string table = to_text(seq, st);
    EXPECT_NE(table.find("13 9 ⟨0⟩=(6,7,8) ⟨1⟩=(9,A)"), std::string::npos);
}
