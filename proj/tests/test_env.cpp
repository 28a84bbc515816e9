#include <set>

#include "alcs/env.hpp"
#include "alcs/rng.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace alcs;
using namespace testutil;

TEST_CASE("shipped vocabularies and construction order") {
    CHECK(make_env("Coffee").vocabulary() == std::vector<std::string>{"c", "o"});
    CHECK(make_env("CoffeeMail").vocabulary() == std::vector<std::string>{"c", "m", "o"});
    CHECK(make_env("Collecting").vocabulary() == std::vector<std::string>{"A", "B", "C", "D", "o"});
    CHECK(make_env("Gem").vocabulary() ==
          std::vector<std::string>{"wood", "workbench", "iron", "toolshed", "axe"});
    for (const auto& name : task_names()) CHECK_NOTHROW(make_env(name));  // reachability holds
}

TEST_CASE("construction errors name the violated invariant") {
    TaskSpec spec = make_task("Coffee", layouts_dir());

    SUBCASE("office walled off") {
        // wall every neighbor of each office cell
        for (GridPos cell : spec.layout.cells_of("o"))
            for (Action a : kAllActions) {
                GridPos n = moved(cell, a);
                if (spec.layout.in_bounds(n))
                    spec.layout.wall[std::size_t(n.y) * spec.layout.width + n.x] = 1;
            }
        CHECK_THROWS_WITH_AS(build_env(spec, 0),
                             doctest::Contains("unreachable label cell"), std::invalid_argument);
    }
    SUBCASE("missing subtask cell") {
        spec.layout.labels.clear();
        CHECK_THROWS_WITH_AS(build_env(spec, 0), doctest::Contains("no label cell"),
                             std::invalid_argument);
    }
    SUBCASE("start on wall") {
        spec.layout.wall[std::size_t(spec.layout.start.y) * spec.layout.width + spec.layout.start.x] = 1;
        CHECK_THROWS_WITH_AS(build_env(spec, 0), doctest::Contains("start on wall"),
                             std::invalid_argument);
    }
}

TEST_CASE("reset semantics") {
    LabeledGridEnv env = make_env("Coffee");
    GridPos start = env.reset();
    CHECK(start == env.spec().layout.start);
    CHECK(env.label(start) == std::nullopt);  // start is unlabeled in shipped layouts
    CHECK(env.achieved().empty());
    CHECK(env.reset() == start);  // idempotent
    // reset after a finished episode
    walk_to(env, env.spec().layout.cells_of("c")[0]);
    walk_to(env, env.spec().layout.cells_of("o")[0]);
    CHECK(env.terminal());
    CHECK(env.reset() == start);
    CHECK(env.achieved().empty());
}

TEST_CASE("step mechanics: walls, labels, dedup") {
    LabeledGridEnv env = make_env("Coffee");
    env.reset();
    GridPos c_cell = env.spec().layout.cells_of("c")[0];

    StepOutcome out = walk_to(env, c_cell);
    CHECK(out.raw_label == env.spec().id_of("c"));
    CHECK(out.reward == 0.0);
    CHECK_FALSE(out.terminal);
    CHECK(env.label(c_cell) == std::nullopt);  // deduped after achievement

    // wall bump is a no-op move that still consumes a step
    int before = env.steps_taken();
    GridPos here = env.position();
    Action into_wall = Action::up;
    bool found_wall = false;
    for (Action a : kAllActions) {
        GridPos n = moved(here, a);
        if (!env.spec().layout.in_bounds(n) || env.spec().layout.is_wall(n)) {
            into_wall = a;
            found_wall = true;
        }
    }
    REQUIRE(found_wall);
    StepOutcome bump = env.step(into_wall);
    CHECK(bump.next_state == here);
    CHECK(bump.raw_label == std::nullopt);  // re-entry of an achieved cell never fires
    CHECK(env.steps_taken() == before + 1);
}

TEST_CASE("reward rules fire on the closing label in order") {
    SUBCASE("Coffee pays on office after coffee") {
        LabeledGridEnv env = make_env("Coffee");
        env.reset();
        walk_to(env, env.spec().layout.cells_of("c")[0]);
        StepOutcome done = walk_to(env, env.spec().layout.cells_of("o")[0]);
        CHECK(done.reward == 1.0);
        CHECK(done.terminal);
    }
    SUBCASE("Coffee: burnt office blocks completion") {
        LabeledGridEnv env = make_env("Coffee");
        env.reset();
        StepOutcome burn = walk_to(env, env.spec().layout.cells_of("o")[0]);
        CHECK(burn.reward == 0.0);
        CHECK_FALSE(burn.terminal);
        walk_to(env, env.spec().layout.cells_of("c")[0]);
        StepOutcome again = walk_to(env, env.spec().layout.cells_of("o")[0]);
        CHECK(again.reward == 0.0);
        CHECK_FALSE(again.terminal);
    }
    SUBCASE("CoffeeMail needs both in any order") {
        for (auto order : {std::vector<const char*>{"c", "m"}, std::vector<const char*>{"m", "c"}}) {
            LabeledGridEnv env = make_env("CoffeeMail");
            env.reset();
            for (const char* n : order) walk_to(env, env.spec().layout.cells_of(n)[0]);
            StepOutcome done = walk_to(env, env.spec().layout.cells_of("o")[0]);
            CHECK(done.reward == 1.0);
            CHECK(done.terminal);
        }
    }
    SUBCASE("Bonus pays per package, bonus for all four, office always terminal") {
        LabeledGridEnv env = make_env("Bonus");
        env.reset();
        StepOutcome empty_handed = walk_to(env, env.spec().layout.cells_of("o")[0]);
        CHECK(empty_handed.reward == 0.0);
        CHECK(empty_handed.terminal);

        env.reset();
        walk_to(env, env.spec().layout.cells_of("C")[0]);
        StepOutcome one = walk_to(env, env.spec().layout.cells_of("o")[0]);
        CHECK(one.reward == 1.0);
        CHECK(one.terminal);

        env.reset();
        for (const char* p : {"C", "A", "B", "D"}) walk_to(env, env.spec().layout.cells_of(p)[0]);
        StepOutcome full = walk_to(env, env.spec().layout.cells_of("o")[0]);
        CHECK(full.reward == 9.0);  // 4*1 + 5
        CHECK(full.terminal);
    }
    SUBCASE("Collecting needs all four packages") {
        LabeledGridEnv env = make_env("Collecting");
        env.reset();
        for (const char* p : {"D", "B", "A"}) walk_to(env, env.spec().layout.cells_of(p)[0]);
        REQUIRE(env.achieved().size() == 3);  // the walk never grazed package C
        StepOutcome three = walk_to(env, env.spec().layout.cells_of("o")[0]);
        CHECK(three.reward == 0.0);
        CHECK_FALSE(three.terminal);
    }
    SUBCASE("Bed enforces wood before toolshed, grass any time before workbench") {
        LabeledGridEnv env = make_env("Bed");
        env.reset();
        for (const char* p : {"grass", "wood", "toolshed"})
            walk_to(env, env.spec().layout.cells_of(p)[0]);
        StepOutcome done = walk_to(env, env.spec().layout.cells_of("workbench")[0]);
        CHECK(done.reward == 1.0);
        CHECK(done.terminal);

        env.reset();  // toolshed before wood burns the precedence
        for (const char* p : {"toolshed", "wood", "grass"})
            walk_to(env, env.spec().layout.cells_of(p)[0]);
        StepOutcome bad = walk_to(env, env.spec().layout.cells_of("workbench")[0]);
        CHECK(bad.reward == 0.0);
        CHECK_FALSE(bad.terminal);
    }
    SUBCASE("Gem full ordering with flexible iron") {
        LabeledGridEnv env = make_env("Gem");
        env.reset();
        for (const char* p : {"iron", "wood", "workbench", "toolshed"})
            walk_to(env, env.spec().layout.cells_of(p)[0]);
        StepOutcome done = walk_to(env, env.spec().layout.cells_of("axe")[0]);
        CHECK(done.reward == 1.0);
        CHECK(done.terminal);

        env.reset();  // iron after toolshed violates the order
        for (const char* p : {"wood", "workbench", "toolshed", "iron"})
            walk_to(env, env.spec().layout.cells_of(p)[0]);
        StepOutcome bad = walk_to(env, env.spec().layout.cells_of("axe")[0]);
        CHECK(bad.reward == 0.0);
        CHECK_FALSE(bad.terminal);
    }
    SUBCASE("Plant and Bridge") {
        LabeledGridEnv env = make_env("Plant");
        env.reset();
        walk_to(env, env.spec().layout.cells_of("wood")[0]);
        CHECK(walk_to(env, env.spec().layout.cells_of("toolshed")[0]).reward == 1.0);

        LabeledGridEnv env2 = make_env("Bridge");
        env2.reset();
        walk_to(env2, env2.spec().layout.cells_of("wood")[0]);
        walk_to(env2, env2.spec().layout.cells_of("iron")[0]);
        CHECK(walk_to(env2, env2.spec().layout.cells_of("factory")[0]).reward == 1.0);
    }
}

TEST_CASE("step cap terminates with the rule's reward") {
    TaskSpec spec = make_task("Coffee", layouts_dir());
    spec.step_cap = 5;
    LabeledGridEnv env = build_env(spec, 0);
    env.reset();
    for (int i = 0; i < 4; ++i) CHECK_FALSE(env.step(Action::up).terminal);
    StepOutcome last = env.step(Action::up);
    CHECK(last.terminal);
    CHECK(last.reward == 0.0);
    CHECK_THROWS_AS(env.step(Action::up), std::logic_error);  // step after terminal
}

TEST_CASE("label queries") {
    LabeledGridEnv env = make_env("Coffee");
    env.reset();
    GridPos c_cell = env.spec().layout.cells_of("c")[0];
    CHECK(env.label(c_cell) == env.spec().id_of("c"));
    CHECK(env.label({1, 1}) == std::nullopt);  // plain corridor cell (corner A not in Coffee vocab)
    CHECK_THROWS_AS(env.label({-1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(env.label({99, 0}), std::invalid_argument);
    CHECK(env.cell_label(c_cell) == env.spec().id_of("c"));
    walk_to(env, c_cell);
    CHECK(env.label(c_cell) == std::nullopt);       // deduped
    CHECK(env.cell_label(c_cell) == env.spec().id_of("c"));  // raw label persists
}

TEST_CASE("dedup, return sets, and replay determinism under random streams") {
    for (const auto& name : {"Coffee", "CoffeeMail", "Collecting", "Bonus"}) {
        LabeledGridEnv env = make_env(name, 3);
        std::mt19937_64 rng(99);
        std::vector<Action> actions;
        std::vector<StepOutcome> outcomes;
        env.reset();
        std::set<SubtaskId> fired;
        double ep_return = 0.0;
        for (int i = 0; i < 3000; ++i) {
            Action a = static_cast<Action>(uniform_below(rng, 4));
            StepOutcome out = env.step(a);
            actions.push_back(a);
            outcomes.push_back(out);
            if (out.raw_label) {
                CHECK(fired.insert(*out.raw_label).second);  // at most once per episode
            }
            ep_return += out.reward;
            if (out.terminal) {
                if (std::string(name) == "Bonus")
                    CHECK((ep_return == 0 || ep_return == 1 || ep_return == 2 || ep_return == 3 ||
                           ep_return == 4 || ep_return == 9));
                else
                    CHECK((ep_return == 0 || ep_return == 1));
                env.reset();
                fired.clear();
                ep_return = 0.0;
            }
        }
        // replay the recorded actions: identical outcome stream
        LabeledGridEnv replay = make_env(name, 3);
        replay.reset();
        for (std::size_t i = 0; i < actions.size(); ++i) {
            StepOutcome out = replay.step(actions[i]);
            CHECK(out.next_state == outcomes[i].next_state);
            CHECK(out.reward == outcomes[i].reward);
            CHECK(out.terminal == outcomes[i].terminal);
            CHECK(out.raw_label == outcomes[i].raw_label);
            if (out.terminal) replay.reset();
        }
    }
}

TEST_CASE("layout parser rejects malformed input") {
    CHECK_THROWS_AS(parse_layout("name: x\ngrid:\n##\n#\nlegend:\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_layout("name: x\ngrid:\n###\n#z#\n###\nlegend:\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_layout("name: x\ngrid:\n###\n#.#\n###\nlegend:\n"), std::invalid_argument);
    Layout ok = parse_layout(kCorridorLayout);
    CHECK(ok.width == 7);
    CHECK(ok.height == 3);
    CHECK(ok.start == GridPos{1, 1});
    CHECK(*ok.label_at({3, 1}) == "c");
}
