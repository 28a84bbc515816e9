#include <sstream>

#include "alcs/rng.hpp"
#include "alcs/snapshot.hpp"
#include "alcs/trainer.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace alcs;
using namespace testutil;

TEST_CASE("config validation rejects bad ranges before any episode") {
    LabeledGridEnv env = make_env("Coffee");
    TrainConfig cfg;
    cfg.alpha = 0.0;
    CHECK_THROWS_AS(train(env, cfg), std::invalid_argument);
    cfg = {};
    cfg.gamma = 1.0;
    CHECK_THROWS_AS(train(env, cfg), std::invalid_argument);
    cfg = {};
    cfg.epsilon = 1.5;
    CHECK_THROWS_AS(train(env, cfg), std::invalid_argument);
    cfg = {};
    cfg.eval_episodes = 0;
    CHECK_THROWS_AS(train(env, cfg), std::invalid_argument);
}

TEST_CASE("zero episodes: empty log, untouched tables") {
    LabeledGridEnv env = make_env("Coffee");
    TrainConfig cfg;
    cfg.episodes = 0;
    TrainResult res = train(env, cfg);
    CHECK(res.log.rows.empty());
    CHECK(res.q_low.size() == 0);
    CHECK(res.q_high.size() == 0);
    CHECK(res.tree.node_count() == 1);
}

TEST_CASE("same config and seed reproduce the run bit for bit") {
    LabeledGridEnv env = make_env("CoffeeMail", 5);
    TrainConfig cfg;
    cfg.seed = 5;
    cfg.max_env_steps = 30000;
    cfg.eval_every = 2000;
    TrainResult a = train(env, cfg);
    TrainResult b = train(env, cfg);
    REQUIRE(a.log.rows.size() == b.log.rows.size());
    for (std::size_t i = 0; i < a.log.rows.size(); ++i) {
        CHECK(a.log.rows[i].env_steps == b.log.rows[i].env_steps);
        CHECK(a.log.rows[i].eval_return == b.log.rows[i].eval_return);
        CHECK(a.log.rows[i].episode == b.log.rows[i].episode);
    }
    const auto& vocab = env.vocabulary();
    save_table(a.q_low, KeySchema::low, vocab, "/tmp/alcs_test_qa.tsv");
    save_table(b.q_low, KeySchema::low, vocab, "/tmp/alcs_test_qb.tsv");
    CHECK(read_text_file("/tmp/alcs_test_qa.tsv") == read_text_file("/tmp/alcs_test_qb.tsv"));
    CHECK(a.tree.serialize(vocab) == b.tree.serialize(vocab));
}

TEST_CASE("evaluation rows sit exactly on the step grid and stop at the budget") {
    LabeledGridEnv env = make_env("Coffee", 1);
    TrainConfig cfg;
    cfg.seed = 1;
    cfg.max_env_steps = 10000;
    cfg.eval_every = 1000;
    TrainResult res = train(env, cfg);
    REQUIRE(res.log.rows.size() == 11);  // steps 0, 1000, ..., 10000
    for (std::size_t i = 0; i < res.log.rows.size(); ++i) {
        CHECK(res.log.rows[i].env_steps == i * 1000);
        if (i) CHECK(res.log.rows[i].env_steps > res.log.rows[i - 1].env_steps);
    }
}

TEST_CASE("untrained greedy evaluation rarely completes the coffee task") {
    LabeledGridEnv env = make_env("Coffee", 0);
    QTable ql(3), qh(3);
    auto rng = make_stream(0, RngStream::eval);
    double mean = evaluate(env, ql, qh, 20, rng);
    CHECK(mean < 0.2);
}

TEST_CASE("training coffee converges and stays converged") {
    LabeledGridEnv env = make_env("Coffee", 0);
    TrainConfig cfg;
    cfg.seed = 0;
    cfg.max_env_steps = 60000;
    cfg.eval_every = 2000;
    TrainResult res = train(env, cfg);
    bool reached = false;
    for (const auto& row : res.log.rows) {
        if (row.eval_return >= 1.0) reached = true;
        if (reached) CHECK(row.eval_return >= 0.95);
    }
    CHECK(reached);

    // converged tables drive a perfect greedy evaluation
    auto rng = make_stream(123, RngStream::eval);
    LabeledGridEnv fresh = make_env("Coffee", 0);
    CHECK(evaluate(fresh, res.q_low, res.q_high, 20, rng) == doctest::Approx(1.0));
}

TEST_CASE("flushed experiences carry the live sequence at each step") {
    LabeledGridEnv env = make_env("CoffeeMail", 7);
    TrainConfig cfg;
    cfg.seed = 7;
    cfg.max_env_steps = 6000;
    cfg.eval_every = 0;

    struct Step {
        GridPos s;
        SubtaskSeq seq_before;
        SubtaskId chosen;
        double r;
    };
    std::vector<Step> episode;
    std::vector<HighExperience> updates;
    TrainHooks hooks;
    hooks.on_step = [&](const StepEvent& ev) {
        episode.push_back({ev.s, ev.seq_before, ev.p_chosen, ev.r});
        if (!ev.terminal) return;
        // finalize fires after this; compare once it has
    };
    hooks.on_high_update = [&](const HighExperience& e, double) { updates.push_back(e); };

    // run one full episode manually through train by bounding episodes
    cfg.episodes = 1;
    cfg.max_env_steps = 0;
    train(env, cfg, &hooks);

    // updates arrive newest-first and must match the head of the step log
    REQUIRE(updates.size() <= episode.size());
    for (std::size_t i = 0; i < updates.size(); ++i) {
        const Step& st = episode[updates.size() - 1 - i];
        CHECK(updates[i].s == st.s);
        CHECK(updates[i].seq == st.seq_before);
        CHECK(updates[i].r == st.r);
    }
}

TEST_CASE("ablation switches") {
    SUBCASE("no_sequence keys drop the sequence everywhere") {
        LabeledGridEnv env = make_env("CoffeeMail", 4);
        TrainConfig cfg;
        cfg.seed = 4;
        cfg.max_env_steps = 5000;
        cfg.eval_every = 0;
        cfg.no_sequence = true;
        TrainResult res = train(env, cfg);
        save_table(res.q_high, KeySchema::high, env.vocabulary(), "/tmp/alcs_test_noseq.tsv");
        std::istringstream in(read_text_file("/tmp/alcs_test_noseq.tsv"));
        std::string line;
        int rows = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            rows += 1;
            CHECK(line.find("\t()\t") != std::string::npos);
        }
        CHECK(rows > 0);
    }
    SUBCASE("no_assumed_choice stores only chosen subtasks") {
        LabeledGridEnv env = make_env("CoffeeMail", 4);
        TrainConfig cfg;
        cfg.seed = 4;
        cfg.episodes = 3;
        cfg.eval_every = 0;
        cfg.no_assumed_choice = true;
        std::vector<SubtaskId> chosen;
        std::vector<SubtaskId> stored;
        TrainHooks hooks;
        hooks.on_step = [&](const StepEvent& ev) { chosen.push_back(ev.p_chosen); };
        hooks.on_high_update = [&](const HighExperience& e, double) { stored.push_back(e.p); };
        train(env, cfg, &hooks);
        REQUIRE(stored.size() == chosen.size());  // every step flushes immediately
        // updates run newest-first within each episode; compare as multisets
        std::sort(chosen.begin(), chosen.end());
        std::sort(stored.begin(), stored.end());
        CHECK(chosen == stored);
    }
}

TEST_CASE("step cap override rebuilds the episode bound") {
    LabeledGridEnv env = make_env("Coffee", 0);
    TrainConfig cfg;
    cfg.seed = 0;
    cfg.episodes = 1;
    cfg.eval_every = 0;
    cfg.step_cap_override = 7;
    std::uint64_t steps = 0;
    TrainHooks hooks;
    hooks.on_step = [&](const StepEvent& ev) { steps += 1; };
    train(env, cfg, &hooks);
    CHECK(steps <= 7);
}
