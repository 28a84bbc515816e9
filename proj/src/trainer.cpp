#include "alcs/trainer.hpp"

#include <stdexcept>

#include "alcs/rng.hpp"

namespace alcs {

void TrainConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("config: alpha must be in (0,1]");
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("config: beta must be in (0,1]");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("config: gamma must be in [0,1)");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("config: epsilon must be in [0,1]");
    if (eval_episodes <= 0) throw std::invalid_argument("config: eval_episodes must be > 0");
    if (step_cap_override < 0) throw std::invalid_argument("config: step_cap_override must be >= 0");
}

namespace {

std::vector<std::uint8_t> vocab_ids_of(const LabeledGridEnv& env) {
    std::vector<std::uint8_t> ids(env.vocab_size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::uint8_t>(i);
    return ids;
}

}  // namespace

TrainResult train(LabeledGridEnv env, const TrainConfig& cfg, const TrainHooks* hooks) {
    cfg.validate();
    TrainResult res;
    if (cfg.episodes == 0) return res;

    if (cfg.step_cap_override > 0) {
        TaskSpec spec = env.spec();
        spec.step_cap = cfg.step_cap_override;
        env = build_env(std::move(spec), env.seed());
    }

    const std::vector<std::uint8_t> vocab_ids = vocab_ids_of(env);
    const std::size_t n_vocab = vocab_ids.size();
    static const SubtaskSeq kEmptySeq;

    auto action_rng = make_stream(cfg.seed, RngStream::action);
    auto low_tie = make_stream(cfg.seed, RngStream::low_tie);
    auto high_tie = make_stream(cfg.seed, RngStream::high_tie);
    auto eval_rng = make_stream(cfg.seed, RngStream::eval);

    LabeledGridEnv eval_env = env;  // independent instance for frozen-policy evals

    const HighUpdateObserver* high_obs =
        (hooks && hooks->on_high_update) ? &hooks->on_high_update : nullptr;

    std::uint64_t total_steps = 0;
    std::uint64_t episodes_done = 0;
    auto record_eval = [&]() {
        RunLogRow row{total_steps,
                      evaluate(eval_env, res.q_low, res.q_high, cfg.eval_episodes, eval_rng,
                               !cfg.no_sequence),
                      episodes_done};
        res.log.rows.push_back(row);
        if (hooks && hooks->on_eval_row) hooks->on_eval_row(row);
    };
    if (cfg.eval_every > 0) record_eval();

    std::vector<LowExperience> experiences;
    EpisodeBuffer buffer;

    for (std::uint64_t episode = 0; episode < cfg.episodes; ++episode) {
        if (cfg.max_env_steps > 0 && total_steps >= cfg.max_env_steps) break;
        GridPos s = env.reset();
        std::optional<SubtaskId> pos_label = env.cell_label(s);
        SubtaskSeq seq;
        buffer.clear();
        std::uint64_t t = 0;
        bool terminal = false;
        while (!terminal) {
            SubtaskId p_t =
                select_subtask(res.q_high, s, cfg.no_sequence ? kEmptySeq : seq, vocab_ids, high_tie);
            Action a = select_action(res.q_low, s, p_t, cfg.epsilon, action_rng, low_tie);
            StepOutcome out = env.step(a);
            total_steps += 1;

            // The low level learns from the stationary position labels; the
            // deduped label drives sequences and the high-level flush.
            std::optional<SubtaskId> pos_label_next = env.cell_label(out.next_state);
            if (cfg.no_multi_experience) {
                double r_p = subtask_reward(p_t, pos_label, pos_label_next);
                LowExperience single{s, a, out.next_state, r_p, p_t, r_p > 0.0};
                update_q_l(res.q_low, {&single, 1}, cfg.alpha, cfg.gamma);
            } else {
                generate_low_experiences(s, a, out.next_state, pos_label, pos_label_next, n_vocab,
                                         experiences);
                update_q_l(res.q_low, experiences, cfg.alpha, cfg.gamma);
            }

            if (out.raw_label) res.tree.record_achievement(seq, *out.raw_label, out.reward);
            SubtaskSeq seq_next = record_step(buffer, s, seq, p_t, out.next_state, out.reward,
                                              out.raw_label, !cfg.no_assumed_choice);

            if (hooks && hooks->on_step)
                hooks->on_step(StepEvent{episode, t, s, seq, p_t, a, out.next_state, out.reward,
                                         out.raw_label, out.terminal});

            seq = std::move(seq_next);
            pos_label = pos_label_next;
            s = out.next_state;
            terminal = out.terminal;
            t += 1;

            if (cfg.eval_every > 0 && total_steps % cfg.eval_every == 0 &&
                (cfg.max_env_steps == 0 || total_steps <= cfg.max_env_steps))
                record_eval();
        }
        finalize_episode(res.q_high, buffer, vocab_ids, cfg.beta, cfg.gamma, !cfg.no_sequence,
                         high_obs);
        episodes_done += 1;
    }
    return res;
}

double evaluate(LabeledGridEnv& env, const QTable& q_low, const QTable& q_high, int episodes,
                std::mt19937_64& rng, bool seq_in_keys) {
    const std::vector<std::uint8_t> vocab_ids = vocab_ids_of(env);
    static const SubtaskSeq kEmptySeq;
    double total = 0.0;
    for (int e = 0; e < episodes; ++e) {
        GridPos s = env.reset();
        SubtaskSeq seq;
        bool terminal = false;
        while (!terminal) {
            SubtaskId p = select_subtask(q_high, s, seq_in_keys ? seq : kEmptySeq, vocab_ids, rng);
            Action a = static_cast<Action>(argmax_over(q_low, low_prefix(s, p), kActionIds, rng));
            StepOutcome out = env.step(a);
            total += out.reward;
            if (out.raw_label) seq.push_back(*out.raw_label);
            s = out.next_state;
            terminal = out.terminal;
        }
    }
    return episodes > 0 ? total / episodes : 0.0;
}

}  // namespace alcs
