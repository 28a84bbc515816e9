#include "alcs/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "alcs/rng.hpp"

namespace alcs {

void BaselineConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("config: alpha must be in (0,1]");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("config: gamma must be in [0,1)");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("config: epsilon must be in [0,1]");
    if (eval_episodes <= 0) throw std::invalid_argument("config: eval_episodes must be > 0");
    if (option_timeout <= 0) throw std::invalid_argument("config: option_timeout must be > 0");
    if (relabel_count < 0) throw std::invalid_argument("config: relabel_count must be >= 0");
    if (step_cap_override < 0) throw std::invalid_argument("config: step_cap_override must be >= 0");
}

namespace {

// Movement/reward/termination only; keeps the flat learner away from labels.
class MarkovEnvView {
public:
    explicit MarkovEnvView(LabeledGridEnv& env) : env_(env) {}
    struct Out {
        GridPos next{};
        double reward = 0.0;
        bool terminal = false;
    };
    GridPos reset() { return env_.reset(); }
    Out step(Action a) {
        StepOutcome o = env_.step(a);
        return {o.next_state, o.reward, o.terminal};
    }

private:
    LabeledGridEnv& env_;
};

LabeledGridEnv with_cap(LabeledGridEnv env, int cap) {
    if (cap <= 0) return env;
    TaskSpec spec = env.spec();
    spec.step_cap = cap;
    return build_env(std::move(spec), env.seed());
}

std::vector<std::uint8_t> vocab_ids_of(const LabeledGridEnv& env) {
    std::vector<std::uint8_t> ids(env.vocab_size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::uint8_t>(i);
    return ids;
}

QKey flat_prefix(GridPos s) {
    QKey k;
    k.add_pos(s);
    return k;
}

Action eps_greedy_flat(const QTable& q, GridPos s, double epsilon, std::mt19937_64& action_rng,
                       std::mt19937_64& tie_rng) {
    if (canonical(action_rng) > epsilon)
        return static_cast<Action>(argmax_over(q, flat_prefix(s), kActionIds, tie_rng));
    return static_cast<Action>(uniform_below(action_rng, kNumActions));
}

}  // namespace

FlatResult train_flat_q(LabeledGridEnv env, const BaselineConfig& cfg, const BaselineHooks* hooks) {
    cfg.validate();
    FlatResult res;
    if (cfg.episodes == 0) return res;
    env = with_cap(std::move(env), cfg.step_cap_override);

    auto action_rng = make_stream(cfg.seed, RngStream::action);
    auto tie_rng = make_stream(cfg.seed, RngStream::low_tie);
    auto eval_rng = make_stream(cfg.seed, RngStream::eval);
    LabeledGridEnv eval_env = env;

    std::uint64_t total_steps = 0, episodes_done = 0;
    auto record_eval = [&]() {
        RunLogRow row{total_steps, evaluate_flat(eval_env, res.q, cfg.eval_episodes, eval_rng),
                      episodes_done};
        res.log.rows.push_back(row);
        if (hooks && hooks->on_eval_row) hooks->on_eval_row(row);
    };
    if (cfg.eval_every > 0) record_eval();

    MarkovEnvView view(env);
    for (std::uint64_t episode = 0; episode < cfg.episodes; ++episode) {
        if (cfg.max_env_steps > 0 && total_steps >= cfg.max_env_steps) break;
        GridPos s = view.reset();
        bool terminal = false;
        while (!terminal) {
            Action a = eps_greedy_flat(res.q, s, cfg.epsilon, action_rng, tie_rng);
            auto out = view.step(a);
            total_steps += 1;
            double y = out.terminal
                           ? out.reward
                           : out.reward + cfg.gamma * max_over(res.q, flat_prefix(out.next), kActionIds);
            res.q.td_set(flat_prefix(s).completed_with(static_cast<std::uint8_t>(a)), y, cfg.alpha);
            s = out.next;
            terminal = out.terminal;
            if (cfg.eval_every > 0 && total_steps % cfg.eval_every == 0 &&
                (cfg.max_env_steps == 0 || total_steps <= cfg.max_env_steps))
                record_eval();
        }
        episodes_done += 1;
    }
    return res;
}

namespace {

OptionResult train_options(LabeledGridEnv env, const BaselineConfig& cfg, bool interrupt_every_step,
                           const BaselineHooks* hooks) {
    cfg.validate();
    OptionResult res;
    if (cfg.episodes == 0) return res;
    env = with_cap(std::move(env), cfg.step_cap_override);

    const std::vector<std::uint8_t> vocab_ids = vocab_ids_of(env);
    const std::size_t n_vocab = vocab_ids.size();

    auto action_rng = make_stream(cfg.seed, RngStream::action);
    auto low_tie = make_stream(cfg.seed, RngStream::low_tie);
    auto high_tie = make_stream(cfg.seed, RngStream::high_tie);
    auto option_rng = make_stream(cfg.seed, RngStream::option);
    auto eval_rng = make_stream(cfg.seed, RngStream::eval);
    LabeledGridEnv eval_env = env;

    std::uint64_t total_steps = 0, episodes_done = 0;
    auto record_eval = [&]() {
        RunLogRow row{total_steps,
                      evaluate_options(eval_env, res.q_opt, res.q_low, cfg.eval_episodes, eval_rng,
                                       interrupt_every_step, cfg.option_timeout),
                      episodes_done};
        res.log.rows.push_back(row);
        if (hooks && hooks->on_eval_row) hooks->on_eval_row(row);
    };
    if (cfg.eval_every > 0) record_eval();

    std::vector<LowExperience> experiences;
    for (std::uint64_t episode = 0; episode < cfg.episodes; ++episode) {
        if (cfg.max_env_steps > 0 && total_steps >= cfg.max_env_steps) break;
        GridPos s = env.reset();
        std::optional<SubtaskId> pos_label = env.cell_label(s);
        bool terminal = false;
        std::uint64_t t = 0;

        SubtaskId option = 0;
        GridPos opt_start{};
        int k = 0;
        double disc_r = 0.0;
        bool need_option = true;

        while (!terminal) {
            if (need_option) {
                if (canonical(option_rng) > cfg.epsilon)
                    option = argmax_over(res.q_opt, flat_prefix(s), vocab_ids, high_tie);
                else
                    option = static_cast<SubtaskId>(uniform_below(option_rng, static_cast<std::uint32_t>(n_vocab)));
                opt_start = s;
                k = 0;
                disc_r = 0.0;
                need_option = false;
                if (hooks && hooks->on_option_start)
                    hooks->on_option_start(OptionEvent{episode, t, s, option});
            }
            Action a = select_action(res.q_low, s, option, cfg.epsilon, action_rng, low_tie);
            StepOutcome out = env.step(a);
            total_steps += 1;

            std::optional<SubtaskId> pos_label_next = env.cell_label(out.next_state);
            generate_low_experiences(s, a, out.next_state, pos_label, pos_label_next, n_vocab,
                                     experiences);
            update_q_l(res.q_low, experiences, cfg.alpha, cfg.gamma);

            disc_r += std::pow(cfg.gamma, k) * out.reward;
            k += 1;

            bool boundary = interrupt_every_step || out.raw_label == option || k >= cfg.option_timeout ||
                            out.terminal;
            if (boundary) {
                double y = disc_r;
                if (!out.terminal)
                    y += std::pow(cfg.gamma, k) * max_over(res.q_opt, flat_prefix(out.next_state), vocab_ids);
                res.q_opt.td_set(flat_prefix(opt_start).completed_with(option), y, cfg.alpha);
                if (hooks && hooks->on_option_update)
                    hooks->on_option_update(OptionUpdateEvent{opt_start, option, y});
                need_option = true;
            }

            pos_label = pos_label_next;
            s = out.next_state;
            terminal = out.terminal;
            t += 1;
            if (cfg.eval_every > 0 && total_steps % cfg.eval_every == 0 &&
                (cfg.max_env_steps == 0 || total_steps <= cfg.max_env_steps))
                record_eval();
        }
        episodes_done += 1;
    }
    return res;
}

}  // namespace

OptionResult train_hrl(LabeledGridEnv env, const BaselineConfig& cfg, const BaselineHooks* hooks) {
    return train_options(std::move(env), cfg, false, hooks);
}

OptionResult train_interrupting(LabeledGridEnv env, const BaselineConfig& cfg,
                                const BaselineHooks* hooks) {
    return train_options(std::move(env), cfg, true, hooks);
}

GoalResult train_her(LabeledGridEnv env, const BaselineConfig& cfg, const BaselineHooks* hooks) {
    cfg.validate();
    GoalResult res;
    if (cfg.episodes == 0) return res;
    env = with_cap(std::move(env), cfg.step_cap_override);

    const std::size_t n_vocab = env.vocab_size();
    auto action_rng = make_stream(cfg.seed, RngStream::action);
    auto low_tie = make_stream(cfg.seed, RngStream::low_tie);
    auto goal_rng = make_stream(cfg.seed, RngStream::goal);
    auto eval_rng = make_stream(cfg.seed, RngStream::eval);
    LabeledGridEnv eval_env = env;

    std::uint64_t total_steps = 0, episodes_done = 0;
    auto record_eval = [&]() {
        RunLogRow row{total_steps, evaluate_her(eval_env, res.q, cfg.eval_episodes, eval_rng),
                      episodes_done};
        res.log.rows.push_back(row);
        if (hooks && hooks->on_eval_row) hooks->on_eval_row(row);
    };
    if (cfg.eval_every > 0) record_eval();

    struct SegmentStep {
        GridPos s{};
        Action a = Action::up;
        GridPos s_next{};
        std::optional<SubtaskId> label_s;
        std::optional<SubtaskId> label_s_next;
    };
    std::vector<SegmentStep> segment;

    for (std::uint64_t episode = 0; episode < cfg.episodes; ++episode) {
        if (cfg.max_env_steps > 0 && total_steps >= cfg.max_env_steps) break;
        GridPos s = env.reset();
        std::optional<SubtaskId> pos_label = env.cell_label(s);
        SubtaskId goal = static_cast<SubtaskId>(uniform_below(goal_rng, static_cast<std::uint32_t>(n_vocab)));
        segment.clear();
        bool terminal = false;
        while (!terminal) {
            Action a = select_action(res.q, s, goal, cfg.epsilon, action_rng, low_tie);
            StepOutcome out = env.step(a);
            total_steps += 1;

            std::optional<SubtaskId> pos_label_next = env.cell_label(out.next_state);
            double r_g = subtask_reward(goal, pos_label, pos_label_next);
            LowExperience behavior{s, a, out.next_state, r_g, goal, r_g > 0.0};
            update_q_l(res.q, {&behavior, 1}, cfg.alpha, cfg.gamma);

            segment.push_back({s, a, out.next_state, pos_label, pos_label_next});
            if (out.raw_label) {
                SubtaskId achieved = *out.raw_label;
                for (int pass = 0; pass < cfg.relabel_count; ++pass) {
                    for (const SegmentStep& step : segment) {
                        double r = subtask_reward(achieved, step.label_s, step.label_s_next);
                        LowExperience relabeled{step.s, step.a, step.s_next, r, achieved, r > 0.0};
                        update_q_l(res.q, {&relabeled, 1}, cfg.alpha, cfg.gamma);
                    }
                }
                segment.clear();
            }

            pos_label = pos_label_next;
            s = out.next_state;
            terminal = out.terminal;
            if (cfg.eval_every > 0 && total_steps % cfg.eval_every == 0 &&
                (cfg.max_env_steps == 0 || total_steps <= cfg.max_env_steps))
                record_eval();
        }
        episodes_done += 1;
    }
    return res;
}

double evaluate_flat(LabeledGridEnv& env, const QTable& q, int episodes, std::mt19937_64& rng) {
    double total = 0.0;
    for (int e = 0; e < episodes; ++e) {
        GridPos s = env.reset();
        bool terminal = false;
        while (!terminal) {
            Action a = static_cast<Action>(argmax_over(q, flat_prefix(s), kActionIds, rng));
            StepOutcome out = env.step(a);
            total += out.reward;
            s = out.next_state;
            terminal = out.terminal;
        }
    }
    return episodes > 0 ? total / episodes : 0.0;
}

double evaluate_options(LabeledGridEnv& env, const QTable& q_opt, const QTable& q_low, int episodes,
                        std::mt19937_64& rng, bool interrupt_every_step, int option_timeout) {
    const std::vector<std::uint8_t> vocab_ids = vocab_ids_of(env);
    double total = 0.0;
    for (int e = 0; e < episodes; ++e) {
        GridPos s = env.reset();
        bool terminal = false;
        SubtaskId option = 0;
        int k = 0;
        bool need_option = true;
        while (!terminal) {
            if (need_option || interrupt_every_step) {
                option = argmax_over(q_opt, flat_prefix(s), vocab_ids, rng);
                k = 0;
                need_option = false;
            }
            Action a = static_cast<Action>(argmax_over(q_low, low_prefix(s, option), kActionIds, rng));
            StepOutcome out = env.step(a);
            total += out.reward;
            k += 1;
            if (out.raw_label == option || k >= option_timeout) need_option = true;
            s = out.next_state;
            terminal = out.terminal;
        }
    }
    return episodes > 0 ? total / episodes : 0.0;
}

double evaluate_her(LabeledGridEnv& env, const QTable& q, int episodes, std::mt19937_64& rng) {
    const std::size_t n_vocab = env.vocab_size();
    double total = 0.0;
    for (int e = 0; e < episodes; ++e) {
        GridPos s = env.reset();
        SubtaskId goal = static_cast<SubtaskId>(uniform_below(rng, static_cast<std::uint32_t>(n_vocab)));
        bool terminal = false;
        while (!terminal) {
            Action a = static_cast<Action>(argmax_over(q, low_prefix(s, goal), kActionIds, rng));
            StepOutcome out = env.step(a);
            total += out.reward;
            s = out.next_state;
            terminal = out.terminal;
        }
    }
    return episodes > 0 ? total / episodes : 0.0;
}

}  // namespace alcs
