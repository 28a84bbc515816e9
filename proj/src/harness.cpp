#include "alcs/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "alcs/rng.hpp"
#include "alcs/text.hpp"

namespace fs = std::filesystem;

namespace alcs {

namespace {
constexpr std::uint64_t kExplainSeed = 0xa1c5;
}

const char* method_name(Method m) {
    switch (m) {
        case Method::alcs: return "alcs";
        case Method::alcs_wo_m: return "alcs_wo_m";
        case Method::alcs_wo_s: return "alcs_wo_s";
        case Method::alcs_wo_a: return "alcs_wo_a";
        case Method::flat_q: return "flat_q";
        case Method::hrl: return "hrl";
        case Method::interrupting: return "interrupting";
        case Method::her: return "her";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    for (Method m : {Method::alcs, Method::alcs_wo_m, Method::alcs_wo_s, Method::alcs_wo_a,
                     Method::flat_q, Method::hrl, Method::interrupting, Method::her})
        if (name == method_name(m)) return m;
    throw std::invalid_argument("unknown method '" + name + "'");
}

void ExperimentSpec::validate() const {
    if (!is_task_name(task)) throw std::invalid_argument("unknown task '" + task + "'");
    if (trim < 0) throw std::invalid_argument("trim must be >= 0");
    if (n_runs <= 2 * trim)
        throw std::invalid_argument("n_runs must exceed 2*trim (" + std::to_string(n_runs) + " vs trim " +
                                    std::to_string(trim) + ")");
    if (option_timeout <= 0) throw std::invalid_argument("option_timeout must be > 0");
    if (relabel_count < 0) throw std::invalid_argument("relabel_count must be >= 0");
    train.validate();
}

ExperimentSpec parse_experiment_spec(const std::string& text) {
    ExperimentSpec spec;
    std::istringstream in(text);
    std::string raw;
    auto to_bool = [](const std::string& v) {
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw std::invalid_argument("expected true/false, got '" + v + "'");
    };
    while (std::getline(in, raw)) {
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto colon = line.find(':');
        if (colon == std::string_view::npos)
            throw std::invalid_argument("experiment spec: expected 'key: value', got '" +
                                        std::string(line) + "'");
        std::string key(trim(line.substr(0, colon)));
        std::string value(trim(line.substr(colon + 1)));
        if (key == "task") spec.task = value;
        else if (key == "method") spec.method = method_from_name(value);
        else if (key == "n_runs") spec.n_runs = static_cast<int>(parse_int(value));
        else if (key == "trim") spec.trim = static_cast<int>(parse_int(value));
        else if (key == "seed") spec.base_seed = static_cast<std::uint64_t>(parse_int(value));
        else if (key == "episodes") spec.train.episodes = static_cast<std::uint64_t>(parse_int(value));
        else if (key == "max_env_steps") spec.train.max_env_steps = static_cast<std::uint64_t>(parse_int(value));
        else if (key == "eval_every") spec.train.eval_every = static_cast<std::uint64_t>(parse_int(value));
        else if (key == "eval_episodes") spec.train.eval_episodes = static_cast<int>(parse_int(value));
        else if (key == "alpha") spec.train.alpha = parse_double(value);
        else if (key == "beta") spec.train.beta = parse_double(value);
        else if (key == "gamma") spec.train.gamma = parse_double(value);
        else if (key == "epsilon") spec.train.epsilon = parse_double(value);
        else if (key == "step_cap") spec.train.step_cap_override = static_cast<int>(parse_int(value));
        else if (key == "no_multi_experience") spec.train.no_multi_experience = to_bool(value);
        else if (key == "no_sequence") spec.train.no_sequence = to_bool(value);
        else if (key == "no_assumed_choice") spec.train.no_assumed_choice = to_bool(value);
        else if (key == "option_timeout") spec.option_timeout = static_cast<int>(parse_int(value));
        else if (key == "relabel_count") spec.relabel_count = static_cast<int>(parse_int(value));
        else if (key == "out") spec.out_dir = value;
        else if (key == "layouts") spec.layouts_dir = value;
        else throw std::invalid_argument("experiment spec: unknown key '" + key + "'");
    }
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    return parse_experiment_spec(read_text_file(path));
}

std::string experiment_spec_to_text(const ExperimentSpec& spec) {
    std::ostringstream out;
    out << "task: " << spec.task << '\n'
        << "method: " << method_name(spec.method) << '\n'
        << "n_runs: " << spec.n_runs << '\n'
        << "trim: " << spec.trim << '\n'
        << "seed: " << spec.base_seed << '\n'
        << "episodes: " << spec.train.episodes << '\n'
        << "max_env_steps: " << spec.train.max_env_steps << '\n'
        << "eval_every: " << spec.train.eval_every << '\n'
        << "eval_episodes: " << spec.train.eval_episodes << '\n'
        << "alpha: " << format_double(spec.train.alpha) << '\n'
        << "beta: " << format_double(spec.train.beta) << '\n'
        << "gamma: " << format_double(spec.train.gamma) << '\n'
        << "epsilon: " << format_double(spec.train.epsilon) << '\n'
        << "step_cap: " << spec.train.step_cap_override << '\n'
        << "no_multi_experience: " << (spec.train.no_multi_experience ? "true" : "false") << '\n'
        << "no_sequence: " << (spec.train.no_sequence ? "true" : "false") << '\n'
        << "no_assumed_choice: " << (spec.train.no_assumed_choice ? "true" : "false") << '\n'
        << "option_timeout: " << spec.option_timeout << '\n'
        << "relabel_count: " << spec.relabel_count << '\n'
        << "out: " << spec.out_dir << '\n'
        << "layouts: " << spec.layouts_dir << '\n';
    return out.str();
}

void write_run_csv(const std::string& path, const std::vector<RunLogRow>& rows) {
    std::string body = "env_steps,eval_return,episode\n";
    for (const auto& r : rows)
        body += std::to_string(r.env_steps) + "," + format_double(r.eval_return) + "," +
                std::to_string(r.episode) + "\n";
    write_text_file(path, body);
}

std::vector<RunLogRow> read_run_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || trim(line) != "env_steps,eval_return,episode")
        throw std::invalid_argument("run csv '" + path + "': bad header");
    std::vector<RunLogRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto f = split(trim(line), ',');
        if (f.size() != 3) throw std::invalid_argument("run csv '" + path + "': bad row '" + line + "'");
        rows.push_back({static_cast<std::uint64_t>(parse_int(f[0])), parse_double(f[1]),
                        static_cast<std::uint64_t>(parse_int(f[2]))});
    }
    return rows;
}

void write_aggregate_csv(const std::string& path, const std::vector<AggRow>& rows) {
    std::string body = "env_steps,mean,lower,upper\n";
    for (const auto& r : rows)
        body += std::to_string(r.env_steps) + "," + format_double(r.mean) + "," +
                format_double(r.lower) + "," + format_double(r.upper) + "\n";
    write_text_file(path, body);
}

std::vector<AggRow> read_aggregate_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || trim(line) != "env_steps,mean,lower,upper")
        throw std::invalid_argument("aggregate csv '" + path + "': bad header");
    std::vector<AggRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto f = split(trim(line), ',');
        if (f.size() != 4)
            throw std::invalid_argument("aggregate csv '" + path + "': bad row '" + line + "'");
        rows.push_back({static_cast<std::uint64_t>(parse_int(f[0])), parse_double(f[1]),
                        parse_double(f[2]), parse_double(f[3])});
    }
    return rows;
}

std::vector<AggRow> aggregate(const std::vector<std::vector<RunLogRow>>& curves, int trim) {
    if (curves.empty()) throw std::invalid_argument("aggregate: no curves");
    if (static_cast<int>(curves.size()) <= 2 * trim)
        throw std::invalid_argument("aggregate: need more than 2*trim curves");
    const auto& grid = curves.front();
    for (const auto& c : curves) {
        if (c.size() != grid.size()) throw std::invalid_argument("aggregate: eval grids differ");
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i].env_steps != grid[i].env_steps)
                throw std::invalid_argument("aggregate: eval grids differ");
    }
    std::vector<AggRow> out;
    out.reserve(grid.size());
    std::vector<double> values(curves.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t r = 0; r < curves.size(); ++r) values[r] = curves[r][i].eval_return;
        std::sort(values.begin(), values.end());
        double sum = 0.0;
        for (std::size_t r = trim; r < values.size() - trim; ++r) sum += values[r];
        const std::size_t kept = values.size() - 2 * static_cast<std::size_t>(trim);
        out.push_back({grid[i].env_steps, sum / static_cast<double>(kept), values[trim],
                       values[values.size() - 1 - trim]});
    }
    return out;
}

namespace {

std::string meta_text(const ExperimentSpec& spec, std::uint64_t seed, int resolved_cap) {
    std::ostringstream out;
    out << "task: " << spec.task << '\n'
        << "method: " << method_name(spec.method) << '\n'
        << "seed: " << seed << '\n'
        << "step_cap: " << resolved_cap << '\n'
        << "alpha: " << format_double(spec.train.alpha) << '\n'
        << "beta: " << format_double(spec.train.beta) << '\n'
        << "gamma: " << format_double(spec.train.gamma) << '\n'
        << "epsilon: " << format_double(spec.train.epsilon) << '\n'
        << "eval_every: " << spec.train.eval_every << '\n'
        << "eval_episodes: " << spec.train.eval_episodes << '\n'
        << "max_env_steps: " << spec.train.max_env_steps << '\n'
        << "option_timeout: " << spec.option_timeout << '\n'
        << "relabel_count: " << spec.relabel_count << '\n';
    return out.str();
}

class CsvSink {
public:
    explicit CsvSink(const std::string& path) {
        if (path.empty()) return;
        file_.open(path, std::ios::binary);
        if (!file_) throw std::runtime_error("cannot write '" + path + "'");
        file_ << "env_steps,eval_return,episode\n";
        file_.flush();
    }
    void append(const RunLogRow& r) {
        if (!file_.is_open()) return;
        file_ << r.env_steps << ',' << format_double(r.eval_return) << ',' << r.episode << '\n';
        file_.flush();
    }

private:
    std::ofstream file_;
};

}  // namespace

std::vector<RunLogRow> run_single(const ExperimentSpec& spec, std::uint64_t seed,
                                  const std::string& snapshot_dir, const std::string& csv_path) {
    TaskSpec task = make_task(spec.task, spec.layouts_dir);
    const int resolved_cap =
        spec.train.step_cap_override > 0 ? spec.train.step_cap_override : task.step_cap;
    LabeledGridEnv env = build_env(task, seed);
    if (!snapshot_dir.empty()) fs::create_directories(snapshot_dir);

    CsvSink sink(csv_path);
    std::vector<RunLogRow> rows;

    auto snap = [&](const std::string& name) { return snapshot_dir + "/" + name; };
    const bool want_snapshot = !snapshot_dir.empty();

    switch (spec.method) {
        case Method::alcs:
        case Method::alcs_wo_m:
        case Method::alcs_wo_s:
        case Method::alcs_wo_a: {
            TrainConfig cfg = spec.train;
            cfg.seed = seed;
            if (spec.method == Method::alcs_wo_m) cfg.no_multi_experience = true;
            if (spec.method == Method::alcs_wo_s) cfg.no_sequence = true;
            if (spec.method == Method::alcs_wo_a) cfg.no_assumed_choice = true;
            TrainHooks hooks;
            hooks.on_eval_row = [&](const RunLogRow& r) { sink.append(r); };
            TrainResult res = train(env, cfg, &hooks);
            rows = res.log.rows;
            if (want_snapshot) {
                save_table(res.q_low, KeySchema::low, task.vocabulary, snap("qlow.tsv"));
                save_table(res.q_high, KeySchema::high, task.vocabulary, snap("qhigh.tsv"));
                save_tree(res.tree, task.vocabulary, snap("tree.txt"));
                write_text_file(snap("meta.txt"), meta_text(spec, seed, resolved_cap));
            }
            break;
        }
        case Method::flat_q:
        case Method::hrl:
        case Method::interrupting:
        case Method::her: {
            BaselineConfig cfg;
            cfg.episodes = spec.train.episodes;
            cfg.alpha = spec.train.alpha;
            cfg.gamma = spec.train.gamma;
            cfg.epsilon = spec.train.epsilon;
            cfg.step_cap_override = spec.train.step_cap_override;
            cfg.seed = seed;
            cfg.eval_every = spec.train.eval_every;
            cfg.eval_episodes = spec.train.eval_episodes;
            cfg.max_env_steps = spec.train.max_env_steps;
            cfg.option_timeout = spec.option_timeout;
            cfg.relabel_count = spec.relabel_count;
            BaselineHooks hooks;
            hooks.on_eval_row = [&](const RunLogRow& r) { sink.append(r); };
            if (spec.method == Method::flat_q) {
                FlatResult res = train_flat_q(env, cfg, &hooks);
                rows = res.log.rows;
                if (want_snapshot) {
                    save_table(res.q, KeySchema::flat, task.vocabulary, snap("qflat.tsv"));
                    write_text_file(snap("meta.txt"), meta_text(spec, seed, resolved_cap));
                }
            } else if (spec.method == Method::her) {
                GoalResult res = train_her(env, cfg, &hooks);
                rows = res.log.rows;
                if (want_snapshot) {
                    save_table(res.q, KeySchema::low, task.vocabulary, snap("qgoal.tsv"));
                    write_text_file(snap("meta.txt"), meta_text(spec, seed, resolved_cap));
                }
            } else {
                OptionResult res = spec.method == Method::hrl ? train_hrl(env, cfg, &hooks)
                                                              : train_interrupting(env, cfg, &hooks);
                rows = res.log.rows;
                if (want_snapshot) {
                    save_table(res.q_opt, KeySchema::option, task.vocabulary, snap("qopt.tsv"));
                    save_table(res.q_low, KeySchema::low, task.vocabulary, snap("qlow.tsv"));
                    write_text_file(snap("meta.txt"), meta_text(spec, seed, resolved_cap));
                }
            }
            break;
        }
    }
    return rows;
}

int worker_pool_width(int n_jobs) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap <= 0) cap = 1;
    if (const char* env = std::getenv("ALCS_LAB_THREADS")) {
        try {
            cap = std::max(1, static_cast<int>(parse_int(trim(env))));
        } catch (const std::exception&) {
            throw std::invalid_argument("ALCS_LAB_THREADS must be an integer");
        }
    }
    return std::max(1, std::min(cap, n_jobs));
}

CurveBundle run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    if (spec.out_dir.empty()) throw std::invalid_argument("experiment: output directory not set");
    fs::create_directories(spec.out_dir);
    fs::create_directories(spec.out_dir + "/runs");
    write_text_file(spec.out_dir + "/experiment.txt", experiment_spec_to_text(spec));

    CurveBundle bundle;
    bundle.runs.resize(static_cast<std::size_t>(spec.n_runs));
    std::vector<std::string> errors(static_cast<std::size_t>(spec.n_runs));

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= spec.n_runs) return;
            std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(i);
            try {
                bundle.runs[static_cast<std::size_t>(i)] =
                    run_single(spec, seed, spec.out_dir + "/snap_seed" + std::to_string(seed),
                               spec.out_dir + "/runs/run_seed" + std::to_string(seed) + ".csv");
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(i)] = e.what();
            }
        }
    };
    const int width = worker_pool_width(spec.n_runs);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (int i = 0; i < spec.n_runs; ++i)
        if (!errors[static_cast<std::size_t>(i)].empty())
            throw RunFailure(spec.base_seed + static_cast<std::uint64_t>(i),
                             errors[static_cast<std::size_t>(i)]);

    bundle.aggregate = aggregate(bundle.runs, spec.trim);
    write_aggregate_csv(spec.out_dir + "/aggregate.csv", bundle.aggregate);
    return bundle;
}

namespace {

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string render_svg(const std::vector<std::pair<std::string, std::vector<AggRow>>>& series) {
    if (series.empty()) throw std::invalid_argument("plot: empty bundle");
    for (const auto& [name, rows] : series)
        if (rows.empty()) throw std::invalid_argument("plot: empty series '" + name + "'");

    const double x0 = 70, x1 = 860, y0 = 510, y1 = 30;  // plot box (y grows down)
    double max_steps = 1.0, max_value = 1.0;
    for (const auto& [name, rows] : series)
        for (const auto& r : rows) {
            max_steps = std::max(max_steps, static_cast<double>(r.env_steps));
            max_value = std::max(max_value, r.upper);
        }
    max_value *= 1.05;
    auto sx = [&](double steps) { return x0 + (steps / max_steps) * (x1 - x0); };
    auto sy = [&](double v) { return y0 - (v / max_value) * (y0 - y1); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"880\" height=\"560\" "
           "viewBox=\"0 0 880 560\">\n";
    out << "<rect width=\"880\" height=\"560\" fill=\"white\"/>\n";
    out << "<line x1=\"" << fixed2(x0) << "\" y1=\"" << fixed2(y0) << "\" x2=\"" << fixed2(x1)
        << "\" y2=\"" << fixed2(y0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << fixed2(x0) << "\" y1=\"" << fixed2(y0) << "\" x2=\"" << fixed2(x0)
        << "\" y2=\"" << fixed2(y1) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double steps = max_steps * i / 4.0;
        double value = max_value * i / 4.0;
        out << "<text x=\"" << fixed2(sx(steps)) << "\" y=\"" << fixed2(y0 + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\">" << static_cast<std::uint64_t>(steps)
            << "</text>\n";
        out << "<text x=\"" << fixed2(x0 - 8) << "\" y=\"" << fixed2(sy(value) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << fixed2(value) << "</text>\n";
    }
    out << "<text x=\"" << fixed2((x0 + x1) / 2) << "\" y=\"548\" font-size=\"12\" "
           "text-anchor=\"middle\">env steps</text>\n";
    out << "<text x=\"16\" y=\"" << fixed2((y0 + y1) / 2)
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << fixed2((y0 + y1) / 2) << ")\">eval return</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& rows = series[s].second;
        const char* color = kPalette[s % 8];
        out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
        for (const auto& r : rows)
            out << fixed2(sx(static_cast<double>(r.env_steps))) << ',' << fixed2(sy(r.upper)) << ' ';
        for (auto it = rows.rbegin(); it != rows.rend(); ++it)
            out << fixed2(sx(static_cast<double>(it->env_steps))) << ',' << fixed2(sy(it->lower)) << ' ';
        out << "\"/>\n";
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& r : rows)
            out << fixed2(sx(static_cast<double>(r.env_steps))) << ',' << fixed2(sy(r.mean)) << ' ';
        out << "\"/>\n";
        double ly = y1 + 16 + 16 * static_cast<double>(s);
        out << "<rect x=\"" << fixed2(x0 + 10) << "\" y=\"" << fixed2(ly - 9)
            << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << fixed2(x0 + 27) << "\" y=\"" << fixed2(ly + 1)
            << "\" font-size=\"12\">" << series[s].first << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void write_svg(const std::vector<std::pair<std::string, std::vector<AggRow>>>& series,
               const std::string& path) {
    write_text_file(path, render_svg(series));
}

std::string explain_snapshot(const std::string& snapshot_dir, const TaskSpec& task, GridPos state,
                             const SubtaskSeq& seq) {
    if (!task.layout.in_bounds(state) || task.layout.is_wall(state))
        throw std::invalid_argument("explain: state " + pos_to_string(state) + " is not a floor cell");
    QTable q_high = load_table(KeySchema::high, task.vocabulary, snapshot_dir + "/qhigh.tsv");
    RecordTree tree = load_tree(task.vocabulary, snapshot_dir + "/tree.txt");
    std::vector<std::uint8_t> ids(task.vocabulary.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::uint8_t>(i);
    auto rng = make_stream(kExplainSeed, RngStream::eval);
    Explanation ex = explain(tree, q_high, state, seq, ids, task.step_cap, rng);

    auto join = [&](const SubtaskSeq& s) {
        std::string out;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i) out += ", ";
            out += task.vocabulary[s[i]];
        }
        return out;
    };
    std::ostringstream out;
    out << "history: " << (ex.history.empty() ? "()" : join(ex.history)) << '\n';
    out << "current: " << task.vocabulary[ex.current] << '\n';
    out << "plan: " << (ex.plan ? (ex.plan->empty() ? "(goal at hand)" : join(*ex.plan)) : "none")
        << '\n';
    return out.str();
}

}  // namespace alcs
