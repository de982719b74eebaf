#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "onestreet/dataset.hpp"
#include "onestreet/equilibrium.hpp"
#include "onestreet/eval.hpp"
#include "onestreet/knn.hpp"
#include "onestreet/rules.hpp"
#include "onestreet/svg.hpp"
#include "onestreet/tree.hpp"

namespace onestreet::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 1 usage, 2 data error, 3 convergence failure.
enum ExitCode { kOk = 0, kUsage = 1, kDataError = 2, kConvergence = 3 };

namespace detail {

inline nlohmann::json config_json(const GameConfig& c) {
  return {{"deck_size", c.deck_size},
          {"bet_steps", c.bet_steps},
          {"bet_increment", c.bet_increment},
          {"ante", c.ante},
          {"stack", c.stack}};
}

// Every file-producing command drops a sibling manifest so outputs can be
// traced back to the exact invocation that made them.
inline void write_run_manifest(const std::string& out_path, const std::string& command,
                               const std::vector<std::string>& argv, const GameConfig& cfg,
                               const nlohmann::json& extra, double wall_seconds) {
  nlohmann::json m{{"tool", "onestreet"},
                   {"version", kToolVersion},
                   {"command", command},
                   {"argv", argv},
                   {"config", config_json(cfg)},
                   {"wall_clock_seconds", wall_seconds},
                   {"created_unix", static_cast<long>(std::time(nullptr))}};
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  std::ofstream out(out_path + ".manifest.json");
  if (!out) throw Error("cannot write manifest: " + out_path + ".manifest.json");
  out << m.dump(2) << "\n";
}

inline std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  std::string token;
  for (const char c : text + " ") {
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!token.empty()) {
        try {
          values.push_back(std::stod(token));
        } catch (const std::exception&) {
          throw InvalidDistribution("not a number: '" + token + "'");
        }
        token.clear();
      }
    } else {
      token += c;
    }
  }
  return values;
}

// A deal spec is either the full joint matrix (deck^2 values, row-major) or
// two per-player pdfs (2 x deck values) combined off-diagonal.
inline JointDeal deal_from_values(const std::vector<double>& v, const GameConfig& cfg) {
  const std::size_t d = static_cast<std::size_t>(cfg.deck_size);
  if (v.size() == d * d) {
    JointDeal deal(cfg.deck_size);
    deal.p = v;
    deal.validate();
    return deal;
  }
  if (v.size() == 2 * d) {
    return make_joint(std::vector<double>(v.begin(), v.begin() + static_cast<long>(d)),
                      std::vector<double>(v.begin() + static_cast<long>(d), v.end()));
  }
  throw InvalidDistribution("deal spec must contain " + std::to_string(d * d) + " joint values or " +
                            std::to_string(2 * d) + " marginal values, got " +
                            std::to_string(v.size()));
}

inline JointDeal load_deal_spec(const std::string& path, const GameConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open deal spec: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  for (std::string::size_type pos; (pos = text.find('#')) != std::string::npos;) {
    const auto end = text.find('\n', pos);
    text.erase(pos, end == std::string::npos ? std::string::npos : end - pos);
  }
  return deal_from_values(parse_number_list(text), cfg);
}

inline std::string strategy_listing(const StrategyP1& s1, const JointDeal& deal,
                                    const GameConfig& cfg) {
  std::ostringstream out;
  const auto marg = deal.p1_marginal();
  char buf[64];
  for (int h = 0; h < cfg.deck_size; ++h) {
    out << "Card " << h + 1 << ":";
    if (marg[static_cast<std::size_t>(h)] == 0.0) {
      out << " (unreachable)\n";
      continue;
    }
    bool first = true;
    for (int b = 0; b < cfg.bet_steps; ++b) {
      const double pr = s1.at(h, b);
      if (pr < 0.0005) continue;
      std::snprintf(buf, sizeof(buf), "%s Bet %.1f pr %.3f", first ? "" : ",", cfg.bet_amount(b),
                    pr);
      out << buf;
      first = false;
    }
    if (first) out << " (no action above 0.001)";
    out << "\n";
  }
  return out.str();
}

struct LoadedModel {
  bool is_tree = false;
  DecisionTree tree;
  KnnModel knn;
  RepresentationId rep() const { return is_tree ? tree.rep : knn.rep; }
};

inline LoadedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file: " + path);
  std::string first;
  std::getline(in, first);
  in.close();
  LoadedModel m;
  if (first.rfind("onestreet.tree", 0) == 0) {
    m.is_tree = true;
    m.tree = load_tree(path);
  } else {
    m.knn = load_knn(path);
  }
  return m;
}

inline std::vector<std::string> argv_vector(int argc, const char* const* argv) {
  std::vector<std::string> v;
  for (int i = 0; i < argc; ++i) v.emplace_back(argv[i]);
  return v;
}

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

}  // namespace detail

inline int run(int argc, const char* const* argv) {
  CLI::App app{"one-street poker: equilibrium solving, dataset building and strategy learning"};
  app.require_subcommand(1);
  const auto argv_copy = detail::argv_vector(argc, argv);

  std::string config_path;
  app.add_option("--config", config_path, "game config file (key=value)")->capture_default_str();

  // solve ------------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "solve one game and print the strategy");
  std::string deal_path, p1_inline, p2_inline, solve_out;
  double epsilon = 1e-4;
  long max_iterations = 100000;
  solve_cmd->add_option("--deal", deal_path, "deal spec file (joint matrix or two pdfs)");
  solve_cmd->add_option("--p1", p1_inline, "inline player 1 pdf (comma separated)");
  solve_cmd->add_option("--p2", p2_inline, "inline player 2 pdf (comma separated)");
  solve_cmd->add_option("--epsilon", epsilon, "target exploitability")->capture_default_str();
  solve_cmd->add_option("--max-iterations", max_iterations, "iteration budget")
      ->capture_default_str();
  solve_cmd->add_option("--out", solve_out, "also write the listing to this file");

  // gen --------------------------------------------------------------------
  auto* gen_cmd = app.add_subcommand("gen", "generate a database of solved games");
  long count = 2000;
  std::uint64_t master_seed = 1;
  std::string gen_out = "dataset.jsonl";
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  gen_cmd->add_option("--count", count, "number of games")->capture_default_str();
  gen_cmd->add_option("--seed", master_seed, "master seed")->capture_default_str();
  gen_cmd->add_option("--epsilon", epsilon, "solver target exploitability")->capture_default_str();
  gen_cmd->add_option("--max-iterations", max_iterations, "solver iteration budget")
      ->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "output dataset file")->capture_default_str();
  gen_cmd->add_option("--jobs", jobs, "worker threads")->capture_default_str();

  // train ------------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "fit a model on the training side of a dataset");
  std::string in_path, model_kind = "tree", rep_name = "r1", model_out = "model.txt";
  int depth = 8, k = 1, min_leaf = 5;
  double train_frac = 0.8;
  std::uint64_t split_seed = 1;
  train_cmd->add_option("--in", in_path, "dataset file")->required();
  train_cmd->add_option("--rep", rep_name, "representation r1..r10")->capture_default_str();
  train_cmd->add_option("--model", model_kind, "model kind: tree or knn")->capture_default_str();
  train_cmd->add_option("--depth", depth, "tree depth limit")->capture_default_str();
  train_cmd->add_option("--k", k, "neighbor count for knn")->capture_default_str();
  train_cmd->add_option("--min-leaf", min_leaf, "minimum samples per leaf")->capture_default_str();
  train_cmd->add_option("--train-frac", train_frac, "training fraction of the game-level split")
      ->capture_default_str();
  train_cmd->add_option("--split-seed", split_seed, "split shuffle seed")->capture_default_str();
  train_cmd->add_option("--out", model_out, "model output file")->capture_default_str();

  // eval -------------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on a dataset split");
  std::string model_path, eval_out = "eval.csv";
  eval_cmd->add_option("--model", model_path, "model file")->required();
  eval_cmd->add_option("--in", in_path, "dataset file")->required();
  eval_cmd->add_option("--train-frac", train_frac, "training fraction")->capture_default_str();
  eval_cmd->add_option("--split-seed", split_seed, "split shuffle seed")->capture_default_str();
  eval_cmd->add_option("--out", eval_out, "report CSV")->capture_default_str();

  // sweep ------------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "depth sweep per representation");
  std::vector<std::string> rep_names;
  int min_depth = 3, max_depth = 20;
  std::string sweep_out = "sweep";
  sweep_cmd->add_option("--in", in_path, "dataset file")->required();
  sweep_cmd->add_option("--rep", rep_names, "representations (default all)");
  sweep_cmd->add_option("--min-depth", min_depth, "first depth")->capture_default_str();
  sweep_cmd->add_option("--max-depth", max_depth, "last depth")->capture_default_str();
  sweep_cmd->add_option("--min-leaf", min_leaf, "minimum samples per leaf")->capture_default_str();
  sweep_cmd->add_option("--train-frac", train_frac, "training fraction")->capture_default_str();
  sweep_cmd->add_option("--split-seed", split_seed, "split shuffle seed")->capture_default_str();
  sweep_cmd->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "output prefix (csv + svg)")->capture_default_str();

  // rules ------------------------------------------------------------------
  auto* rules_cmd = app.add_subcommand("rules", "render a tree model as strategy rules");
  std::string rules_out;
  rules_cmd->add_option("--model", model_path, "tree model file")->required();
  rules_cmd->add_option("--out", rules_out, "write rules here instead of stdout");

  // check ------------------------------------------------------------------
  auto* check_cmd = app.add_subcommand("check", "measure fundamental-rule compliance");
  std::string probes_path, check_out;
  bool use_equilibrium = false;
  check_cmd->add_option("--probes", probes_path, "dataset of probe games")->required();
  check_cmd->add_option("--model", model_path, "model file to probe");
  check_cmd->add_flag("--use-equilibrium", use_equilibrium,
                      "probe the stored equilibrium strategies");
  check_cmd->add_option("--out", check_out, "also write the report as JSON");

  // export -----------------------------------------------------------------
  auto* export_cmd = app.add_subcommand("export", "export labeled examples as CSV");
  std::string export_out = "examples.csv";
  export_cmd->add_option("--in", in_path, "dataset file")->required();
  export_cmd->add_option("--rep", rep_name, "representation r1..r10")->capture_default_str();
  export_cmd->add_option("--out", export_out, "CSV output")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  detail::Stopwatch clock;
  try {
    GameConfig cfg;
    if (!config_path.empty()) cfg = load_game_config(config_path);
    cfg.validate();

    if (solve_cmd->parsed()) {
      JointDeal deal;
      if (!deal_path.empty()) {
        deal = detail::load_deal_spec(deal_path, cfg);
      } else if (!p1_inline.empty() && !p2_inline.empty()) {
        auto x1 = detail::parse_number_list(p1_inline);
        auto x2 = detail::parse_number_list(p2_inline);
        auto joined = x1;
        joined.insert(joined.end(), x2.begin(), x2.end());
        deal = detail::deal_from_values(joined, cfg);
      } else {
        std::cerr << "solve needs --deal or both --p1 and --p2\n";
        return kUsage;
      }
      const auto r = solve(deal, cfg, epsilon, max_iterations);
      std::ostringstream out;
      out << detail::strategy_listing(r.s1, deal, cfg);
      char buf[96];
      std::snprintf(buf, sizeof(buf), "Value: %.6f\nNashConv: %.3g (<= %.3g in %ld iterations)\n",
                    r.value, r.nash_conv, epsilon, r.iterations);
      out << buf;
      std::cout << out.str();
      if (!solve_out.empty()) {
        std::ofstream f(solve_out);
        if (!f) throw Error("cannot write " + solve_out);
        f << out.str();
        detail::write_run_manifest(solve_out, "solve", argv_copy, cfg,
                                   {{"epsilon", epsilon}, {"outputs", {solve_out}}},
                                   clock.seconds());
      }
      return kOk;
    }

    if (gen_cmd->parsed()) {
      const auto ds = build_dataset(count, master_seed, epsilon, cfg, std::max(1, jobs),
                                    max_iterations);
      save_dataset(ds, gen_out);
      detail::write_run_manifest(gen_out, "gen", argv_copy, cfg,
                                 {{"count", count},
                                  {"master_seed", master_seed},
                                  {"epsilon", epsilon},
                                  {"discarded_degenerate", ds.manifest.discarded_degenerate},
                                  {"outputs", {gen_out}}},
                                 clock.seconds());
      std::cout << "wrote " << ds.records.size() << " solved games to " << gen_out << " ("
                << ds.manifest.discarded_degenerate << " degenerate deals discarded)\n";
      return kOk;
    }

    if (train_cmd->parsed()) {
      const auto rep = parse_representation(rep_name);
      const auto ds = load_dataset(in_path);
      const auto s = split(ds, train_frac, split_seed);
      const auto train = filter_examples(extract_all(ds, rep), s, true);
      if (model_kind == "tree") {
        const auto t = tree_fit(train, rep, depth, min_leaf, ds.manifest.config);
        save_tree(t, model_out);
        std::cout << "fitted tree: " << t.node_count() << " nodes, depth " << t.depth() << ", "
                  << train.size() << " training examples\n";
      } else if (model_kind == "knn") {
        const auto m = knn_fit(train, rep, k, ds.manifest.config);
        save_knn(m, model_out);
        std::cout << "stored " << m.examples.size() << " examples for k=" << k << " lookup\n";
      } else {
        std::cerr << "unknown model kind '" << model_kind << "' (expected tree or knn)\n";
        return kUsage;
      }
      detail::write_run_manifest(model_out, "train", argv_copy, ds.manifest.config,
                                 {{"inputs", {in_path}},
                                  {"outputs", {model_out}},
                                  {"rep", to_string(rep)},
                                  {"train_frac", train_frac},
                                  {"split_seed", split_seed},
                                  {"dataset_master_seed", ds.manifest.master_seed}},
                                 clock.seconds());
      return kOk;
    }

    if (eval_cmd->parsed()) {
      const auto ds = load_dataset(in_path);
      const auto model = detail::load_model(model_path);
      const auto s = split(ds, train_frac, split_seed);
      const auto all = extract_all(ds, model.rep());
      const auto train = filter_examples(all, s, true);
      const auto test = filter_examples(all, s, false);
      EvalRow row;
      row.rep = model.rep();
      if (model.is_tree) {
        row.model_kind = "tree";
        row.depth_or_k = model.tree.depth();
        row.node_count = model.tree.node_count();
        row.train_error = evaluate(model.tree, train, ds.manifest.config);
        row.test_error = evaluate(model.tree, test, ds.manifest.config);
      } else {
        row.model_kind = "knn";
        row.depth_or_k = model.knn.k;
        row.node_count = static_cast<long>(model.knn.examples.size());
        row.train_error = evaluate(model.knn, train, ds.manifest.config);
        row.test_error = evaluate(model.knn, test, ds.manifest.config);
      }
      EvalReport report;
      report.rows.push_back(row);
      write_eval_csv(report, eval_out);
      std::printf("%s %s rep=%s: train_error=%.6f test_error=%.6f\n", row.model_kind.c_str(),
                  model_path.c_str(), to_string(row.rep).c_str(), row.train_error, row.test_error);
      detail::write_run_manifest(eval_out, "eval", argv_copy, ds.manifest.config,
                                 {{"inputs", {in_path, model_path}},
                                  {"outputs", {eval_out}},
                                  {"train_frac", train_frac},
                                  {"split_seed", split_seed}},
                                 clock.seconds());
      return kOk;
    }

    if (sweep_cmd->parsed()) {
      const auto ds = load_dataset(in_path);
      std::vector<RepresentationId> reps;
      if (rep_names.empty()) {
        for (int r = 1; r <= 10; ++r) reps.push_back(static_cast<RepresentationId>(r));
      } else {
        for (const auto& n : rep_names) reps.push_back(parse_representation(n));
      }
      const auto s = split(ds, train_frac, split_seed);
      for (const auto rep : reps) std::cout << describe(rep) << "\n";

      std::vector<EvalReport> reports(reps.size());
      std::atomic<std::size_t> cursor{0};
      std::atomic<bool> failed{false};
      std::string failure;
      std::mutex failure_mutex;
      auto worker = [&]() {
        for (;;) {
          const std::size_t i = cursor.fetch_add(1);
          if (i >= reps.size() || failed.load()) return;
          try {
            const auto all = extract_all(ds, reps[i]);
            reports[i] = depth_sweep(filter_examples(all, s, true), filter_examples(all, s, false),
                                     reps[i], min_depth, max_depth, min_leaf, ds.manifest.config);
          } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            failed.store(true);
            failure = std::string("sweep of ") + to_string(reps[i]) + " failed: " + e.what();
          }
        }
      };
      const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(reps.size())));
      if (workers <= 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
      }
      if (failed.load()) throw Error(failure);

      EvalReport merged;
      for (const auto& r : reports)
        merged.rows.insert(merged.rows.end(), r.rows.begin(), r.rows.end());
      const std::string csv_path = sweep_out + ".csv";
      write_eval_csv(merged, csv_path);

      std::vector<ChartSeries> by_depth, by_nodes;
      for (std::size_t i = 0; i < reps.size(); ++i) {
        ChartSeries train_series{to_string(reps[i]) + " train", {}};
        ChartSeries test_series{to_string(reps[i]) + " test", {}};
        ChartSeries nodes_series{to_string(reps[i]) + " test", {}};
        for (const auto& row : reports[i].rows) {
          train_series.points.push_back({static_cast<double>(row.depth_or_k), row.train_error});
          test_series.points.push_back({static_cast<double>(row.depth_or_k), row.test_error});
          nodes_series.points.push_back(
              {std::log10(static_cast<double>(row.node_count)), row.test_error});
        }
        by_depth.push_back(std::move(train_series));
        by_depth.push_back(std::move(test_series));
        by_nodes.push_back(std::move(nodes_series));
      }
      write_svg_chart(sweep_out + "_depth_error.svg", "Depth vs. error", "tree depth",
                      "mean distance error", by_depth);
      write_svg_chart(sweep_out + "_nodes_error.svg", "Nodes vs. error", "log10(node count)",
                      "mean distance error", by_nodes);
      for (const auto& row : merged.rows)
        std::printf("%s depth=%d nodes=%ld train=%.6f test=%.6f\n", to_string(row.rep).c_str(),
                    row.depth_or_k, row.node_count, row.train_error, row.test_error);
      detail::write_run_manifest(
          csv_path, "sweep", argv_copy, ds.manifest.config,
          {{"inputs", {in_path}},
           {"outputs", {csv_path, sweep_out + "_depth_error.svg", sweep_out + "_nodes_error.svg"}},
           {"train_frac", train_frac},
           {"split_seed", split_seed}},
          clock.seconds());
      return kOk;
    }

    if (rules_cmd->parsed()) {
      const auto model = detail::load_model(model_path);
      if (!model.is_tree) throw Error("rules extraction needs a tree model");
      const auto rules = extract_rules(model.tree);
      GameConfig tree_cfg = cfg;
      tree_cfg.deck_size = model.tree.deck_size;
      tree_cfg.bet_steps = model.tree.bet_steps;
      tree_cfg.bet_increment = tree_cfg.stack / (model.tree.bet_steps - 1);
      const auto text = render_rules(rules, model.tree.rep, tree_cfg);
      if (rules_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(rules_out);
        if (!f) throw Error("cannot write " + rules_out);
        f << text;
        detail::write_run_manifest(rules_out, "rules", argv_copy, tree_cfg,
                                   {{"inputs", {model_path}}, {"outputs", {rules_out}}},
                                   clock.seconds());
      }
      return kOk;
    }

    if (check_cmd->parsed()) {
      const auto ds = load_dataset(probes_path);
      const GameConfig& pc = ds.manifest.config;
      BetPredictor bettor;
      std::string model_desc;
      detail::LoadedModel model;
      if (use_equilibrium) {
        bettor = equilibrium_bettor(pc);
        model_desc = "stored equilibrium strategies";
      } else if (!model_path.empty()) {
        model = detail::load_model(model_path);
        bettor = model.is_tree ? tree_bettor(model.tree, pc) : knn_bettor(model.knn, pc);
        model_desc = model_path;
      } else {
        std::cerr << "check needs --model or --use-equilibrium\n";
        return kUsage;
      }
      const auto r8020 = check_80_20(bettor, ds.records, pc);
      const auto rallin = check_all_in(bettor, ds.records, pc);
      std::printf("probing %s over %zu games\n", model_desc.c_str(), ds.records.size());
      std::printf("80-20 rule: compliance %.4f over %ld probes\n", r8020.compliance, r8020.probes);
      std::printf("all-in rule (conditional opponent range): compliance %.4f over %ld probes\n",
                  rallin.conditional.compliance, rallin.conditional.probes);
      std::printf("all-in rule (unconditional opponent range): compliance %.4f over %ld probes\n",
                  rallin.unconditional.compliance, rallin.unconditional.probes);
      if (!check_out.empty()) {
        nlohmann::json j{
            {"model", model_desc},
            {"games", ds.records.size()},
            {"rule_80_20", {{"probes", r8020.probes}, {"compliance", r8020.compliance}}},
            {"all_in_conditional",
             {{"probes", rallin.conditional.probes}, {"compliance", rallin.conditional.compliance}}},
            {"all_in_unconditional",
             {{"probes", rallin.unconditional.probes},
              {"compliance", rallin.unconditional.compliance}}}};
        std::ofstream f(check_out);
        if (!f) throw Error("cannot write " + check_out);
        f << j.dump(2) << "\n";
        detail::write_run_manifest(check_out, "check", argv_copy, pc,
                                   {{"inputs", {probes_path}}, {"outputs", {check_out}}},
                                   clock.seconds());
      }
      return kOk;
    }

    if (export_cmd->parsed()) {
      const auto rep = parse_representation(rep_name);
      const auto ds = load_dataset(in_path);
      export_csv(ds, rep, export_out);
      std::cout << "wrote " << export_out << " (" << describe(rep) << ")\n";
      detail::write_run_manifest(export_out, "export", argv_copy, ds.manifest.config,
                                 {{"inputs", {in_path}}, {"outputs", {export_out}}},
                                 clock.seconds());
      return kOk;
    }
  } catch (const ConvergenceFailure& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return kConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace onestreet::cli
