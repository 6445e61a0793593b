/*
 * Copyright 2026 The axai Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "axai/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "axai/dataset.hpp"
#include "axai/forest.hpp"
#include "axai/http_server.hpp"
#include "axai/render.hpp"
#include "axai/service.hpp"
#include "axai/shapley.hpp"

namespace axai::cli {

namespace {

struct TrainArgs {
  std::string data;
  std::string out = kDefaultModelPath;
  std::string inference_out;
  std::size_t trees = 100;
  std::uint64_t seed = 42;
  double split = 0.8;
  std::size_t max_depth = 0;
  std::size_t min_samples_leaf = 1;
};

struct ExplainArgs {
  std::string model = kDefaultModelPath;
  std::string data = "UTD19.csv";
  std::size_t row = 0;
  std::string method;
  std::string format = "text";
};

struct PredictArgs {
  std::string model = kDefaultModelPath;
  std::string data = "UTD19.csv";
  std::size_t limit = 10;
};

struct ServeArgs {
  int port = 8080;
  std::string model = kDefaultModelPath;
  std::string data = "UTD19.csv";
  std::string host = "0.0.0.0";
  std::string static_dir = "webui/dist";
};

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const Dataset all = read_csv_file(a.data);
  auto [train_set, inference_set] = split(all, a.split, a.seed);
  const FeatureMatrix x = feature_matrix(train_set);
  const std::vector<double> y = flow_targets(train_set);

  ForestConfig config;
  config.n_trees = a.trees;
  config.bootstrap_seed = a.seed;
  config.min_samples_leaf = a.min_samples_leaf;
  if (a.max_depth > 0) config.max_depth = a.max_depth;
  Forest forest = train(x, y, config);
  forest.set_reference_sample(select_background(x, ShapConfig{100, a.seed}));
  save_file(forest, a.out);

  const std::string inference_path =
      a.inference_out.empty() ? a.out + ".inference.csv" : a.inference_out;
  {
    std::ofstream sink(inference_path, std::ios::binary | std::ios::trunc);
    if (!sink) throw std::runtime_error("cannot write '" + inference_path + "'");
    write_csv(sink, inference_set);
  }

  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = forest.predict(x[i]) - y[i];
    sse += d * d;
  }
  char line[160];
  std::snprintf(line, sizeof(line), "train_rows=%zu inference_rows=%zu train_mse=%.6g\n",
                train_set.size(), inference_set.size(), sse / static_cast<double>(x.size()));
  {
    std::ofstream metrics(a.out + ".metrics", std::ios::trunc);
    metrics << line;
  }
  out << line;
  return kExitOk;
}

int cmd_explain(const ExplainArgs& a, std::ostream& out, std::ostream& err) {
  const std::optional<ExplanationMethod> method = parse_method(a.method);
  if (!method) {
    err << "error: unknown method '" << a.method << "'. Valid methods:";
    for (ExplanationMethod m : kAllMethods) err << ' ' << to_string(m);
    err << '\n';
    return kExitUsage;
  }
  const Forest forest = load_file(a.model);
  const Dataset data = read_csv_file(a.data);
  if (a.row >= data.size()) {
    err << "error: row " << a.row << " out of range; " << a.data << " has "
        << data.size() << " rows (0.." << data.size() - 1 << ")\n";
    return kExitRuntime;
  }
  const AccessibleExplanation rendered =
      explain_instance(forest, features_of(data.records[a.row]), *method);
  if (a.format == "json") {
    out << to_json(rendered) << '\n';
  } else {
    out << to_plain_text(rendered);
  }
  return kExitOk;
}

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  const Forest forest = load_file(a.model);
  const Dataset data = read_csv_file(a.data);
  const std::vector<PredictionRow> rows = prediction_table(forest, data);
  for (std::size_t i = 0; i < std::min(a.limit, rows.size()); ++i) {
    const PredictionRow& r = rows[i];
    out << r.row_id << ": flow=" << fixed(r.pred_flow, 1) << " city=" << r.city
        << " detector=" << r.detector << " speed=" << fixed(r.speed, 1)
        << " occ=" << fixed(r.occupancy, 3) << '\n';
  }
  return kExitOk;
}

int cmd_serve(const ServeArgs& a, std::ostream& err) {
  ExplainService service;
  service.load_files(a.model, a.data);
  if (!service.health().ready) {
    err << "warning: service not ready: " << service.last_error() << '\n';
  }
  HttpServer server(service, HttpOptions{a.host, a.static_dir});

  // Handle SIGINT/SIGTERM on a dedicated thread; worker threads inherit the
  // blocked mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  if (!server.bind(a.port)) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    err << "error: cannot bind " << a.host << ":" << a.port << '\n';
    return kExitRuntime;
  }
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  err << "listening on http://" << a.host << ":" << a.port << '\n';
  err.flush();
  server.listen();
  pthread_kill(watcher.native_handle(), SIGTERM);  // no-op if it already fired
  watcher.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  err << "shut down\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Accessible explanations for traffic-flow predictions", "axai"};
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "Train and save a random forest");
  train_cmd->add_option("--data", train_args.data, "UTD19-schema CSV")->required();
  train_cmd->add_option("--out", train_args.out, "Model artifact path")->capture_default_str();
  train_cmd->add_option("--inference-out", train_args.inference_out,
                        "Where to write the inference split (default <out>.inference.csv)");
  train_cmd->add_option("--trees", train_args.trees, "Number of trees")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", train_args.seed, "Split and bootstrap seed")
      ->capture_default_str();
  train_cmd->add_option("--split", train_args.split, "Training fraction in (0,1)")
      ->capture_default_str();
  train_cmd->add_option("--max-depth", train_args.max_depth, "0 means unlimited")
      ->capture_default_str();
  train_cmd->add_option("--min-samples-leaf", train_args.min_samples_leaf)
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  ExplainArgs explain_args;
  CLI::App* explain_cmd = app.add_subcommand("explain", "Explain one prediction");
  explain_cmd->add_option("--model", explain_args.model)->capture_default_str();
  explain_cmd->add_option("--data", explain_args.data)->capture_default_str();
  explain_cmd->add_option("--row", explain_args.row, "Row index in --data")->required();
  explain_cmd->add_option("--method", explain_args.method,
                          "lime-simplified | lime-detailed | shap-simplified | shap-detailed")
      ->required();
  explain_cmd->add_option("--format", explain_args.format)
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "json"}));

  PredictArgs predict_args;
  CLI::App* predict_cmd = app.add_subcommand("predict", "Print the prediction table");
  predict_cmd->add_option("--model", predict_args.model)->capture_default_str();
  predict_cmd->add_option("--data", predict_args.data)->capture_default_str();
  predict_cmd->add_option("--limit", predict_args.limit)->capture_default_str();

  ServeArgs serve_args;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--port", serve_args.port)->envname("PORT")->capture_default_str();
  serve_cmd->add_option("--model", serve_args.model)->envname("MODEL_PATH")->capture_default_str();
  serve_cmd->add_option("--data", serve_args.data)->envname("DATA_PATH")->capture_default_str();
  serve_cmd->add_option("--host", serve_args.host)->capture_default_str();
  serve_cmd->add_option("--static-dir", serve_args.static_dir, "UI bundle served at /")
      ->envname("UI_DIR")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto used = app.get_subcommands();
    out << (used.empty() ? app.help() : used.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << "run 'axai --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (*train_cmd) return cmd_train(train_args, out);
    if (*explain_cmd) return cmd_explain(explain_args, out, err);
    if (*predict_cmd) return cmd_predict(predict_args, out);
    if (*serve_cmd) return cmd_serve(serve_args, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace axai::cli
