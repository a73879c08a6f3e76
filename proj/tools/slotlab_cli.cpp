/*
 Copyright 2026 slotlab developers
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// Command-line front end. All functionality goes through the C API in
// slotlab.h; this file only parses flags, assembles request JSON and prints
// results.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <slotlab.h>

using nlohmann::json;

namespace {

struct CString {
  char* ptr = nullptr;
  ~CString() { slotlab_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

[[noreturn]] void fail(slotlab_status rc) {
  std::cerr << "error (" << static_cast<int>(rc) << "): " << slotlab_last_error()
            << '\n';
  std::exit(1);
}

void check(slotlab_status rc) {
  if (rc != SLOTLAB_OK) fail(rc);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) {
    std::cerr << "error: cannot open " << path << '\n';
    std::exit(1);
  }
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    std::cerr << "error: bad JSON in " << path << ": " << e.what() << '\n';
    std::exit(1);
  }
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

json counts_from_arg(const std::string& text, const std::string& what) {
  const auto parts = split_csv(text);
  if (parts.size() != 3) {
    std::cerr << "error: " << what
              << " must be stopped,bankrupt,continued counts\n";
    std::exit(1);
  }
  return json{{"stopped", std::stol(parts[0])},
              {"bankrupt", std::stol(parts[1])},
              {"continued", std::stol(parts[2])}};
}

void print_or_write(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  out << text << '\n';
  if (!out.good()) {
    std::cerr << "error: cannot write " << out_path << '\n';
    std::exit(1);
  }
}

std::string pretty(const std::string& compact) {
  try {
    return json::parse(compact).dump(2);
  } catch (const json::exception&) {
    return compact;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slot-machine gambling harness for LLM and synthetic agents"};
  app.require_subcommand(1);

  // ---- run -----------------------------------------------------------------
  auto* run = app.add_subcommand("run", "run a factorial experiment");
  std::string run_agent, run_config, run_conditions = "all", run_style = "both";
  std::string run_out;
  int run_reps = 50, run_parallel = 1;
  std::uint64_t run_seed = 0;
  long run_stop_after = 0;
  run->add_option("--agent", run_agent, "agent spec JSON file");
  run->add_option("--config", run_config,
                  "plan JSON file; flags override its fields");
  run->add_option("--conditions", run_conditions,
                  "all | comma-separated codes (G, MW, GPW-fixed, ...)");
  run->add_option("--style", run_style, "fixed | variable | both")
      ->check(CLI::IsMember({"fixed", "variable", "both"}));
  run->add_option("--reps", run_reps, "replications per condition");
  run->add_option("--seed", run_seed, "master seed");
  run->add_option("--out", run_out, "output directory");
  run->add_option("--parallel", run_parallel, "worker count");
  run->add_option("--stop-after", run_stop_after,
                  "execute at most N pending trials (for chunked runs)");

  // ---- aggregate -------------------------------------------------------------
  auto* agg = app.add_subcommand("aggregate", "aggregate an experiment directory");
  std::string agg_dir, agg_out;
  agg->add_option("dir", agg_dir, "experiment directory")->required();
  agg->add_option("--out", agg_out, "write JSON here instead of stdout");

  // ---- report ---------------------------------------------------------------
  auto* rep = app.add_subcommand("report", "write CSV reports");
  std::string rep_dir, rep_kind = "table2";
  rep->add_option("dir", rep_dir, "experiment directory")->required();
  rep->add_option("--kind", rep_kind,
                  "table2 | scatter | components | complexity | streaks");

  // ---- compose ---------------------------------------------------------------
  auto* comp = app.add_subcommand("compose", "print the prompt for a condition");
  std::string comp_condition = "BASE", comp_history, comp_templates;
  double comp_balance = 100.0;
  int comp_losses = 0;
  comp->add_option("--condition", comp_condition, "condition code, e.g. GPW");
  comp->add_option("--balance", comp_balance, "current balance");
  comp->add_option("--history", comp_history,
                   "JSON file with an array of round records");
  comp->add_option("--losses", comp_losses, "consecutive losses");
  comp->add_option("--templates", comp_templates, "template directory override");

  // ---- features ---------------------------------------------------------------
  auto* feat = app.add_subcommand("features", "activation-feature analyses");
  feat->require_subcommand(1);

  auto* fdiff = feat->add_subcommand("diff", "differential features");
  std::string fdiff_input, fdiff_out;
  double fdiff_alpha = 0.001, fdiff_dmin = 0.3;
  int fdiff_csv_layer = 0;
  fdiff->add_option("--input", fdiff_input, "activation file")->required();
  fdiff->add_option("--alpha", fdiff_alpha, "adjusted-p threshold");
  fdiff->add_option("--dmin", fdiff_dmin, "minimum |Cohen's d|");
  fdiff->add_option("--csv-layer", fdiff_csv_layer, "layer id for CSV inputs");
  fdiff->add_option("--out", fdiff_out, "write JSON here instead of stdout");

  auto* ftop = feat->add_subcommand("top", "top-k features by |d|");
  std::string ftop_input, ftop_out;
  int ftop_k = 7, ftop_csv_layer = 0;
  double ftop_alpha = 0.001, ftop_dmin = 0.3;
  ftop->add_option("--input", ftop_input, "activation file")->required();
  ftop->add_option("--k", ftop_k, "how many features");
  ftop->add_option("--alpha", ftop_alpha, "adjusted-p threshold");
  ftop->add_option("--dmin", ftop_dmin, "minimum |Cohen's d|");
  ftop->add_option("--csv-layer", ftop_csv_layer, "layer id for CSV inputs");
  ftop->add_option("--out", ftop_out, "write JSON here instead of stdout");

  auto* flayers = feat->add_subcommand("layers", "per-layer safe/risky counts");
  std::string flayers_input, flayers_out;
  bool flayers_passing = false;
  int flayers_csv_layer = 0;
  double flayers_alpha = 0.001, flayers_dmin = 0.3;
  flayers->add_option("--input", flayers_input, "activation file")->required();
  flayers->add_flag("--passing-only", flayers_passing,
                    "count only features passing the joint criterion");
  flayers->add_option("--alpha", flayers_alpha, "adjusted-p threshold");
  flayers->add_option("--dmin", flayers_dmin, "minimum |Cohen's d|");
  flayers->add_option("--csv-layer", flayers_csv_layer, "layer id for CSV inputs");
  flayers->add_option("--out", flayers_out, "write JSON here instead of stdout");

  auto* fpatch = feat->add_subcommand("patch-effect",
                                      "stopping/bankruptcy deltas of patching");
  std::string fpatch_baseline, fpatch_patched, fpatch_context = "safe";
  std::string fpatch_class = "safe_features", fpatch_out;
  fpatch->add_option("--baseline", fpatch_baseline,
                     "baseline counts: stopped,bankrupt,continued")
      ->required();
  fpatch->add_option("--patched", fpatch_patched,
                     "patched counts: stopped,bankrupt,continued")
      ->required();
  fpatch->add_option("--context", fpatch_context, "safe | risky");
  fpatch->add_option("--patch-class", fpatch_class,
                     "safe_features | risky_features");
  fpatch->add_option("--out", fpatch_out, "write JSON here instead of stdout");

  auto* fsynth = feat->add_subcommand("synth", "generate a synthetic dataset");
  std::string fsynth_spec, fsynth_out;
  std::uint64_t fsynth_seed = 0;
  fsynth->add_option("--spec", fsynth_spec, "synthesis spec JSON file")
      ->required();
  fsynth->add_option("--seed", fsynth_seed, "generator seed");
  fsynth->add_option("--out", fsynth_out, "output activation file")->required();

  auto* fmeans = feat->add_subcommand("mean-vectors",
                                      "export class-mean activation vectors");
  std::string fmeans_input, fmeans_out;
  int fmeans_csv_layer = 0;
  fmeans->add_option("--input", fmeans_input, "activation file")->required();
  fmeans->add_option("--csv-layer", fmeans_csv_layer, "layer id for CSV inputs");
  fmeans->add_option("--out", fmeans_out, "output activation file")->required();

  auto* ver = app.add_subcommand("version", "print the library version");

  CLI11_PARSE(app, argc, argv);

  if (ver->parsed()) {
    std::cout << slotlab_version() << '\n';
    return 0;
  }

  if (run->parsed()) {
    json plan = run_config.empty() ? json::object() : load_json_file(run_config);
    if (!run_agent.empty()) plan["agent"] = load_json_file(run_agent);
    if (!plan.contains("agent")) {
      std::cerr << "error: run needs --agent or an agent entry in --config\n";
      return 1;
    }
    if (run->count("--conditions") || !plan.contains("conditions")) {
      const auto entries = split_csv(run_conditions);
      plan["conditions"] = entries.size() == 1 && entries[0] == "all"
                               ? json("all")
                               : json(entries);
    }
    if (run->count("--style") || !plan.contains("style")) plan["style"] = run_style;
    if (run->count("--reps") || !plan.contains("replications")) {
      plan["replications"] = run_reps;
    }
    if (run->count("--seed") || !plan.contains("master_seed")) {
      plan["master_seed"] = run_seed;
    }
    if (run->count("--out")) plan["output_dir"] = run_out;
    if (!plan.contains("output_dir")) {
      std::cerr << "error: run needs --out or an output_dir entry in --config\n";
      return 1;
    }
    if (run->count("--parallel") || !plan.contains("parallel_limit")) {
      plan["parallel_limit"] = run_parallel;
    }
    if (run->count("--stop-after")) plan["stop_after"] = run_stop_after;

    CString summary;
    check(slotlab_run_experiment(plan.dump().c_str(), &summary.ptr));
    std::cout << pretty(summary.str()) << '\n';
    return 0;
  }

  if (agg->parsed()) {
    CString out;
    check(slotlab_aggregate(agg_dir.c_str(), &out.ptr));
    print_or_write(pretty(out.str()), agg_out);
    return 0;
  }

  if (rep->parsed()) {
    CString paths;
    check(slotlab_report(rep_dir.c_str(), rep_kind.c_str(), &paths.ptr));
    for (const auto& p : json::parse(paths.str())) {
      std::cout << p.get<std::string>() << '\n';
    }
    return 0;
  }

  if (comp->parsed()) {
    json request{{"condition", comp_condition},
                 {"balance", comp_balance},
                 {"consecutive_losses", comp_losses}};
    if (!comp_history.empty()) request["history"] = load_json_file(comp_history);
    if (!comp_templates.empty()) request["template_dir"] = comp_templates;
    CString prompt;
    check(slotlab_compose(request.dump().c_str(), &prompt.ptr));
    std::cout << prompt.str() << '\n';
    return 0;
  }

  auto open_dataset = [](const std::string& path, int csv_layer) {
    slotlab_dataset* ds = nullptr;
    check(slotlab_dataset_open(path.c_str(), csv_layer, &ds));
    return ds;
  };

  if (fdiff->parsed()) {
    slotlab_dataset* ds = open_dataset(fdiff_input, fdiff_csv_layer);
    CString out;
    const auto rc = slotlab_features_diff(ds, fdiff_alpha, fdiff_dmin, &out.ptr);
    slotlab_dataset_free(ds);
    check(rc);
    print_or_write(pretty(out.str()), fdiff_out);
    return 0;
  }

  if (ftop->parsed()) {
    slotlab_dataset* ds = open_dataset(ftop_input, ftop_csv_layer);
    CString out;
    const auto rc =
        slotlab_features_top(ds, ftop_k, ftop_alpha, ftop_dmin, &out.ptr);
    slotlab_dataset_free(ds);
    check(rc);
    print_or_write(pretty(out.str()), ftop_out);
    return 0;
  }

  if (flayers->parsed()) {
    slotlab_dataset* ds = open_dataset(flayers_input, flayers_csv_layer);
    CString out;
    const auto rc = slotlab_features_layers(ds, flayers_passing ? 1 : 0,
                                            flayers_alpha, flayers_dmin,
                                            &out.ptr);
    slotlab_dataset_free(ds);
    check(rc);
    print_or_write(pretty(out.str()), flayers_out);
    return 0;
  }

  if (fpatch->parsed()) {
    const json request{
        {"baseline", counts_from_arg(fpatch_baseline, "--baseline")},
        {"patched", counts_from_arg(fpatch_patched, "--patched")},
        {"context", fpatch_context},
        {"patch_class", fpatch_class}};
    CString out;
    check(slotlab_patch_effect(request.dump().c_str(), &out.ptr));
    print_or_write(pretty(out.str()), fpatch_out);
    return 0;
  }

  if (fsynth->parsed()) {
    const json spec = load_json_file(fsynth_spec);
    check(slotlab_synth_activations(spec.dump().c_str(), fsynth_seed,
                                    fsynth_out.c_str()));
    std::cout << fsynth_out << '\n';
    return 0;
  }

  if (fmeans->parsed()) {
    slotlab_dataset* ds = open_dataset(fmeans_input, fmeans_csv_layer);
    const auto rc = slotlab_features_mean_vectors(ds, fmeans_out.c_str());
    slotlab_dataset_free(ds);
    check(rc);
    std::cout << fmeans_out << '\n';
    return 0;
  }

  return 0;
}
