// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flowsite/app/commands.hpp"

using namespace flowsite;

int main(int argc, char** argv) {
  CLI::App cli{"flowsite: ligand pose generation and binding-site design"};
  cli.require_subcommand(1);

  std::string config_path, out;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  cli.add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);
  auto* seed_opt = cli.add_option("--seed", seed, "base random seed");
  auto* out_opt = cli.add_option("--out", out, "output directory");
  cli.add_option("--set", overrides, "override a config field, key=value (repeatable)");

  auto* train = cli.add_subcommand("train", "train a model");

  auto* sample = cli.add_subcommand("sample", "generate poses (and designs) from a checkpoint");
  std::string sample_id, checkpoint;
  std::size_t count = 10;
  sample->add_option("--id", sample_id, "complex id; every manifest entry when omitted");
  sample->add_option("--count", count, "samples per complex");
  sample->add_option("--checkpoint", checkpoint, "checkpoint file");

  auto* eval = cli.add_subcommand("eval", "score predictions against the manifest");
  std::string predictions;
  eval->add_option("--predictions", predictions, "directory of <id>/<id>_sample<k>.pdb files")->required();

  auto* prior = cli.add_subcommand("prior", "draw harmonic prior samples");
  std::string prior_id;
  std::size_t prior_count = 100;
  prior->add_option("--id", prior_id, "complex id")->required();
  prior->add_option("--count", prior_count, "number of draws");

  auto* trace = cli.add_subcommand("trace", "per-step RMSD and entropy along one trajectory");
  std::string trace_id;
  trace->add_option("--id", trace_id, "complex id")->required();
  trace->add_option("--checkpoint", checkpoint, "checkpoint file");

  CLI11_PARSE(cli, argc, argv);

  try {
    app::RunConfig config;
    if (!config_path.empty()) app::apply_config_file(config, config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw app::ConfigError("--set expects key=value, got '" + kv + "'");
      app::set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (*seed_opt) config.seed = seed;
    if (*out_opt) config.out = out;
    if (!checkpoint.empty()) config.checkpoint = checkpoint;

    if (*train) return app::cmd_train(config, std::cout);
    if (*sample) return app::cmd_sample(config, sample_id, count, std::cout);
    if (*eval) return app::cmd_eval(config, predictions, std::cout);
    if (*prior) return app::cmd_prior(config, prior_id, prior_count, std::cout);
    if (*trace) return app::cmd_trace(config, trace_id, std::cout);
  } catch (const std::exception& ex) {
    std::cerr << "flowsite: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}
