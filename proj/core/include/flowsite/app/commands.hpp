// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "flowsite/app/config.hpp"
#include "flowsite/net/model.hpp"

namespace flowsite::app {

/// Complexes that loaded, in manifest order, and how many were skipped.
struct Dataset {
  std::vector<mol::RawComplex> complexes;
  std::size_t skipped = 0;
};

/// Unreadable entries are skipped with a warning on `log`; more than half
/// skipped aborts.
Dataset load_dataset(const std::string& manifest, std::ostream& log);

/// Model weights from `config.checkpoint`, else `<out>/checkpoint_best.bin`,
/// else `<out>/checkpoint_last.bin`. Architecture fields come from the
/// checkpoint, everything else from `config`.
struct LoadedModel {
  RunConfig config;
  std::unique_ptr<net::FlowSiteModel> model;
  std::string path;
};
LoadedModel load_model(const RunConfig& config);

/// Trains for `config.epochs` epochs (resuming from `config.checkpoint` when
/// set) and writes `loss_log.tsv`, `checkpoint_last.bin` and, with
/// validation, `checkpoint_best.bin` under `config.out`.
int cmd_train(const RunConfig& config, std::ostream& log);

/// `count` poses per complex under `<out>/samples/<id>/`, plus designed
/// sequences in flowsite mode. Empty `id` samples every manifest entry.
int cmd_sample(const RunConfig& config, const std::string& id, std::size_t count, std::ostream& log);

/// Scores `<predictions>/<id>/*_sample*.pdb` (and `.seq`) against the
/// manifest; writes `<out>/metrics.tsv`. Returns 1 when a complex has no
/// predictions.
int cmd_eval(const RunConfig& config, const std::string& predictions, std::ostream& log);

/// Prior draws for one complex in `<out>/prior/<id>_prior.pdb` and a summary
/// of bonded-pair distances against the pseudoinverse prediction.
int cmd_prior(const RunConfig& config, const std::string& id, std::size_t count, std::ostream& log);

/// Per-step (t, RMSD to final, mean entropy) for one complex in
/// `<out>/trace/<id>.tsv`, with the full trajectory in `<id>.jsonl`.
int cmd_trace(const RunConfig& config, const std::string& id, std::ostream& log);

}  // namespace flowsite::app
