// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flowsite/flow/engine.hpp"
#include "flowsite/mol/dataset.hpp"
#include "flowsite/net/model.hpp"

namespace flowsite::app {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string mode = "harmonicflow";  // harmonicflow | flowsite
  std::string pocket_mode = "distance";  // distance | radius
  double pocket_sigma_distance = 0.5;  // A
  double pocket_sigma_center = 0.2;    // A
  double sigma = 0.5;                  // A, conditional path width
  std::size_t steps = 20;              // integration steps
  std::size_t layers = 6;
  std::size_t scalars = 32;
  std::size_t vectors = 8;
  std::size_t psi_hidden = 64;
  std::size_t gat_layers = 4;
  std::size_t gat_hidden = 64;
  double weight_cfm = 1.0;
  double weight_refine = 1.0;
  double weight_type = 0.2;
  double weight_torsion = 0.5;
  bool type_loss_contacts_only = false;
  double self_condition_probability = 0.5;
  double lr = 1e-3;
  std::size_t batch_size = 4;
  std::size_t epochs = 100;
  double fake_ligand_probability = 0.0;
  std::size_t validate_every = 5;      // epochs; 0 disables validation
  std::size_t validation_samples = 1;  // per complex
  std::uint64_t seed = 0;
  std::string manifest;
  std::string validation_manifest;  // training manifest when empty
  std::string out = "flowsite_out";
  std::string checkpoint;           // resume (train) or model to load (sample, trace)
};

/// Keys in file order with their current values as text.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);

/// Sets one field from text. Throws ConfigError naming the key on an unknown
/// key or unparsable value.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Flat `key = value` lines; `#` starts a comment. Relative paths resolve
/// against `base_dir`.
void apply_config_text(RunConfig& config, std::string_view text, const std::string& base_dir);
void apply_config_file(RunConfig& config, const std::string& path);

/// Range checks; the message names the offending field.
void validate(const RunConfig& config);
/// Throws ConfigError naming the field when the path is empty or missing.
void require_file(const std::string& field, const std::string& path);

bool design_mode(const RunConfig& config);
net::ModelConfig model_config(const RunConfig& config);
flow::TrainOptions train_options(const RunConfig& config);
/// Training pockets carry the configured noise.
mol::SampleOptions training_sample_options(const RunConfig& config);
/// Inference and evaluation pockets are noise-free.
mol::SampleOptions inference_sample_options(const RunConfig& config);

}  // namespace flowsite::app
