// SPDX-License-Identifier: Apache-2.0

#include "flowsite/app/config.hpp"

#include <charconv>
#include <filesystem>
#include <functional>
#include <sstream>

#include "flowsite/mol/pdb.hpp"

namespace flowsite::app {

namespace {

namespace fs = std::filesystem;

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
  bool path = false;
};

std::string format(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const char* what) {
  throw ConfigError("config field '" + key + "': cannot parse '" + value + "' as " + what);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value, const char* what) {
  T out{};
  const char* b = value.data();
  const char* e = b + value.size();
  auto [p, ec] = std::from_chars(b, e, out);
  if (ec != std::errc() || p != e) bad(key, value, what);
  return out;
}

Field real(const char* key, double RunConfig::*m) {
  return {key, [m](const RunConfig& c) { return format(c.*m); },
          [m, key](RunConfig& c, const std::string& v) { c.*m = parse_number<double>(key, v, "a number"); }};
}

Field count(const char* key, std::size_t RunConfig::*m) {
  return {key, [m](const RunConfig& c) { return std::to_string(c.*m); },
          [m, key](RunConfig& c, const std::string& v) {
            c.*m = parse_number<std::size_t>(key, v, "a nonnegative integer");
          }};
}

Field flag(const char* key, bool RunConfig::*m) {
  return {key, [m](const RunConfig& c) { return std::string(c.*m ? "true" : "false"); },
          [m, key](RunConfig& c, const std::string& v) {
            if (v == "true" || v == "1") c.*m = true;
            else if (v == "false" || v == "0") c.*m = false;
            else bad(key, v, "a boolean");
          }};
}

Field text(const char* key, std::string RunConfig::*m, bool path = false) {
  return {key, [m](const RunConfig& c) { return c.*m; }, [m](RunConfig& c, const std::string& v) { c.*m = v; },
          path};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      text("mode", &RunConfig::mode),
      text("pocket_mode", &RunConfig::pocket_mode),
      real("pocket_sigma_distance", &RunConfig::pocket_sigma_distance),
      real("pocket_sigma_center", &RunConfig::pocket_sigma_center),
      real("sigma", &RunConfig::sigma),
      count("steps", &RunConfig::steps),
      count("layers", &RunConfig::layers),
      count("scalars", &RunConfig::scalars),
      count("vectors", &RunConfig::vectors),
      count("psi_hidden", &RunConfig::psi_hidden),
      count("gat_layers", &RunConfig::gat_layers),
      count("gat_hidden", &RunConfig::gat_hidden),
      real("weight_cfm", &RunConfig::weight_cfm),
      real("weight_refine", &RunConfig::weight_refine),
      real("weight_type", &RunConfig::weight_type),
      real("weight_torsion", &RunConfig::weight_torsion),
      flag("type_loss_contacts_only", &RunConfig::type_loss_contacts_only),
      real("self_condition_probability", &RunConfig::self_condition_probability),
      real("lr", &RunConfig::lr),
      count("batch_size", &RunConfig::batch_size),
      count("epochs", &RunConfig::epochs),
      real("fake_ligand_probability", &RunConfig::fake_ligand_probability),
      count("validate_every", &RunConfig::validate_every),
      count("validation_samples", &RunConfig::validation_samples),
      {"seed", [](const RunConfig& c) { return std::to_string(c.seed); },
       [](RunConfig& c, const std::string& v) { c.seed = parse_number<std::uint64_t>("seed", v, "an unsigned integer"); }},
      text("manifest", &RunConfig::manifest, true),
      text("validation_manifest", &RunConfig::validation_manifest, true),
      text("out", &RunConfig::out, true),
      text("checkpoint", &RunConfig::checkpoint, true),
  };
  return f;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

void check(bool ok, const char* field, const std::string& why) {
  if (!ok) throw ConfigError("config field '" + std::string(field) + "' " + why);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(config));
  return out;
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(config, value);
      return;
    }
  }
  throw ConfigError("unknown config field '" + key + "'");
}

void apply_config_text(RunConfig& config, std::string_view content, const std::string& base_dir) {
  std::istringstream in{std::string(content)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    for (const auto& f : fields()) {
      if (key == f.key && f.path && !value.empty() && fs::path(value).is_relative()) {
        value = (fs::path(base_dir) / value).lexically_normal().string();
      }
    }
    set_config_value(config, key, value);
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path);
  apply_config_text(config, mol::read_text_file(path), fs::path(path).parent_path().string());
}

void validate(const RunConfig& c) {
  check(c.mode == "harmonicflow" || c.mode == "flowsite", "mode", "must be harmonicflow or flowsite, got '" + c.mode + "'");
  check(c.pocket_mode == "distance" || c.pocket_mode == "radius", "pocket_mode",
        "must be distance or radius, got '" + c.pocket_mode + "'");
  check(c.sigma >= 0.0, "sigma", "must be >= 0");
  check(c.pocket_sigma_distance >= 0.0, "pocket_sigma_distance", "must be >= 0");
  check(c.pocket_sigma_center >= 0.0, "pocket_sigma_center", "must be >= 0");
  check(c.steps >= 1, "steps", "must be >= 1");
  check(c.layers >= 1, "layers", "must be >= 1");
  check(c.scalars >= 1, "scalars", "must be >= 1");
  check(c.vectors >= 3, "vectors", "must be >= 3 (backbone vectors)");
  check(c.psi_hidden >= 1, "psi_hidden", "must be >= 1");
  check(c.gat_layers >= 1, "gat_layers", "must be >= 1");
  check(c.gat_hidden >= 1, "gat_hidden", "must be >= 1");
  check(c.weight_cfm >= 0.0, "weight_cfm", "must be >= 0");
  check(c.weight_refine >= 0.0, "weight_refine", "must be >= 0");
  check(c.weight_type >= 0.0, "weight_type", "must be >= 0");
  check(c.weight_torsion >= 0.0, "weight_torsion", "must be >= 0");
  check(c.self_condition_probability >= 0.0 && c.self_condition_probability <= 1.0, "self_condition_probability",
        "must lie in [0, 1]");
  check(c.lr > 0.0, "lr", "must be > 0");
  check(c.batch_size >= 1, "batch_size", "must be >= 1");
  check(c.fake_ligand_probability >= 0.0 && c.fake_ligand_probability <= 1.0, "fake_ligand_probability",
        "must lie in [0, 1]");
  check(c.validation_samples >= 1, "validation_samples", "must be >= 1");
  check(!c.out.empty(), "out", "must not be empty");
}

void require_file(const std::string& field, const std::string& path) {
  if (path.empty()) throw ConfigError("config field '" + field + "' is required");
  if (!fs::is_regular_file(path)) throw ConfigError("config field '" + field + "': no such file " + path);
}

bool design_mode(const RunConfig& c) { return c.mode == "flowsite"; }

net::ModelConfig model_config(const RunConfig& c) {
  net::ModelConfig m;
  m.design = design_mode(c);
  m.equivariant.layers = c.layers;
  m.equivariant.scalars = c.scalars;
  m.equivariant.vectors = c.vectors;
  m.equivariant.psi_hidden = c.psi_hidden;
  m.invariant.layers = c.gat_layers;
  m.invariant.hidden = c.gat_hidden;
  return m;
}

flow::TrainOptions train_options(const RunConfig& c) {
  flow::TrainOptions o;
  o.sigma = c.sigma;
  o.self_condition_probability = c.self_condition_probability;
  o.weights = {c.weight_cfm, c.weight_refine, c.weight_type, c.weight_torsion};
  o.adam.lr = c.lr;
  o.type_loss_contacts_only = c.type_loss_contacts_only;
  return o;
}

mol::SampleOptions training_sample_options(const RunConfig& c) {
  mol::SampleOptions o;
  o.pocket_mode = c.pocket_mode == "radius" ? mol::PocketMode::kRadius : mol::PocketMode::kDistance;
  o.pocket.sigma_distance = c.pocket_sigma_distance;
  o.pocket.sigma_center = c.pocket_sigma_center;
  return o;
}

mol::SampleOptions inference_sample_options(const RunConfig& c) {
  mol::SampleOptions o = training_sample_options(c);
  o.pocket.sigma_distance = 0.0;
  o.pocket.sigma_center = 0.0;
  return o;
}

}  // namespace flowsite::app
