// SPDX-License-Identifier: Apache-2.0

#include "flowsite/app/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "flowsite/app/checkpoint.hpp"
#include "flowsite/flow/prior.hpp"
#include "flowsite/metrics/metrics.hpp"
#include "flowsite/mol/elements.hpp"
#include "flowsite/mol/fake_ligand.hpp"
#include "flowsite/mol/pdb.hpp"
#include "flowsite/util/seed.hpp"

namespace flowsite::app {

namespace {

namespace fs = std::filesystem;

// Stream tags for derive_seed.
enum Stream : std::uint64_t {
  kInit = 1,
  kPocket = 2,
  kFake = 3,
  kOrder = 4,
  kStep = 5,
  kValidation = 6,
};

const char* kArchitectureKeys[] = {"mode", "layers", "scalars", "vectors", "psi_hidden", "gat_layers", "gat_hidden"};

std::string fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::vector<mol::ManifestEntry> manifest_entries(const RunConfig& c) {
  require_file("manifest", c.manifest);
  return mol::load_manifest(c.manifest);
}

const mol::ManifestEntry& find_entry(const std::vector<mol::ManifestEntry>& entries, const std::string& id) {
  for (const auto& e : entries)
    if (e.id == id) return e;
  std::string ids;
  for (const auto& e : entries) ids += (ids.empty() ? "" : ", ") + e.id;
  throw std::runtime_error("complex '" + id + "' is not in the manifest; available: " + ids);
}

std::vector<mol::ManifestEntry> select(const std::vector<mol::ManifestEntry>& entries, const std::string& id) {
  if (id.empty()) return entries;
  return {find_entry(entries, id)};
}

std::string sequence_text(const std::vector<int>& types) {
  std::string s;
  for (int t : types) s.push_back(mol::residue_letter(t));
  return s;
}

std::vector<int> native_types(const mol::ComplexSample& s) {
  std::vector<int> out;
  for (const auto& r : s.pocket.residues) out.push_back(r.type);
  return out;
}

// Higher is better: percent of poses under 2 A, or mean contact recovery.
double validate_model(net::FlowSiteModel& model, const std::vector<mol::ComplexSample>& samples, const RunConfig& c) {
  double score = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t k = 0; k < c.validation_samples; ++k) {
      const auto traj = flow::euler_integrate(model, samples[i], c.steps, derive_seed(c.seed, {kValidation, i, k}));
      if (design_mode(c)) {
        score += metrics::sequence_recovery(traj.designed, native_types(samples[i]), samples[i].contact);
      } else {
        score += metrics::rmsd(traj.final_x, samples[i].truth()) < 2.0 ? 100.0 : 0.0;
      }
      ++n;
    }
  }
  return n ? score / static_cast<double>(n) : 0.0;
}

Checkpoint snapshot(net::FlowSiteModel& model, const RunConfig& c, std::uint64_t epoch, double best, bool has_best) {
  Checkpoint ck = capture(model);
  ck.config = config_entries(c);
  ck.epoch = epoch;
  ck.seed = c.seed;
  ck.best_validation = best;
  ck.has_best = has_best;
  return ck;
}

std::vector<mol::ComplexSample> inference_samples(const std::vector<mol::RawComplex>& raw, const RunConfig& c) {
  std::vector<mol::ComplexSample> out;
  for (std::size_t i = 0; i < raw.size(); ++i) out.push_back(mol::make_sample(raw[i], inference_sample_options(c), 0));
  return out;
}

}  // namespace

Dataset load_dataset(const std::string& manifest, std::ostream& log) {
  Dataset d;
  const auto entries = mol::load_manifest(manifest);
  if (entries.empty()) throw std::runtime_error("manifest " + manifest + " lists no complexes");
  for (const auto& e : entries) {
    try {
      d.complexes.push_back(mol::load_complex(e));
    } catch (const std::exception& ex) {
      ++d.skipped;
      log << "warning: skipping " << e.id << ": " << ex.what() << '\n';
    }
  }
  if (2 * d.skipped > entries.size()) {
    throw std::runtime_error(std::to_string(d.skipped) + " of " + std::to_string(entries.size()) +
                             " complexes are unreadable");
  }
  return d;
}

LoadedModel load_model(const RunConfig& config) {
  LoadedModel lm;
  lm.path = config.checkpoint;
  if (lm.path.empty()) {
    for (const char* name : {"checkpoint_best.bin", "checkpoint_last.bin"}) {
      const fs::path p = fs::path(config.out) / name;
      if (fs::exists(p)) {
        lm.path = p.string();
        break;
      }
    }
  }
  if (lm.path.empty()) throw ConfigError("config field 'checkpoint' is required (no checkpoint under " + config.out + ")");
  require_file("checkpoint", lm.path);
  const Checkpoint ck = load_checkpoint(lm.path);
  lm.config = config;
  for (const auto& [k, v] : ck.config)
    for (const char* key : kArchitectureKeys)
      if (k == key) set_config_value(lm.config, k, v);
  validate(lm.config);
  lm.model = std::make_unique<net::FlowSiteModel>(model_config(lm.config), derive_seed(ck.seed, {kInit}));
  restore(ck, *lm.model);
  return lm;
}

int cmd_train(const RunConfig& c, std::ostream& log) {
  validate(c);
  require_file("manifest", c.manifest);
  if (!c.validation_manifest.empty()) require_file("validation_manifest", c.validation_manifest);
  fs::create_directories(c.out);

  const Dataset train = load_dataset(c.manifest, log);
  const Dataset val = c.validation_manifest.empty() ? train : load_dataset(c.validation_manifest, log);
  const std::vector<mol::ComplexSample> val_samples = inference_samples(val.complexes, c);

  net::FlowSiteModel model(model_config(c), derive_seed(c.seed, {kInit}));
  std::uint64_t start = 0;
  double best = 0.0;
  bool has_best = false;
  if (!c.checkpoint.empty()) {
    require_file("checkpoint", c.checkpoint);
    const Checkpoint ck = load_checkpoint(c.checkpoint);
    restore(ck, model);
    start = ck.epoch;
    best = ck.best_validation;
    has_best = ck.has_best;
  }
  const bool design = design_mode(c);
  const flow::TrainOptions opts = train_options(c);
  const fs::path log_path = fs::path(c.out) / "loss_log.tsv";
  std::ofstream loss(log_path, start == 0 ? std::ios::trunc : std::ios::app);
  if (!loss) throw std::runtime_error("cannot write " + log_path.string());
  if (start == 0) {
    loss << "epoch\tsteps\tsamples\tl_cfm\tl_refine" << (design ? "\tl_type\tl_torsion" : "")
         << "\ttotal\tskipped_params\tvalidation\n";
  }

  mol::FakeLigandOptions fake_opts;
  fake_opts.pocket_mode = training_sample_options(c).pocket_mode;
  fake_opts.pocket = training_sample_options(c).pocket;

  for (std::uint64_t epoch = start; epoch < c.epochs; ++epoch) {
    std::vector<mol::ComplexSample> samples;
    std::mt19937_64 coin(derive_seed(c.seed, {kFake, epoch}));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < train.complexes.size(); ++i) {
      const auto& raw = train.complexes[i];
      if (c.fake_ligand_probability > 0.0 && u(coin) < c.fake_ligand_probability) {
        auto fake = mol::make_fake_ligand(raw.protein, derive_seed(c.seed, {kFake, epoch, i}), fake_opts, raw.id + "_fake");
        if (fake) {
          samples.push_back(std::move(*fake));
          continue;
        }
      }
      try {
        samples.push_back(mol::make_sample(raw, training_sample_options(c), derive_seed(c.seed, {kPocket, epoch, i})));
      } catch (const mol::DataError& ex) {
        log << "warning: epoch " << epoch << ": skipping " << raw.id << ": " << ex.what() << '\n';
      }
    }
    if (samples.empty()) throw std::runtime_error("epoch " + std::to_string(epoch) + " has no usable samples");
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), std::mt19937_64(derive_seed(c.seed, {kOrder, epoch})));

    flow::LossReport sum;
    std::size_t steps = 0, skipped = 0;
    for (std::size_t b = 0; b * c.batch_size < order.size(); ++b) {
      std::vector<const mol::ComplexSample*> batch;
      for (std::size_t j = b * c.batch_size; j < std::min(order.size(), (b + 1) * c.batch_size); ++j)
        batch.push_back(&samples[order[j]]);
      const auto r = flow::train_step(batch, model, opts, derive_seed(c.seed, {kStep, epoch, b}));
      const double w = static_cast<double>(batch.size());
      sum.l_cfm += w * r.l_cfm;
      sum.l_refine += w * r.l_refine;
      sum.l_type += w * r.l_type;
      sum.l_torsion += w * r.l_torsion;
      sum.samples += batch.size();
      skipped += r.skipped_parameters;
      ++steps;
    }
    const double inv = 1.0 / static_cast<double>(sum.samples);
    sum.l_cfm *= inv;
    sum.l_refine *= inv;
    sum.l_type *= inv;
    sum.l_torsion *= inv;
    sum.weights = opts.weights;
    sum.total = sum.weighted_total();

    const bool last = epoch + 1 == c.epochs;
    std::string validation;
    if (c.validate_every > 0 && ((epoch + 1) % c.validate_every == 0 || last)) {
      const double score = validate_model(model, val_samples, c);
      validation = fixed(score, 4);
      if (!has_best || score > best) {
        best = score;
        has_best = true;
        save_checkpoint((fs::path(c.out) / "checkpoint_best.bin").string(),
                        snapshot(model, c, epoch + 1, best, has_best));
      }
    }
    loss << epoch + 1 << '\t' << steps << '\t' << sum.samples << '\t' << fixed(sum.l_cfm) << '\t'
         << fixed(sum.l_refine);
    if (design) loss << '\t' << fixed(sum.l_type) << '\t' << fixed(sum.l_torsion);
    loss << '\t' << fixed(sum.total) << '\t' << skipped << '\t' << validation << '\n';
    loss.flush();
    if (!validation.empty() || last) {
      save_checkpoint((fs::path(c.out) / "checkpoint_last.bin").string(),
                      snapshot(model, c, epoch + 1, best, has_best));
    }
  }
  log << "trained " << c.epochs - std::min<std::uint64_t>(start, c.epochs) << " epochs; log at " << log_path.string()
      << '\n';
  return 0;
}

int cmd_sample(const RunConfig& config, const std::string& id, std::size_t count, std::ostream& log) {
  validate(config);
  const auto entries = select(manifest_entries(config), id);
  if (count == 0) throw ConfigError("sample count must be >= 1");
  LoadedModel lm = load_model(config);
  const RunConfig& c = lm.config;
  for (const auto& e : entries) {
    const mol::ComplexSample s = mol::make_sample(mol::load_complex(e), inference_sample_options(c), 0);
    const fs::path dir = fs::path(c.out) / "samples" / e.id;
    fs::create_directories(dir);
    for (std::size_t k = 0; k < count; ++k) {
      const auto traj = flow::euler_integrate(*lm.model, s, c.steps, c.seed + k);
      const std::string stem = e.id + "_sample" + std::to_string(k);
      mol::write_text_file((dir / (stem + ".pdb")).string(), mol::write_hetatm(s.ligand, traj.final_x));
      if (design_mode(c)) mol::write_text_file((dir / (stem + ".seq")).string(), sequence_text(traj.designed) + "\n");
    }
    log << e.id << ": wrote " << count << " samples to " << dir.string() << '\n';
  }
  return 0;
}

int cmd_eval(const RunConfig& c, const std::string& predictions, std::ostream& log) {
  validate(c);
  if (predictions.empty() || !fs::is_directory(predictions) || fs::is_empty(predictions)) {
    throw std::runtime_error("predictions directory '" + predictions + "' is missing or empty");
  }
  const auto entries = manifest_entries(c);
  const bool design = design_mode(c);
  std::vector<metrics::EvalRecord> records;
  bool missing = false;
  for (const auto& e : entries) {
    metrics::EvalRecord rec;
    rec.id = e.id;
    const fs::path dir = fs::path(predictions) / e.id;
    std::vector<fs::path> poses;
    if (fs::is_directory(dir)) {
      for (const auto& f : fs::directory_iterator(dir)) {
        const std::string name = f.path().filename().string();
        if (f.path().extension() == ".pdb" && name.find("_sample") != std::string::npos) poses.push_back(f.path());
      }
    }
    std::sort(poses.begin(), poses.end());
    if (poses.empty()) {
      rec.failed = true;
      rec.note = "no predictions";
      missing = true;
      records.push_back(rec);
      continue;
    }
    try {
      const mol::ComplexSample truth = mol::make_sample(mol::load_complex(e), inference_sample_options(c), 0);
      const std::vector<int> native = native_types(truth);
      double rec_sum = 0.0, blo_sum = 0.0;
      std::size_t seqs = 0;
      for (const auto& p : poses) {
        const auto pred = mol::parse_ligand(mol::read_text_file(p.string())).graph;
        if (!pred.coords || pred.size() != truth.ligand.size()) {
          throw mol::DataError(p.filename().string() + " has " + std::to_string(pred.size()) + " atoms, expected " +
                               std::to_string(truth.ligand.size()));
        }
        rec.rmsds.push_back(metrics::rmsd(*pred.coords, truth.truth()));
        if (!design) continue;
        fs::path seq_path = p;
        seq_path.replace_extension(".seq");
        std::istringstream seq_text(mol::read_text_file(seq_path.string()));
        std::string seq;
        std::getline(seq_text, seq);
        if (seq.size() != native.size()) {
          throw mol::DataError(seq_path.filename().string() + " has " + std::to_string(seq.size()) +
                               " residues, expected " + std::to_string(native.size()));
        }
        std::vector<int> designed;
        for (char ch : seq) {
          const int t = mol::residue_index_from_letter(ch);
          if (t < 0 || t >= mol::kNumResidueTypes) throw mol::DataError(seq_path.filename().string() + ": bad residue letter");
          designed.push_back(t);
        }
        rec_sum += metrics::sequence_recovery(designed, native, truth.contact);
        blo_sum += metrics::blosum_score(native, designed, truth.contact);
        ++seqs;
      }
      if (design && seqs > 0) {
        rec.recovery = rec_sum / static_cast<double>(seqs);
        rec.blosum = blo_sum / static_cast<double>(seqs);
      }
    } catch (const std::exception& ex) {
      rec.failed = true;
      rec.note = ex.what();
    }
    records.push_back(rec);
  }
  fs::create_directories(c.out);
  std::ostringstream table;
  metrics::write_table(table, records, design);
  mol::write_text_file((fs::path(c.out) / "metrics.tsv").string(), table.str());
  log << table.str();
  if (missing) {
    log << "error: some complexes have no predictions\n";
    return 1;
  }
  return 0;
}

int cmd_prior(const RunConfig& c, const std::string& id, std::size_t count, std::ostream& log) {
  validate(c);
  if (count == 0) throw ConfigError("prior count must be >= 1");
  const auto entries = manifest_entries(c);
  const auto& entry = find_entry(entries, id);
  const mol::RawComplex raw = mol::load_complex(entry);
  const mol::Vec3 center = mol::make_sample(raw, inference_sample_options(c), 0).pocket.center;
  const auto prior = flow::HarmonicPrior::build(raw.ligand);
  const Eigen::MatrixXd pinv = flow::laplacian_pseudoinverse(raw.ligand);
  const auto bonds = raw.ligand.bonds();

  std::mt19937_64 rng(c.seed);
  std::string models;
  double bonded = 0.0, centroid_dev = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const mol::Coords x = prior.sample(center, rng);
    for (auto [i, j] : bonds)
      bonded += (x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j))).squaredNorm();
    for (const auto& comp : prior.components) {
      mol::Vec3 m = mol::Vec3::Zero();
      for (std::size_t a : comp.atoms) m += x.row(static_cast<Eigen::Index>(a)).transpose();
      centroid_dev = std::max(centroid_dev, (m / static_cast<double>(comp.atoms.size()) - center).norm());
    }
    std::string body = mol::write_hetatm(raw.ligand, x);
    if (const auto end = body.rfind("END\n"); end != std::string::npos && end + 4 == body.size()) body.resize(end);
    models += "MODEL     " + std::to_string(k + 1) + "\n" + body + "ENDMDL\n";
  }
  models += "END\n";
  const fs::path dir = fs::path(c.out) / "prior";
  fs::create_directories(dir);
  mol::write_text_file((dir / (entry.id + "_prior.pdb")).string(), models);

  double oracle = 0.0;
  for (auto [i, j] : bonds) oracle += 3.0 * (pinv(i, i) + pinv(j, j) - 2.0 * pinv(i, j));
  log << "complex\t" << entry.id << "\natoms\t" << raw.ligand.size() << "\ncomponents\t" << prior.components.size()
      << "\nbonds\t" << bonds.size() << "\nsamples\t" << count << '\n';
  if (!bonds.empty()) {
    log << "mean_bonded_sq_distance\t" << fixed(bonded / static_cast<double>(count * bonds.size())) << '\n'
        << "oracle_bonded_sq_distance\t" << fixed(oracle / static_cast<double>(bonds.size())) << '\n';
  }
  log << "max_component_centroid_offset\t" << std::scientific << std::setprecision(3) << centroid_dev << '\n';
  return 0;
}

int cmd_trace(const RunConfig& config, const std::string& id, std::ostream& log) {
  validate(config);
  const auto entries = manifest_entries(config);
  const auto& entry = find_entry(entries, id);
  LoadedModel lm = load_model(config);
  const RunConfig& c = lm.config;
  const mol::ComplexSample s = mol::make_sample(mol::load_complex(entry), inference_sample_options(c), 0);
  const auto traj = flow::euler_integrate(*lm.model, s, c.steps, c.seed);
  const fs::path dir = fs::path(c.out) / "trace";
  fs::create_directories(dir);
  std::ostringstream table;
  table << "step\tt\trmsd_to_final\tmean_entropy\n";
  for (const auto& row : flow::entropy_trace(traj)) {
    table << row.step << '\t' << fixed(row.t, 4) << '\t' << fixed(row.rmsd_to_final) << '\t'
          << (std::isnan(row.mean_entropy) ? std::string("nan") : fixed(row.mean_entropy)) << '\n';
  }
  mol::write_text_file((dir / (entry.id + ".tsv")).string(), table.str());
  std::ofstream jsonl(dir / (entry.id + ".jsonl"), std::ios::trunc);
  flow::write_trajectory(jsonl, traj);
  log << table.str();
  return 0;
}

}  // namespace flowsite::app
