// SPDX-License-Identifier: Apache-2.0

#include "flowsite/app/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

#include <json.hpp>

#include "flowsite/mol/pdb.hpp"

namespace flowsite::app {

namespace {

using nlohmann::json;

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const std::string& in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

}  // namespace

std::string Checkpoint::encode() const {
  json dir = json::array();
  for (const auto& a : arrays) {
    dir.push_back({{"name", a.name}, {"kind", a.kind}, {"step", a.step}, {"shape", a.value.shape.dims()}});
  }
  json cfg = json::array();
  for (const auto& [k, v] : config) cfg.push_back({k, v});
  const json header = {{"format", "flowsite-checkpoint"},
                       {"version", version},
                       {"config", cfg},
                       {"epoch", epoch},
                       {"seed", seed},
                       {"best_validation", best_validation},
                       {"has_best", has_best},
                       {"arrays", dir}};
  const std::string text = header.dump();
  std::string out;
  put_u64(out, text.size());
  out += text;
  for (const auto& a : arrays)
    for (double v : a.value.data) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

Checkpoint Checkpoint::decode(const std::string& bytes) {
  if (bytes.size() < 8) throw std::runtime_error("checkpoint is truncated");
  const std::uint64_t len = get_u64(bytes, 0);
  if (len > bytes.size() - 8) throw std::runtime_error("checkpoint header is truncated");
  const json header = json::parse(bytes.substr(8, len));
  if (header.value("format", "") != "flowsite-checkpoint") throw std::runtime_error("not a flowsite checkpoint");
  Checkpoint c;
  c.version = header.at("version").get<int>();
  if (c.version != kCheckpointVersion) {
    throw std::runtime_error("checkpoint version " + std::to_string(c.version) + " is not supported (expected " +
                             std::to_string(kCheckpointVersion) + ")");
  }
  for (const auto& kv : header.at("config")) c.config.emplace_back(kv[0].get<std::string>(), kv[1].get<std::string>());
  c.epoch = header.at("epoch").get<std::uint64_t>();
  c.seed = header.at("seed").get<std::uint64_t>();
  c.best_validation = header.at("best_validation").get<double>();
  c.has_best = header.at("has_best").get<bool>();
  std::size_t at = 8 + len;
  for (const auto& e : header.at("arrays")) {
    CheckpointArray a;
    a.name = e.at("name").get<std::string>();
    a.kind = e.at("kind").get<std::string>();
    a.step = e.at("step").get<std::int64_t>();
    a.value = diff::Array(diff::Shape(e.at("shape").get<std::vector<std::size_t>>()));
    if (bytes.size() < at + 8 * a.value.numel()) throw std::runtime_error("checkpoint data is truncated at " + a.name);
    for (double& v : a.value.data) {
      v = std::bit_cast<double>(get_u64(bytes, at));
      at += 8;
    }
    c.arrays.push_back(std::move(a));
  }
  if (at != bytes.size()) throw std::runtime_error("checkpoint has trailing bytes");
  return c;
}

Checkpoint capture(flow::FlowModel& model) {
  Checkpoint c;
  for (const auto* p : model.parameters().all()) {
    c.arrays.push_back({p->name, "param", 0, p->node.value()});
    c.arrays.push_back({p->name, "adam_m", p->adam.step, p->adam.m});
    c.arrays.push_back({p->name, "adam_v", 0, p->adam.v});
  }
  for (const auto& [name, value] : model.buffers()) c.arrays.push_back({name, "buffer", 0, value});
  return c;
}

void restore(const Checkpoint& c, flow::FlowModel& model) {
  std::size_t params = 0, buffers = 0;
  for (const auto& a : c.arrays) {
    diff::Array* target = nullptr;
    if (a.kind == "buffer") {
      auto it = model.buffers().find(a.name);
      if (it == model.buffers().end()) throw std::runtime_error("checkpoint buffer '" + a.name + "' is not in the model");
      target = &it->second;
      ++buffers;
    } else {
      diff::Parameter* p = model.parameters().find(a.name);
      if (p == nullptr) throw std::runtime_error("checkpoint parameter '" + a.name + "' is not in the model");
      if (a.kind == "param") {
        target = &p->node.mutable_value();
        ++params;
      } else if (a.kind == "adam_m") {
        target = &p->adam.m;
        p->adam.step = a.step;
      } else if (a.kind == "adam_v") {
        target = &p->adam.v;
      } else {
        throw std::runtime_error("unknown checkpoint array kind '" + a.kind + "'");
      }
    }
    if (target->shape != a.value.shape) {
      throw std::runtime_error("checkpoint array '" + a.name + "' has shape " + a.value.shape.str() + ", model has " +
                               target->shape.str());
    }
    *target = a.value;
  }
  if (params != model.parameters().size() || buffers != model.buffers().size()) {
    throw std::runtime_error("checkpoint does not cover every model array");
  }
}

void save_checkpoint(const std::string& path, const Checkpoint& c) { mol::write_text_file(path, c.encode()); }

Checkpoint load_checkpoint(const std::string& path) { return Checkpoint::decode(mol::read_text_file(path)); }

}  // namespace flowsite::app
