// SPDX-License-Identifier: Apache-2.0

#include "flowsite/mol/pdb.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "flowsite/mol/elements.hpp"
#include "flowsite/mol/ligand.hpp"

namespace flowsite::mol {

namespace {

std::string_view column(std::string_view line, std::size_t first, std::size_t last) {
  // 1-based inclusive columns, clipped to the line.
  if (line.size() < first) return {};
  const std::size_t begin = first - 1;
  const std::size_t len = std::min(last, line.size()) - begin;
  return line.substr(begin, len);
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool parse_double(std::string_view field, double& out) {
  const std::string s = trim(field);
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

bool parse_int(std::string_view field, int& out) {
  const std::string s = trim(field);
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) return false;
  out = static_cast<int>(v);
  return true;
}

bool parse_xyz(std::string_view line, Vec3& out) {
  return parse_double(column(line, 31, 38), out.x()) && parse_double(column(line, 39, 46), out.y()) &&
         parse_double(column(line, 47, 54), out.z());
}

int record_element(std::string_view line, std::string_view raw_name) {
  const std::string sym = trim(column(line, 77, 78));
  if (!sym.empty()) {
    const int z = atomic_number(sym);
    if (z != 0) return z;
  }
  return element_from_atom_name(raw_name);
}

bool accepted_altloc(std::string_view line) {
  const std::string_view alt = column(line, 17, 17);
  return alt.empty() || alt[0] == ' ' || alt[0] == 'A';
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(line);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

std::string format_atom_name(const std::string& name, int element) {
  if (name.size() >= 4) return name.substr(0, 4);
  std::string out = element_symbol(element).size() == 1 ? " " + name : name;
  while (out.size() < 4) out.push_back(' ');
  return out;
}

std::string atom_record(const char* record, int serial, const std::string& name, int element,
                        const std::string& resname, char chain, int resseq, const Vec3& p) {
  char buf[96];
  std::string sym = element_symbol(element);
  for (char& ch : sym) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  std::snprintf(buf, sizeof(buf), "%-6s%5d %-4s %3s %c%4d    %8.3f%8.3f%8.3f%6.2f%6.2f          %2s\n",
                record, serial % 100000, format_atom_name(name, element).c_str(), resname.c_str(),
                chain, resseq % 10000, p.x(), p.y(), p.z(), 1.0, 0.0, sym.c_str());
  return buf;
}

}  // namespace

BackboneParse parse_backbone(std::string_view text, const BackboneParseOptions& options) {
  struct Pending {
    Residue res;
    std::array<bool, 4> have{};
  };
  std::vector<Pending> pending;
  std::map<std::tuple<char, int, char>, std::size_t> index;
  std::size_t consumed = 0, rejected = 0;

  for_each_line(text, [&](std::string_view line) {
    if (trim(column(line, 1, 6)) != "ATOM") return;
    const std::string_view raw_name = column(line, 13, 16);
    const std::string name = trim(raw_name);
    int slot = -1;
    if (name == "N") slot = 0;
    else if (name == "CA") slot = 1;
    else if (name == "C") slot = 2;
    else if (name == "O") slot = 3;
    const int element = record_element(line, raw_name);
    const bool side_chain = slot < 0 && options.keep_side_chains && element > 1 && name != "OXT";
    if (slot < 0 && !side_chain) return;
    if (!accepted_altloc(line)) return;
    ++consumed;

    Vec3 pos;
    int resseq = 0;
    if (!parse_xyz(line, pos) || !parse_int(column(line, 23, 26), resseq)) {
      ++rejected;
      return;
    }
    const std::string_view chain_col = column(line, 22, 22);
    const char chain = chain_col.empty() ? ' ' : chain_col[0];
    const std::string_view icode_col = column(line, 27, 27);
    const char icode = icode_col.empty() ? ' ' : icode_col[0];
    const auto key = std::make_tuple(chain, resseq, icode);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, pending.size()).first;
      Pending p;
      p.res.chain = chain;
      p.res.seq = resseq;
      p.res.type = residue_index(trim(column(line, 18, 20)));
      pending.push_back(p);
    }
    Pending& p = pending[it->second];
    if (slot >= 0) {
      if (p.have[static_cast<std::size_t>(slot)]) return;  // first occurrence wins
      p.have[static_cast<std::size_t>(slot)] = true;
      Vec3* dst[4] = {&p.res.n, &p.res.ca, &p.res.c, &p.res.o};
      *dst[slot] = pos;
    } else {
      for (const auto& a : p.res.side_chain)
        if (a.name == name) return;
      p.res.side_chain.push_back({name, element, pos});
    }
  });

  if (consumed > 0 && rejected * 10 > consumed) {
    throw ParseError("rejected " + std::to_string(rejected) + " of " + std::to_string(consumed) +
                     " atom records (more than 10%)");
  }

  BackboneParse out;
  out.rejected_records = rejected;
  std::map<char, int> last_seq;
  for (auto& p : pending) {
    const bool complete = p.have[0] && p.have[1] && p.have[2] && p.have[3];
    auto last = last_seq.find(p.res.chain);
    const bool ordered = last == last_seq.end() || p.res.seq > last->second;
    if (!complete || !ordered) {
      ++out.dropped_residues;
      continue;
    }
    last_seq[p.res.chain] = p.res.seq;
    out.backbone.residues.push_back(std::move(p.res));
  }
  if (out.backbone.residues.empty()) throw ParseError("no complete backbone residue found");
  return out;
}

LigandParse parse_ligand(std::string_view text) {
  std::vector<LigandAtom> atoms;
  std::vector<Vec3> positions;
  std::vector<int> molecule;
  std::map<int, std::size_t> serial_to_atom;
  std::map<std::tuple<char, std::string, int>, int> molecule_ids;
  std::vector<std::pair<int, int>> conect;
  bool saw_conect = false;

  for_each_line(text, [&](std::string_view line) {
    const std::string record = trim(column(line, 1, 6));
    if (record == "CONECT") {
      saw_conect = true;
      int from = 0;
      if (!parse_int(column(line, 7, 11), from)) return;
      for (std::size_t c = 12; c + 4 <= 31; c += 5) {
        int to = 0;
        if (parse_int(column(line, c, c + 4), to)) conect.emplace_back(from, to);
      }
      return;
    }
    if (record != "HETATM") return;
    const std::string resname = trim(column(line, 18, 20));
    if (resname == "HOH" || resname == "WAT" || resname == "DOD") return;
    if (!accepted_altloc(line)) return;
    const std::string_view raw_name = column(line, 13, 16);
    const int element = record_element(line, raw_name);
    if (element == 1) return;
    Vec3 pos;
    if (!parse_xyz(line, pos)) throw ParseError("unparsable HETATM coordinates: " + std::string(line));
    int serial = 0;
    const bool has_serial = parse_int(column(line, 7, 11), serial);
    int resseq = 0;
    parse_int(column(line, 23, 26), resseq);
    const std::string_view chain_col = column(line, 22, 22);
    const auto key = std::make_tuple(chain_col.empty() ? ' ' : chain_col[0], resname, resseq);
    auto mit = molecule_ids.find(key);
    if (mit == molecule_ids.end()) {
      mit = molecule_ids.emplace(key, static_cast<int>(molecule_ids.size())).first;
    }
    if (has_serial) serial_to_atom[serial] = atoms.size();
    LigandAtom atom;
    atom.element = element;
    atom.name = trim(raw_name);
    atoms.push_back(atom);
    positions.push_back(pos);
    molecule.push_back(mit->second);
  });

  if (atoms.empty()) throw ParseError("ligand has zero heavy atoms");
  Coords coords(static_cast<Eigen::Index>(atoms.size()), 3);
  for (std::size_t i = 0; i < positions.size(); ++i) coords.row(static_cast<Eigen::Index>(i)) = positions[i];

  LigandParse out;
  out.graph = make_ligand(std::move(atoms), std::move(coords));
  out.graph.molecule = std::move(molecule);
  if (saw_conect) {
    for (const auto& [a, b] : conect) {
      const auto ia = serial_to_atom.find(a);
      const auto ib = serial_to_atom.find(b);
      if (ia != serial_to_atom.end() && ib != serial_to_atom.end()) {
        out.graph.set_bond(ia->second, ib->second);
      }
    }
    compute_components(out.graph);
  } else {
    out.inferred_bonds = infer_bonds(out.graph);
  }
  fill_graph_features(out.graph);
  return out;
}

std::vector<std::pair<std::size_t, AtomFeatures>> parse_feature_file(std::string_view text) {
  std::vector<std::pair<std::size_t, AtomFeatures>> out;
  std::size_t line_no = 0;
  for_each_line(text, [&](std::string_view raw) {
    ++line_no;
    std::string line(raw.substr(0, raw.find('#')));
    if (trim(line).empty()) return;
    std::istringstream is(line);
    long long idx = -1;
    AtomFeatures f{};
    if (!(is >> idx) || idx < 0) {
      throw ParseError("feature file line " + std::to_string(line_no) + ": bad atom index");
    }
    for (double& v : f) {
      if (!(is >> v)) {
        throw ParseError("feature file line " + std::to_string(line_no) + ": expected " +
                         std::to_string(kAtomFeatureWidth) + " values");
      }
    }
    std::string extra;
    if (is >> extra) throw ParseError("feature file line " + std::to_string(line_no) + ": trailing data");
    out.emplace_back(static_cast<std::size_t>(idx), f);
  });
  return out;
}

void apply_features(LigandGraph& graph,
                    const std::vector<std::pair<std::size_t, AtomFeatures>>& features) {
  for (const auto& [idx, f] : features) {
    if (idx >= graph.size()) {
      throw DataError("feature row for atom " + std::to_string(idx) + " but ligand has " +
                      std::to_string(graph.size()) + " atoms");
    }
    graph.atoms[idx].features = f;
  }
}

std::string write_hetatm(const LigandGraph& graph, const Coords& coords, std::string_view resname) {
  if (static_cast<std::size_t>(coords.rows()) != graph.size()) {
    throw DataError("pose has " + std::to_string(coords.rows()) + " rows for " +
                    std::to_string(graph.size()) + " atoms");
  }
  std::string out;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    std::string name = graph.atoms[i].name;
    if (name.empty()) name = element_symbol(graph.atoms[i].element) + std::to_string(i + 1);
    const int resseq = graph.molecule.empty() ? 1 : graph.molecule[i] + 1;
    out += atom_record("HETATM", static_cast<int>(i + 1), name, graph.atoms[i].element,
                       std::string(resname), 'L', resseq, coords.row(static_cast<Eigen::Index>(i)).transpose());
  }
  for (std::size_t i = 0; i < graph.size(); ++i) {
    std::vector<std::size_t> nb;
    for (std::size_t j = 0; j < graph.size(); ++j)
      if (graph.bonded(i, j)) nb.push_back(j);
    for (std::size_t k = 0; k < nb.size(); k += 4) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "CONECT%5zu", i + 1);
      out += buf;
      for (std::size_t q = k; q < std::min(nb.size(), k + 4); ++q) {
        std::snprintf(buf, sizeof(buf), "%5zu", nb[q] + 1);
        out += buf;
      }
      out += '\n';
    }
  }
  out += "END\n";
  return out;
}

std::string write_backbone(const PocketBackbone& backbone) {
  std::string out;
  int serial = 1;
  for (const auto& r : backbone.residues) {
    const std::string resname = residue_name(r.type);
    out += atom_record("ATOM", serial++, "N", 7, resname, r.chain, r.seq, r.n);
    out += atom_record("ATOM", serial++, "CA", 6, resname, r.chain, r.seq, r.ca);
    out += atom_record("ATOM", serial++, "C", 6, resname, r.chain, r.seq, r.c);
    out += atom_record("ATOM", serial++, "O", 8, resname, r.chain, r.seq, r.o);
    for (const auto& a : r.side_chain) {
      out += atom_record("ATOM", serial++, a.name, a.element, resname, r.chain, r.seq, a.pos);
    }
  }
  out += "END\n";
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace flowsite::mol
