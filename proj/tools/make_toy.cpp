// SPDX-License-Identifier: Apache-2.0

// Writes the synthetic toy complexes used by the examples and acceptance
// tests: <dir>/<id>_protein.pdb, <dir>/<id>_ligand.pdb and <dir>/manifest.txt.

#include <filesystem>
#include <iostream>
#include <string>

#include "flowsite/mol/pdb.hpp"
#include "flowsite/mol/synthetic.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  using namespace flowsite::mol;
  if (argc != 2) {
    std::cerr << "usage: flowsite_make_toy <output dir>\n";
    return 2;
  }
  const fs::path dir = argv[1];
  fs::create_directories(dir);
  std::string manifest = "# id protein ligand\n";
  for (int c = 0; c < 3; ++c) {
    const std::string id = "toy" + std::to_string(c + 1);
    SyntheticOptions opt;
    opt.ligand_atoms = 9 + static_cast<std::size_t>(c);
    opt.residues = 16;
    const RawComplex raw = synthetic_complex(100 + static_cast<std::uint64_t>(c), opt, id);
    write_text_file((dir / (id + "_protein.pdb")).string(), write_backbone(raw.protein));
    write_text_file((dir / (id + "_ligand.pdb")).string(), write_hetatm(raw.ligand, *raw.ligand.coords));
    manifest += id + " " + id + "_protein.pdb " + id + "_ligand.pdb\n";
  }
  write_text_file((dir / "manifest.txt").string(), manifest);
  std::cout << "wrote 3 complexes to " << dir.string() << '\n';
  return 0;
}
