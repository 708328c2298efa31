// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "flowsite/mol/types.hpp"

namespace flowsite::mol {

struct BackboneParseOptions {
  /// Keep side-chain heavy atoms alongside N/CA/C/O.
  bool keep_side_chains = false;
};

struct BackboneParse {
  PocketBackbone backbone;
  std::size_t dropped_residues = 0;  // missing one of N/CA/C/O
  std::size_t rejected_records = 0;  // unparsable coordinates
};

/// Assembles residues from fixed-column ATOM records, keyed by
/// (chain, resseq) in file order. Alternate locations other than blank/'A'
/// are skipped. Throws ParseError when more than 10% of the consumed records
/// are unparsable or no complete residue remains.
BackboneParse parse_backbone(std::string_view text, const BackboneParseOptions& options = {});

struct LigandParse {
  LigandGraph graph;
  std::size_t inferred_bonds = 0;  // bonds added by the distance rule
};

/// Heavy atoms from HETATM records (waters excluded). Bonds come from CONECT
/// records when any are present, otherwise from the covalent-radius rule.
/// Throws ParseError when no heavy atom remains.
LigandParse parse_ligand(std::string_view text);

/// Side-channel chemistry: one line per atom, `<atom index> <15 values>`;
/// `#` starts a comment. Returned vector is indexed by atom.
std::vector<std::pair<std::size_t, AtomFeatures>> parse_feature_file(std::string_view text);

/// Overwrites the features of listed atoms. Throws DataError on an index out
/// of range.
void apply_features(LigandGraph& graph,
                    const std::vector<std::pair<std::size_t, AtomFeatures>>& features);

/// Fixed-column HETATM records (plus CONECT for bonds) for a ligand pose.
std::string write_hetatm(const LigandGraph& graph, const Coords& coords,
                         std::string_view resname = "LIG");

/// Fixed-column ATOM records for backbone (and side-chain, if present) atoms.
std::string write_backbone(const PocketBackbone& backbone);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace flowsite::mol
