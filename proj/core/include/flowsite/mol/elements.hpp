// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace flowsite::mol {

/// Atomic number for an element symbol (case-insensitive); 0 when unknown.
int atomic_number(std::string_view symbol);
std::string element_symbol(int atomic_number);

/// Single-bond covalent radius in Angstrom; 0.77 for elements not in the table.
double covalent_radius(int atomic_number);

/// Guesses the element from a fixed-column atom name when the element
/// columns are blank.
int element_from_atom_name(std::string_view atom_name);

// Residue types are indexed 0..19 in the order ARNDCQEGHILKMFPSTWYV; kMask
// marks an unknown or hidden type.
inline constexpr int kNumResidueTypes = 20;
inline constexpr int kMask = 20;

int residue_index(std::string_view three_letter);
int residue_index_from_letter(char one_letter);
char residue_letter(int index);
std::string residue_name(int index);

}  // namespace flowsite::mol
