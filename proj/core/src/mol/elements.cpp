// SPDX-License-Identifier: Apache-2.0

#include "flowsite/mol/elements.hpp"

#include <array>
#include <cctype>

namespace flowsite::mol {

namespace {

struct ElementInfo {
  const char* symbol;
  int z;
  double radius;  // Cordero et al. single-bond covalent radii
};

constexpr std::array<ElementInfo, 26> kElements{{
    {"H", 1, 0.31},   {"B", 5, 0.84},   {"C", 6, 0.76},   {"N", 7, 0.71},   {"O", 8, 0.66},
    {"F", 9, 0.57},   {"NA", 11, 1.66}, {"MG", 12, 1.41}, {"AL", 13, 1.21}, {"SI", 14, 1.11},
    {"P", 15, 1.07},  {"S", 16, 1.05},  {"CL", 17, 1.02}, {"K", 19, 2.03},  {"CA", 20, 1.76},
    {"MN", 25, 1.39}, {"FE", 26, 1.32}, {"CO", 27, 1.26}, {"NI", 28, 1.24}, {"CU", 29, 1.32},
    {"ZN", 30, 1.22}, {"SE", 34, 1.20}, {"BR", 35, 1.20}, {"CD", 48, 1.44}, {"I", 53, 1.39},
    {"HG", 80, 1.32},
}};

constexpr std::array<const char*, 20> kResidueNames{"ALA", "ARG", "ASN", "ASP", "CYS",
                                                    "GLN", "GLU", "GLY", "HIS", "ILE",
                                                    "LEU", "LYS", "MET", "PHE", "PRO",
                                                    "SER", "THR", "TRP", "TYR", "VAL"};
constexpr std::string_view kResidueLetters = "ARNDCQEGHILKMFPSTWYV";

std::string upper(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

}  // namespace

int atomic_number(std::string_view symbol) {
  const std::string s = upper(symbol);
  for (const auto& e : kElements)
    if (s == e.symbol) return e.z;
  return 0;
}

std::string element_symbol(int z) {
  for (const auto& e : kElements) {
    if (e.z == z) {
      std::string s = e.symbol;
      for (std::size_t i = 1; i < s.size(); ++i) s[i] = static_cast<char>(std::tolower(s[i]));
      return s;
    }
  }
  return "X";
}

double covalent_radius(int z) {
  for (const auto& e : kElements)
    if (e.z == z) return e.radius;
  return 0.77;
}

int element_from_atom_name(std::string_view atom_name) {
  // Fixed-column names right-justify one-letter elements into column 14, so a
  // leading blank means a single-letter element.
  std::string name(atom_name);
  while (name.size() < 4) name.push_back(' ');
  if (name[0] == ' ' || std::isdigit(static_cast<unsigned char>(name[0]))) {
    return atomic_number(std::string_view(name).substr(1, 1));
  }
  // Four-character hydrogen names (HG21) also start in column 13.
  if (std::toupper(static_cast<unsigned char>(name[0])) == 'H') return 1;
  const int two = atomic_number(std::string_view(name).substr(0, 2));
  return two != 0 ? two : atomic_number(std::string_view(name).substr(0, 1));
}

int residue_index(std::string_view three_letter) {
  const std::string s = upper(three_letter);
  for (int i = 0; i < kNumResidueTypes; ++i)
    if (s == kResidueNames[static_cast<std::size_t>(i)]) return i;
  if (s == "MSE") return 12;
  return kMask;
}

int residue_index_from_letter(char one_letter) {
  const auto pos = kResidueLetters.find(static_cast<char>(std::toupper(one_letter)));
  return pos == std::string_view::npos ? kMask : static_cast<int>(pos);
}

char residue_letter(int index) {
  if (index < 0 || index >= kNumResidueTypes) return 'X';
  return kResidueLetters[static_cast<std::size_t>(index)];
}

std::string residue_name(int index) {
  if (index < 0 || index >= kNumResidueTypes) return "UNK";
  return kResidueNames[static_cast<std::size_t>(index)];
}

}  // namespace flowsite::mol
