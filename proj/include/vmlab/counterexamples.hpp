#pragma once

#include <cstddef>
#include <vector>

#include "vmlab/dunford.hpp"

namespace vmlab {

inline constexpr std::size_t kMaxPettisLevels = 12;

struct PettisExampleConfig {
  std::size_t levels = 3;
  double p = 2.0;
};

/// Truncated Pettis function: atoms I_1..I_N of mass 4^-n plus a remainder
/// atom, codomain l_2^N, value 2^n e_n on I_n and 0 on the remainder.
SimpleFunction pettis_example(const PettisExampleConfig& config);

/// Atom indices of I_n (n counted from 1) and of the remainder.
inline std::size_t pettis_level_atom(std::size_t n) { return n - 1; }
inline std::size_t pettis_remainder_atom(const PettisExampleConfig& config) { return config.levels; }

struct KotheExampleConfig {
  double p = 2.0;
  std::vector<double> atom_masses{0.5, 0.5};
};

/// phi = sum_i mu_i^(-1/p) f_i chi_{A_i} with Z = weighted L^p' over the
/// atom masses and f_i = chi_{A_i} / ||chi_{A_i}||_{p'}.
SimpleFunction kothe_example(const KotheExampleConfig& config);

/// g_i = chi_{A_i} / ||chi_{A_i}||_{L^p}: unit in Z* with <f_i, g_i> = 1.
DualVector kothe_dual_witness(const KotheExampleConfig& config, std::size_t atom);

}  // namespace vmlab
