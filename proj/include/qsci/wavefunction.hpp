/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qsci/determinant.hpp"

namespace qsci {

/// Sparse real wavefunction over determinants plus its variational energy.
/// Output of every subspace diagonalization; input to refinement.
struct SampledWavefunction {
  std::map<Determinant, double> coeffs;
  double energy = 0.0;

  std::size_t support_size() const { return coeffs.size(); }

  double norm2() const {
    double s = 0.0;
    for (const auto &[d, c] : coeffs) s += c * c;
    return s;
  }

  double coefficient(const Determinant &d) const {
    const auto it = coeffs.find(d);
    return it == coeffs.end() ? 0.0 : it->second;
  }

  /// <this|other> over the shared support.
  double overlap(const SampledWavefunction &other) const {
    const auto &small = coeffs.size() <= other.coeffs.size() ? *this : other;
    const auto &big = coeffs.size() <= other.coeffs.size() ? other : *this;
    double s = 0.0;
    for (const auto &[d, c] : small.coeffs) s += c * big.coefficient(d);
    return s;
  }
};

/// CSV form: `energy=<value>` line, header, then one row per determinant.
inline void write_wavefunction_csv(std::ostream &out, const SampledWavefunction &wf) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", wf.energy);
  out << "energy=" << buf << "\n";
  out << "alpha_hex,beta_hex,coefficient\n";
  for (const auto &[d, c] : wf.coeffs) {
    std::snprintf(buf, sizeof(buf), "%llx,%llx,%.17g",
                  static_cast<unsigned long long>(d.alpha),
                  static_cast<unsigned long long>(d.beta), c);
    out << buf << "\n";
  }
}

inline SampledWavefunction read_wavefunction_csv(std::istream &in) {
  SampledWavefunction wf;
  std::string line;
  if (!std::getline(in, line) || line.rfind("energy=", 0) != 0)
    throw std::runtime_error("wavefunction CSV: missing energy= line");
  wf.energy = std::stod(line.substr(7));
  if (!std::getline(in, line) || line != "alpha_hex,beta_hex,coefficient")
    throw std::runtime_error("wavefunction CSV: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
      throw std::runtime_error("wavefunction CSV: malformed row: " + line);
    Determinant d;
    d.alpha = std::stoull(a, nullptr, 16);
    d.beta = std::stoull(b, nullptr, 16);
    wf.coeffs[d] = std::stod(c);
  }
  return wf;
}

} // namespace qsci
