#pragma once

#include <iosfwd>
#include <string>

#include "qka/pegasos.hpp"

namespace qka {

// Plain-text model checkpoint:
//
//   qka-model 1
//   lambda <v>
//   window <W, 0 = unbounded>
//   warmup <tau_in>
//   shots <R>
//   spsa <mu> <c> <decay 0|1> <step counter>
//   step <current step>
//   theta <theta_1> ... <theta_d>
//   map
//   <feature-map document ending in 'end'>
//   records <count>
//   <t> <index> <y> <theta_1..theta_d> <x_1..x_r>     (one line per record)
//
// Reals are written with 17 significant digits so a save/load cycle is
// lossless.
void save_model(std::ostream& out, const AlignedModel& model);
AlignedModel load_model(std::istream& in);

void save_model_file(const std::string& path, const AlignedModel& model);
AlignedModel load_model_file(const std::string& path);

}  // namespace qka
