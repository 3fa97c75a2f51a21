#pragma once

#include <string_view>
#include <vector>

#include "mmgsep/signal_core.hpp"

namespace mmgsep {

enum class SeparationMethod { CeemdanFuzzEn, Bandpass };

std::string_view to_string(SeparationMethod m);

// 1-based inclusive IMF range.
struct ImfRange {
  int first = 1;
  int last = 0;
};

// Filtered MMG and recomposed motion; mmg + motion reproduces the raw input.
struct MmgSeparation {
  TimeSeries mmg;
  TimeSeries motion;
  SeparationMethod method;
  // CEEMDAN only: spectral fuzzy entropy and in-window power share per IMF,
  // the argmax IMF and the range kept as MMG.
  std::vector<double> scores{};
  std::vector<double> window_fractions{};
  int argmax = 0;
  ImfRange selected{};
};

// max |raw - (mmg + motion)|
double split_error(const MmgSeparation& s, const TimeSeries& raw);

}  // namespace mmgsep
