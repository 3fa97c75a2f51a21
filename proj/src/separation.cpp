#include "mmgsep/separation.hpp"

namespace mmgsep {

std::string_view to_string(SeparationMethod m) {
  return m == SeparationMethod::CeemdanFuzzEn ? "ceemdan" : "band";
}

double split_error(const MmgSeparation& s, const TimeSeries& raw) {
  require_aligned(s.mmg, raw, "split check");
  return (raw.samples() - s.mmg.samples() - s.motion.samples()).cwiseAbs().maxCoeff();
}

}  // namespace mmgsep
