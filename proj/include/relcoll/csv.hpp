#pragma once

// CSV rendering of diagnostics: header then one row per record, shortest
// round-trip decimal numbers, ',' delimiter, '\n' line endings.

#include <ostream>
#include <span>
#include <string>

#include "relcoll/diagnostics.hpp"

namespace relcoll {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_number(double x);

/// t,dt,mass,px,py,pz,energy,entropy,min_f,max_f,L_ratio_min,L_ratio_max,lp_<p>_<k>...
std::string csv_header(std::span<const NormSpec> norms);

/// One row without the trailing newline.
std::string csv_row(const DiagnosticsRecord& record);

/// Streams rows as records arrive. The stream should be opened in binary
/// mode so '\n' is written verbatim.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::span<const NormSpec> norms);
  void write(const DiagnosticsRecord& record);

 private:
  std::ostream& out_;
};

}  // namespace relcoll
