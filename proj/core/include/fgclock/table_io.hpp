#pragma once

// CSV / JSON serialization for series, paths, and MSE tables. Numbers are
// written in shortest round-trip decimal form, so re-parsing a file yields
// the same doubles bit for bit.

#include <iosfwd>
#include <string>

#include "fgclock/errors.hpp"
#include "fgclock/experiments.hpp"
#include "fgclock/model.hpp"

namespace fgclock {

std::string format_double(double x);  // NaN -> "" (empty field)

// `k,U,V` with k = 1..N.
void write_observations_csv(std::ostream& os, const ObservationSeries& obs);
// `k,xi,psi,theta,d` with k = 0..N.
void write_path_csv(std::ostream& os, const LatentPath& path);

// Reads a `k,U,V` file. Column order is taken from the header; extra
// columns are ignored. Throws ParseError naming the offending line.
ObservationSeries read_observations_csv(std::istream& is);

class ParseError : public Error {
 public:
  using Error::Error;
};

// `axis,estimator,mse,stderr,trials`. Undefined statistics (stderr at
// trials == 1, failed cells) are left empty.
void write_mse_csv(std::ostream& os, const MseTable& table);
// {"axis": ..., "rows": [{"axis":..,"estimator":..,"mse":..,"stderr":..,
//  "trials":..[, "error":..]}]}; undefined statistics are null.
std::string mse_to_json(const MseTable& table, int indent = 2);

}  // namespace fgclock
