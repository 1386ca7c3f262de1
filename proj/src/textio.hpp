#ifndef QBRAIN_TEXTIO_HPP
#define QBRAIN_TEXTIO_HPP

#include <string>

namespace qbrain::textio {

// All emitted numbers are fixed at 12 significant digits so that reports and
// CSV files are byte-stable across runs and platforms.
std::string format_number(double v);

// Round a double to the value obtained by re-parsing its 12-digit form.
// JSON reports store the rounded value, which then serializes identically
// everywhere.
double round_number(double v);

} // namespace qbrain::textio

#endif
