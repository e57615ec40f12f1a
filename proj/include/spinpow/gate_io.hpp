#ifndef SPINPOW_GATE_IO_HPP
#define SPINPOW_GATE_IO_HPP

#include <string>

#include "spinpow/invariant.hpp"

namespace spinpow {

/// Gate files are JSON objects {"j": "3/2", "matrix": [[[re, im], ...], ...]}
/// with one [re, im] pair per entry, rows outermost.
void write_gate_json(const std::string& path, const UnitaryGate& gate);

/// Reads and validates a gate file; throws std::invalid_argument naming the
/// offending row/column on malformed input or a unitarity defect above tol.
UnitaryGate read_gate_json(const std::string& path, double unitarity_tol = 1e-8);

}  // namespace spinpow

#endif
