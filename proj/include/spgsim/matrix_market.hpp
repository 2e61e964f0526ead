#pragma once

#include <iosfwd>
#include <string>

#include "spgsim/csr.hpp"

namespace spgsim {

// Reads a Matrix Market coordinate file (real, integer, or pattern field;
// general or symmetric). One-based indices become zero-based, symmetric
// inputs are expanded to both triangles, duplicates are summed, and pattern
// entries get value 1.0. Array (dense) format raises UnsupportedFormat;
// malformed content raises ParseError with the offending line number.
CsrMatrix read_matrix_market(const std::string& path);
CsrMatrix read_matrix_market(std::istream& in);

// Writes coordinate/real/general with shortest round-trip value formatting;
// read_matrix_market(write_matrix_market(m)) == m bit-identically for
// canonical matrices.
void write_matrix_market(const CsrMatrix& m, const std::string& path);
void write_matrix_market(const CsrMatrix& m, std::ostream& out);

}  // namespace spgsim
