#pragma once

// Text formats for eigenvalue tables and eigenfunction profiles.
//
// Numbers are written with 15 significant digits through std::to_chars, so
// the decimal point is always '.' whatever the locale. CSV files open with a
// "#schema=1" comment line followed by the column header.

#include <iosfwd>
#include <string>
#include <vector>

#include "ahspec/complex.hpp"
#include "ahspec/rootfind.hpp"
#include "ahspec/shooting.hpp"

namespace ahspec {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kSignificantDigits = 15;

/// Shortest form of x rounded to 15 significant digits; "nan", "inf", "-inf"
/// for non-finite values.
std::string format_number(double x);
/// "re,im" with both parts through format_number.
std::string format_complex(Complex z);
double parse_number(const std::string& s);
/// Parses "re,im" (or a lone real part).
Complex parse_complex(const std::string& s);

/// Record columns, in file order.
const std::vector<std::string>& record_columns();

void write_records_csv(std::ostream& out, const std::vector<EigenvalueRecord>& records);
std::vector<EigenvalueRecord> read_records_csv(std::istream& in);

/// A JSON array with one object per record, keys as in record_columns().
void write_records_json(std::ostream& out, const std::vector<EigenvalueRecord>& records);
std::vector<EigenvalueRecord> read_records_json(std::istream& in);

/// Columns x, log10_abs_f, arg_f.
void write_profile_csv(std::ostream& out, const std::vector<ProfileSample>& samples);
std::vector<ProfileSample> read_profile_csv(std::istream& in);

}  // namespace ahspec
