#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sentifolio {

/// RFC-4180 CSV reader: quoted fields may contain commas, doubled quotes and
/// embedded newlines. Records are returned as raw string fields.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Reads one record. Returns false at end of input. `line_number` is the
    /// 1-based physical line the record started on (for error messages).
    bool next(std::vector<std::string>& fields, std::size_t& line_number);

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

/// Quotes a field iff it contains a comma, quote, CR or LF.
std::string csv_quote(const std::string& field);

/// Shortest decimal representation that parses back to the identical double
/// (round-trip exact). Used everywhere a number is serialized so that reruns
/// are byte-identical and save/load round-trips are bit-exact.
std::string format_double(double value);

/// strtod with full-string validation; throws std::invalid_argument.
double parse_double(const std::string& text);

}  // namespace sentifolio
