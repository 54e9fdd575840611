#ifndef MALSHIFT_IO_HPP
#define MALSHIFT_IO_HPP

#include <string>
#include <vector>

namespace malshift {

inline constexpr const char* kVersion = "0.1.0";

// Shortest round-trip decimal for a double (std::to_chars); "inf"/"nan" spelled out.
std::string format_double(double v);

// Leading comment block carried by every CSV artifact: version plus the full
// config echo needed to re-run it.
std::string csv_metadata(const std::string& command, const std::string& config_json);

std::string csv_line(const std::vector<std::string>& fields);

// Writes to the path, or to stdout when path is empty or "-".
void write_output(const std::string& path, const std::string& content);

}  // namespace malshift

#endif
