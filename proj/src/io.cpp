#include "malshift/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace malshift {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_metadata(const std::string& command, const std::string& config_json) {
    std::string out;
    out += "# malshift ";
    out += kVersion;
    out += "\n# command: " + command + "\n";
    out += "# config: " + config_json + "\n";
    return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ",";
        bool quote = fields[i].find_first_of(",\"\n") != std::string::npos;
        if (quote) {
            out += '"';
            for (char c : fields[i]) {
                if (c == '"') out += '"';
                out += c;
            }
            out += '"';
        } else {
            out += fields[i];
        }
    }
    out += "\n";
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
    f << content;
}

}  // namespace malshift
