#include "seqwarp/errors.hpp"

#include <cstdio>

namespace seqwarp {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string parse_message(std::size_t offset, const std::vector<std::string>& expected,
                          const std::string& found) {
    return "syntax error at offset " + std::to_string(offset) + ": expected one of {" +
           join(expected, ", ") + "}, found " + found;
}

std::string rank_message(double min_sv) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "immersion is not an immersion here: min singular value %.3e", min_sv);
    return buf;
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : std::runtime_error(parse_message(offset, expected, found)), offset_(offset),
      expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(std::string name, std::size_t offset)
    : std::runtime_error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
      name_(std::move(name)), offset_(offset) {}

RankDeficiency::RankDeficiency(double min_singular_value, std::vector<double> singular_values)
    : std::runtime_error(rank_message(min_singular_value)), min_sv_(min_singular_value),
      svs_(std::move(singular_values)) {}

ManifestError::ManifestError(std::vector<std::string> errors)
    : std::runtime_error(join(errors, "\n")), errors_(std::move(errors)) {}

}  // namespace seqwarp
