#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqwarp {

// Syntax error in an expression. offset is a byte offset into the source.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found);

    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class UnknownIdentifier : public std::runtime_error {
public:
    UnknownIdentifier(std::string name, std::size_t offset);

    const std::string& name() const { return name_; }
    std::size_t offset() const { return offset_; }

private:
    std::string name_;
    std::size_t offset_;
};

// Raised when an elementary function is evaluated outside its domain
// (ln of a non-positive value, division by zero, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RankDeficiency : public std::runtime_error {
public:
    RankDeficiency(double min_singular_value, std::vector<double> singular_values);

    double min_singular_value() const { return min_sv_; }
    const std::vector<double>& singular_values() const { return svs_; }

private:
    double min_sv_;
    std::vector<double> svs_;
};

// Collects every problem found while loading a manifest.
class ManifestError : public std::runtime_error {
public:
    explicit ManifestError(std::vector<std::string> errors);

    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace seqwarp
