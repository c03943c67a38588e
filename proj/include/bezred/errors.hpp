#ifndef BEZRED_ERRORS_HPP
#define BEZRED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bezred {

/// A basis function is numerically dependent on the current set over the
/// sample grid, so no dual basis exists for the enlarged set.
class RankDeficiencyError : public std::runtime_error {
public:
    explicit RankDeficiencyError(const std::string& what) : std::runtime_error(what) {}
};

/// The active-set loop failed (iteration cap, or a rank error mid-solve).
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Composite-curve file could not be parsed or failed validation.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace bezred

#endif
