#ifndef BAYESTREE_ERRORS_HPP
#define BAYESTREE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bayestree {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input file could not be read or a line failed to parse.
struct parse_error : error {
    parse_error(const std::string& msg, long line)
        : error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
    long line;
};

// Recursion exceeded the configured depth cap. With IEEE doubles two distinct
// points always separate by depth ~1075, so hitting this means the cap was
// lowered or the data is degenerate.
struct depth_cap_error : error {
    explicit depth_cap_error(int cap)
        : error("recursion exceeded depth cap " + std::to_string(cap)) {}
};

// A ratio was requested across two datasets whose divergence classes differ;
// the infinities do not cancel and no finite result exists.
struct divergence_mismatch_error : error {
    using error::error;
};

}  // namespace bayestree

#endif
