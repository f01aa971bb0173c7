#ifndef BAYESTREE_CLI_HPP
#define BAYESTREE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace bayestree {

// Exit codes: 0 success, 1 usage/parse/IO error, 2 a divergent result was
// emitted (the report still appears on stdout with scaled surrogates).
int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err);

}  // namespace bayestree

#endif
