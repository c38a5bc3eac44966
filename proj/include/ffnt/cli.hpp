#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ffnt {

// 0 success, 1 audit failure, 2 usage error
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

// "1..8", "1,3,5" or "4"
std::vector<int> parse_int_list(const std::string& s);
// X values as exponents of q: "3", "3^4", "3^1..3^12", comma separated
std::vector<int> parse_X_list(const std::string& s, uint64_t q);

}  // namespace ffnt
