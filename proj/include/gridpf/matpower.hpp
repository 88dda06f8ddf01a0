#pragma once

#include <string>
#include <string_view>

#include "gridpf/case.hpp"

namespace gridpf {

// Parse error with 1-based line/column of the offending token.
struct ParseError : CaseError {
    int line = 0, column = 0;
    ParseError(const std::string& msg, int line_, int col_)
        : CaseError(msg + " at line " + std::to_string(line_) + ", column " +
                    std::to_string(col_)),
          line(line_),
          column(col_) {}
};

// Parses a MATPOWER case (mpc.baseMVA / mpc.bus / mpc.gen / mpc.branch with
// the standard column order). Rows with status 0 are kept, flagged
// out-of-service. gencost and other optional matrices are skipped; a warning
// for each is appended to *warnings when given.
NetworkCase parse_matpower_case(std::string_view text,
                                const std::string& name = "",
                                std::vector<std::string>* warnings = nullptr);

NetworkCase load_matpower_file(const std::string& path,
                               std::vector<std::string>* warnings = nullptr);

}  // namespace gridpf
