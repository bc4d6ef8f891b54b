#pragma once

#include <string>

#include "hyptctl/model.hpp"

namespace hyptctl {

struct ParseError {
    int line = 0;
    int column = 0;
    std::string message;
    std::string to_string() const;
};

/// Parses the model text format:
///
///   pta <name>
///   clocks c1, c2;
///   params p1, p2;
///   props A, B;                      # optional; labels also declare
///   loc <id> [initial] labels {A, B} inv <guard>;
///   edge <id> -> <id> when <guard> reset {c1};
///
/// Guards are conjunctions joined by '&'; atoms compare a clock or a clock
/// difference against an integer linear term over parameters, written with
/// the clock on either side ("c <= p1", "p1 - 1 < c", "c1 - c2 = 2*p1 + 3",
/// "true"). '#' starts a comment.
Pta parse_pta(const std::string& text);

/// Reads the file and parses it; throws ParseError / std::runtime_error.
Pta load_pta_file(const std::string& path);

/// Parses one guard in the same grammar, against declared clock/param sets.
Guard parse_guard_text(const std::string& text, const std::set<std::string>& clocks,
                       const std::set<std::string>& params);

}  // namespace hyptctl
