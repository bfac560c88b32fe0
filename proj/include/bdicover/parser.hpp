#ifndef BDICOVER_PARSER_HPP
#define BDICOVER_PARSER_HPP

#include <stdexcept>
#include <string>

#include "bdicover/agent.hpp"

namespace bdicover {

struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(int line_, int col_, const std::string& msg);
};

// Parses an agent definition in the plan-rule text language:
//
//   // comment to end of line
//   belief.                       initial belief
//   !goal.                        initial goal (duplicates preserved)
//   +trigger : context <- a; b.   plan, first-match by declaration order
//   -belief : context <- a.       plan fired on belief deletion
//
// Triggers are "+!goal" / "+belief" / "-belief"; belief arguments may use
// the single-level wildcard "_". Contexts are "true" or a conjunction of
// possibly negated ground atoms ("leg & not human_gone"). Body actions:
// "+b", "-b", "!g", ".print(\"..\")", ".send(agent, tell, b)",
// ".emit(label, args...)", "add_time(seconds)". Statements end with "."
// and may span lines. Errors carry line and column.
Agent parse_plans(const std::string& text, const std::string& agent_name);

} // namespace bdicover

#endif
