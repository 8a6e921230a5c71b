#include "thue2dlite/error.hpp"

namespace thue2dlite {

  std::string to_string(SourcePos pos) {
    if (pos.line == 0) {
      return "<unknown position>";
    }
    return std::to_string(pos.line) + ":" + std::to_string(pos.column);
  }

  char const* to_string(ParseErrorKind kind) {
    switch (kind) {
      case ParseErrorKind::syntax:
        return "SyntaxError";
      case ParseErrorKind::unknown_symbol:
        return "UnknownSymbol";
      case ParseErrorKind::empty_rule_side:
        return "EmptyRuleSide";
      case ParseErrorKind::empty_goal_side:
        return "EmptyGoalSide";
      case ParseErrorKind::missing_goal:
        return "MissingGoal";
      case ParseErrorKind::duplicate_goal:
        return "DuplicateGoal";
      case ParseErrorKind::missing_alphabet:
        return "MissingAlphabet";
      case ParseErrorKind::duplicate_alphabet_symbol:
        return "DuplicateAlphabetSymbol";
      case ParseErrorKind::reserved_symbol:
        return "ReservedSymbol";
    }
    return "ParseError";
  }

  ParseError::ParseError(ParseErrorKind kind, SourcePos pos, std::string detail)
      : Error(std::string(to_string(kind)) + " at " + to_string(pos) + ": "
              + detail),
        kind_(kind),
        pos_(pos),
        detail_(std::move(detail)) {}

  MissingConstant::MissingConstant(std::string name)
      : Error("MissingConstant: constant '" + name + "' is not interpreted"),
        name_(std::move(name)) {}

  DuplicateConstant::DuplicateConstant(std::string name)
      : Error("DuplicateConstant: constant '" + name
              + "' occurs in more than one part"),
        name_(std::move(name)) {}

  NotClosedAtBound::NotClosedAtBound(std::size_t max_len, std::string reason)
      : Error("NotClosedAtBound(" + std::to_string(max_len) + "): " + reason),
        max_len_(max_len) {}

  UnknownSymbol::UnknownSymbol(std::string symbol)
      : Error("UnknownSymbol: '" + symbol + "'"), symbol_(std::move(symbol)) {}

}  // namespace thue2dlite
