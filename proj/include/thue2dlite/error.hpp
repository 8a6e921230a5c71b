#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thue2dlite {

  // Base of every exception thrown by the library.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // Position inside a text document, 1-based. line == 0 means "unknown".
  struct SourcePos {
    std::size_t line   = 0;
    std::size_t column = 0;
  };

  std::string to_string(SourcePos pos);

  enum class ParseErrorKind {
    syntax,
    unknown_symbol,
    empty_rule_side,
    empty_goal_side,
    missing_goal,
    duplicate_goal,
    missing_alphabet,
    duplicate_alphabet_symbol,
    reserved_symbol,
  };

  char const* to_string(ParseErrorKind kind);

  // Thrown by every text-format reader (.thue, .struct, .cq, .onto).
  class ParseError : public Error {
   public:
    ParseError(ParseErrorKind kind, SourcePos pos, std::string detail);

    ParseErrorKind kind() const noexcept {
      return kind_;
    }
    SourcePos pos() const noexcept {
      return pos_;
    }
    std::string const& detail() const noexcept {
      return detail_;
    }

   private:
    ParseErrorKind kind_;
    SourcePos      pos_;
    std::string    detail_;
  };

  // A named constant the operation needs is not interpreted in the structure.
  class MissingConstant : public Error {
   public:
    explicit MissingConstant(std::string name);
    std::string const& name() const noexcept {
      return name_;
    }

   private:
    std::string name_;
  };

  class DuplicateConstant : public Error {
   public:
    explicit DuplicateConstant(std::string name);
    std::string const& name() const noexcept {
      return name_;
    }

   private:
    std::string name_;
  };

  // The bounded congruence closure did not certify a finite quotient.
  class NotClosedAtBound : public Error {
   public:
    NotClosedAtBound(std::size_t max_len, std::string reason);
    std::size_t max_len() const noexcept {
      return max_len_;
    }

   private:
    std::size_t max_len_;
  };

  class UnsafeQuery : public Error {
   public:
    using Error::Error;
  };

  class IndexOutOfRange : public Error {
   public:
    using Error::Error;
  };

  class UnknownSymbol : public Error {
   public:
    explicit UnknownSymbol(std::string symbol);
    std::string const& symbol() const noexcept {
      return symbol_;
    }

   private:
    std::string symbol_;
  };

  class CeilingExceeded : public Error {
   public:
    using Error::Error;
  };

  class SignatureMismatch : public Error {
   public:
    using Error::Error;
  };

}  // namespace thue2dlite
