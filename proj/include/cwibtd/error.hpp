#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cwibtd {

/// Broad failure category; the CLI maps it to an exit code.
enum class ErrorKind {
  usage = 1,
  data = 2,
  numerical = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define CWIBTD_DEFINE_ERROR(Name, Kind)                               \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(Kind, what) {}     \
  }

CWIBTD_DEFINE_ERROR(InvalidConfig, ErrorKind::usage);
CWIBTD_DEFINE_ERROR(IoError, ErrorKind::data);
CWIBTD_DEFINE_ERROR(EmptyVocabulary, ErrorKind::data);
CWIBTD_DEFINE_ERROR(LabelMismatch, ErrorKind::data);
CWIBTD_DEFINE_ERROR(InsufficientClassSize, ErrorKind::data);
CWIBTD_DEFINE_ERROR(UndefinedActivity, ErrorKind::data);
CWIBTD_DEFINE_ERROR(InvalidScale, ErrorKind::usage);
CWIBTD_DEFINE_ERROR(EmptyInput, ErrorKind::data);
CWIBTD_DEFINE_ERROR(LengthMismatch, ErrorKind::data);
CWIBTD_DEFINE_ERROR(UnknownClass, ErrorKind::data);
CWIBTD_DEFINE_ERROR(VocabularyMismatch, ErrorKind::data);
CWIBTD_DEFINE_ERROR(FormatError, ErrorKind::data);
CWIBTD_DEFINE_ERROR(NumericalError, ErrorKind::numerical);

#undef CWIBTD_DEFINE_ERROR

/// Malformed input record; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& msg)
      : Error(ErrorKind::data,
              file + ":" + std::to_string(line) + ": " + msg),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cwibtd
