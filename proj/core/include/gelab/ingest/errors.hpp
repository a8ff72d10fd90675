#pragma once

#include <string>

#include "gelab/error.hpp"

namespace gelab::ingest {

enum class IngestErrc {
  InvalidConfig,
  HttpError,
  ParseError,
  UnknownItem,
  SchemaError,
  DuplicateKey,
  NonPositivePrice,
  EmptySeries,
  IoError,
};

const char* to_string(IngestErrc e);

class IngestError : public Error {
 public:
  IngestError(IngestErrc kind, const std::string& message, Details details = {})
      : Error(to_string(kind), message, std::move(details)), kind_(kind) {}
  IngestErrc kind() const noexcept { return kind_; }

 private:
  IngestErrc kind_;
};

}  // namespace gelab::ingest
